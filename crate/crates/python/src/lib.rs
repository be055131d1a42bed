//! Python bindings for the blowup-lab core.

use std::sync::Arc;

use blowup_lab::benchmarks::{self, manifest_from_json, manifest_to_json};
use blowup_lab::harness::{evaluate_state, score_benchmark, verify_counterexamples as verify, HarnessConfig};
use blowup_lab::rankers::{discretize as disc, ranker_by_name, ranker_names as names, Ranker};
use blowup_lab::simulator::{self as sim, SimConfig};
use blowup_lab::{extract_features, State, VariableSet, FEATURE_NAMES};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: blowup_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cfg(m: usize, cap: usize) -> HarnessConfig {
    HarnessConfig {
        m: m.max(1),
        cap,
        ..HarnessConfig::default()
    }
}

/// Simulator state: tagged monomials plus boundary record.
#[pyclass(name = "State", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyState {
    inner: State,
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (poly, p = 3, vars = None))]
    fn new(poly: &str, p: u32, vars: Option<Vec<String>>) -> PyResult<Self> {
        let names = vars.unwrap_or_else(|| ["x", "y", "w", "z"].map(String::from).to_vec());
        let vs = VariableSet::from_names(&names, p).map_err(py_err)?;
        let inner = State::parse(poly, Arc::new(vs)).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.vars.names().to_vec()
    }

    #[getter]
    fn char_p(&self) -> u32 {
        self.inner.vars.char_p()
    }

    /// (tag, exponents) pairs in generator order.
    #[getter]
    fn monomials(&self) -> Vec<(String, Vec<u64>)> {
        self.inner
            .ideal
            .iter()
            .map(|m| (m.tag.to_string(), m.exponents.as_slice().to_vec()))
            .collect()
    }

    #[getter]
    fn boundary(&self) -> Vec<u64> {
        self.inner.boundary.as_slice().to_vec()
    }

    fn polynomial(&self) -> String {
        self.inner.ideal.render(&self.inner.vars)
    }

    fn features(&self) -> Vec<f64> {
        extract_features(&self.inner).0.to_vec()
    }

    fn is_monomial(&self) -> bool {
        sim::is_monomial_phase(&self.inner.ideal, &self.inner.vars, &sim::MonomialTags::any())
    }

    /// One blow-up: returns (next_state, center_kind, chart_variable, exc).
    fn step(&self) -> PyResult<(PyState, String, String, u64)> {
        let s = sim::step(&self.inner).map_err(py_err)?;
        let var = self.inner.vars.names()[s.center.chart_variable(&self.inner.vars)].clone();
        Ok((PyState { inner: s.state }, s.center.kind().to_string(), var, s.exc))
    }

    fn __repr__(&self) -> String {
        format!("State({:?}, p={})", self.polynomial(), self.char_p())
    }
}

/// States visited until monomial phase or the step cap.
#[pyfunction]
#[pyo3(signature = (state, cap = sim::DEFAULT_CAP))]
fn trajectory(state: &PyState, cap: usize) -> PyResult<Vec<PyState>> {
    let cfg = SimConfig {
        cap,
        ..SimConfig::default()
    };
    let t = sim::run_trajectory(state.inner.clone(), &cfg).map_err(py_err)?;
    Ok(t.states.into_iter().map(|inner| PyState { inner }).collect())
}

/// Raw rank components, plus the discretized tuple when the ranker has one.
#[pyfunction]
fn rank(ranker: &str, features: Vec<f64>) -> PyResult<(Vec<f64>, Option<Vec<i64>>)> {
    let r = ranker_by_name(ranker).map_err(py_err)?;
    let fv: [f64; 26] = features
        .try_into()
        .map_err(|v: Vec<f64>| PyValueError::new_err(format!("expected 26 features, got {}", v.len())))?;
    let out = r.rank(&blowup_lab::FeatureVector(fv));
    Ok((out.raw, out.discrete))
}

#[pyfunction]
fn discretize(raw: [f64; 5]) -> [i64; 5] {
    disc(&raw)
}

/// Per-step trace of one state as CSV text.
#[pyfunction]
#[pyo3(signature = (ranker, state, m = 5, cap = sim::DEFAULT_CAP))]
fn trace(ranker: &str, state: &PyState, m: usize, cap: usize) -> PyResult<String> {
    let r = ranker_by_name(ranker).map_err(py_err)?;
    let eval = evaluate_state("trace", state.inner.clone(), &r, &cfg(m, cap)).map_err(py_err)?;
    Ok(blowup_lab::trace::render_csv(&eval))
}

/// Scores a ranker on a builtin suite name or a manifest JSON string; returns report JSON.
#[pyfunction]
#[pyo3(signature = (ranker, suite, m = 5, cap = sim::DEFAULT_CAP))]
fn score_suite(py: Python<'_>, ranker: &str, suite: &str, m: usize, cap: usize) -> PyResult<String> {
    let r = ranker_by_name(ranker).map_err(py_err)?;
    let (name, cases) = if suite.trim_start().starts_with('[') {
        ("manifest".to_string(), manifest_from_json(suite).map_err(py_err)?)
    } else {
        (suite.to_string(), benchmarks::suite(suite).map_err(py_err)?)
    };
    let c = cfg(m, cap);
    let report = py.detach(|| score_benchmark(&name, &cases, &r, &c)).map_err(py_err)?;
    report.to_json().map_err(py_err)
}

/// Builtin suite as manifest JSON.
#[pyfunction]
fn builtin_suite(name: &str) -> PyResult<String> {
    let cases = benchmarks::suite(name).map_err(py_err)?;
    manifest_to_json(&cases).map_err(py_err)
}

/// Counterexample findings as JSON.
#[pyfunction]
fn verify_counterexamples() -> PyResult<String> {
    let report = verify().map_err(py_err)?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
fn feature_names() -> Vec<&'static str> {
    FEATURE_NAMES.to_vec()
}

#[pyfunction]
fn ranker_names() -> Vec<&'static str> {
    names().to_vec()
}

#[pymodule]
fn blowup_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(discretize, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(score_suite, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_suite, m)?)?;
    m.add_function(wrap_pyfunction!(verify_counterexamples, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(ranker_names, m)?)?;
    m.add("SUITES", benchmarks::SUITE_NAMES.to_vec())?;
    Ok(())
}
