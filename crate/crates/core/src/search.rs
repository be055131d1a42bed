//! Seeded hill climbing over the weights of a parametric five-component ranker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::benchmarks::BenchmarkCase;
use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_COUNT};
use crate::harness::{score_benchmark, HarnessConfig, SuiteReport};
use crate::rankers::{discretize, Rank, Ranker};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Feature(usize),
    /// `1 - f_i`
    Complement(usize),
    /// `f_i^k`
    Power(usize, i32),
}

impl Factor {
    fn index(&self) -> usize {
        match *self {
            Factor::Feature(i) | Factor::Complement(i) | Factor::Power(i, _) => i,
        }
    }

    fn eval(&self, fv: &FeatureVector) -> f64 {
        match *self {
            Factor::Feature(i) => fv[i],
            Factor::Complement(i) => 1.0 - fv[i],
            Factor::Power(i, k) => fv[i].powi(k),
        }
    }
}

/// `weight * product(factors)`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub weight: f64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(weight: f64, factors: Vec<Factor>) -> Self {
        Self { weight, factors }
    }

    pub fn linear(weight: f64, feature: usize) -> Self {
        Self::new(weight, vec![Factor::Feature(feature)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Linear,
    /// `amplitude * tanh(sum / scale)`
    Saturated { scale: f64, amplitude: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub terms: Vec<Term>,
    pub shape: Shape,
}

impl Component {
    pub fn linear(terms: Vec<Term>) -> Self {
        Self {
            terms,
            shape: Shape::Linear,
        }
    }

    fn eval(&self, fv: &FeatureVector) -> f64 {
        let sum = self
            .terms
            .iter()
            .map(|t| t.factors.iter().fold(t.weight, |acc, f| acc * f.eval(fv)))
            .fold(0.0, |acc, v| acc + v);
        match self.shape {
            Shape::Linear => sum,
            Shape::Saturated { scale, amplitude } => amplitude * (sum / scale).tanh(),
        }
    }
}

/// Five-component ranker whose first component is fixed by normalization
/// (`0` in monomial phase, else `f0 + c1_shift`) and whose other four are
/// weighted sums of feature products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankerTemplate {
    pub name: String,
    pub c1_shift: f64,
    pub components: [Component; 4],
    pub discretize: bool,
    /// Symmetric bound per flattened weight.
    pub bounds: Vec<f64>,
}

impl RankerTemplate {
    /// Bounds default to `max(1, 2|w|)` around the given weights.
    pub fn new(name: &str, c1_shift: f64, components: [Component; 4], discretize: bool) -> Result<Self> {
        for c in &components {
            for t in &c.terms {
                if let Some(f) = t.factors.iter().find(|f| f.index() >= FEATURE_COUNT) {
                    return Err(Error::InvalidVariables(format!("feature index {} out of range", f.index())));
                }
            }
        }
        let mut t = Self {
            name: name.to_string(),
            c1_shift,
            components,
            discretize,
            bounds: Vec::new(),
        };
        t.bounds = t.weights().iter().map(|w| (2.0 * w.abs()).max(1.0)).collect();
        Ok(t)
    }

    /// Reproduces the discretized lex ranker.
    pub fn disc_lex() -> Self {
        use Factor::*;
        let c2 = Component::linear(vec![
            Term::linear(0.5, 14),
            Term::linear(0.5, 21),
            Term::linear(0.05, 1),
            Term::linear(0.01, 5),
        ]);
        let c3 = Component::linear(vec![Term::linear(1.0, 10), Term::linear(1.0, 19), Term::linear(0.1, 20)]);
        let c4 = Component::linear(vec![
            Term::new(-4.0, vec![Power(24, 3)]),
            Term::linear(-1.0, 25),
            Term::new(-5.0, vec![Complement(23), Feature(24)]),
            Term::new(-10.0, vec![Feature(10), Feature(24), Complement(23)]),
        ]);
        let c5 = Component::linear(vec![Term::linear(1.0, 18), Term::linear(0.5, 8)]);
        Self::new("disc_lex_template", 0.0, [c2, c3, c4, c5], true).expect("static template")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "disc_lex" => Ok(Self::disc_lex()),
            other => Err(Error::UnknownRanker(other.to_string())),
        }
    }

    pub fn weight_count(&self) -> usize {
        self.components.iter().map(|c| c.terms.len()).sum()
    }

    /// Weights flattened in component then term order.
    pub fn weights(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| c.terms.iter().map(|t| t.weight))
            .collect()
    }

    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.weight_count() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: self.weight_count(),
            });
        }
        let mut out = self.clone();
        let mut it = weights.iter();
        for c in &mut out.components {
            for t in &mut c.terms {
                t.weight = *it.next().expect("length checked");
            }
        }
        Ok(out)
    }

    pub fn raw(&self, fv: &FeatureVector) -> [f64; 5] {
        let c1 = if fv.monomial_phase() { 0.0 } else { fv[0] + self.c1_shift };
        let [a, b, c, d] = &self.components;
        [c1, a.eval(fv), b.eval(fv), c.eval(fv), d.eval(fv)]
    }
}

impl Ranker for RankerTemplate {
    fn name(&self) -> &str {
        &self.name
    }

    fn arity(&self) -> usize {
        5
    }

    fn rank(&self, fv: &FeatureVector) -> Rank {
        let raw = self.raw(fv);
        Rank {
            raw: raw.to_vec(),
            discrete: self.discretize.then(|| discretize(&raw).to_vec()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Candidate evaluations after the initial one.
    pub budget: usize,
    pub seed: u64,
    /// Uniform restarts inside the bounds, spread evenly over the budget.
    pub restarts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub best_weights: Vec<f64>,
    pub best_score: f64,
    pub initial_score: f64,
    pub evaluations: usize,
    /// `(evaluation index, score)` for the start and every new best.
    pub history: Vec<(usize, f64)>,
    #[serde(skip)]
    pub report: SuiteReport,
}

impl SearchResult {
    pub fn history_csv(&self) -> String {
        let mut out = String::from("evaluation,score\n");
        for (i, s) in &self.history {
            out.push_str(&format!("{i},{s}\n"));
        }
        out
    }
}

fn score(template: &RankerTemplate, suite_name: &str, suite: &[BenchmarkCase], cfg: &HarnessConfig) -> Result<(f64, SuiteReport)> {
    let report = score_benchmark(suite_name, suite, template, cfg)?;
    Ok((report.objective(cfg), report))
}

pub fn hill_climb(
    template: &RankerTemplate,
    suite_name: &str,
    suite: &[BenchmarkCase],
    cfg: &HarnessConfig,
    search: &SearchConfig,
) -> Result<SearchResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let bounds = template.bounds.clone();
    let n = bounds.len();

    let mut current = template.weights();
    let (initial_score, initial_report) = score(template, suite_name, suite, cfg)?;
    let mut current_score = initial_score;
    let mut best = (current.clone(), initial_score, initial_report);
    let mut history = vec![(0usize, initial_score)];

    let restart_every = if search.restarts > 0 {
        (search.budget / (search.restarts + 1)).max(1)
    } else {
        usize::MAX
    };

    for eval in 1..=search.budget {
        if n == 0 {
            break;
        }
        let is_restart = eval % restart_every == 0 && eval / restart_every <= search.restarts;
        let candidate: Vec<f64> = if is_restart {
            bounds.iter().map(|&b| rng.random_range(-b..=b)).collect()
        } else {
            let i = rng.random_range(0..n);
            let noise = Normal::new(0.0, 0.1 * bounds[i]).expect("positive scale");
            let mut c = current.clone();
            c[i] = (c[i] + noise.sample(&mut rng)).clamp(-bounds[i], bounds[i]);
            c
        };
        let (s, report) = score(&template.with_weights(&candidate)?, suite_name, suite, cfg)?;
        if is_restart || s > current_score {
            current = candidate.clone();
            current_score = s;
        }
        if s > best.1 {
            history.push((eval, s));
            best = (candidate, s, report);
        }
    }

    Ok(SearchResult {
        best_weights: best.0,
        best_score: best.1,
        initial_score,
        evaluations: search.budget,
        history,
        report: best.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::focused71;
    use crate::features::extract_features;
    use crate::ideal::{State, VariableSet};
    use crate::rankers::BuiltinRanker;
    use std::sync::Arc;

    #[test]
    fn disc_lex_template_matches_builtin() {
        let vars = Arc::new(VariableSet::dim4_p3());
        for case in focused71().iter() {
            let s = State::initial(vars.clone(), case.ideal.clone()).unwrap();
            let fv = extract_features(&s);
            let builtin = BuiltinRanker::DiscLex.rank(&fv);
            // Equal as numbers; signed zeros may differ.
            assert_eq!(builtin, RankerTemplate::disc_lex().rank(&fv), "{}", case.name);
        }
    }

    #[test]
    fn weights_round_trip() {
        let t = RankerTemplate::disc_lex();
        let w = t.weights();
        assert_eq!(w.len(), 13);
        assert_eq!(t.with_weights(&w).unwrap(), t);
        assert_eq!(t.bounds[0], 1.0);
        assert_eq!(t.bounds[10], 20.0);
        assert!(t.with_weights(&w[1..]).is_err());
    }

    #[test]
    fn zero_budget_keeps_start() {
        let suite: Vec<_> = focused71().into_iter().take(5).collect();
        let t = RankerTemplate::disc_lex();
        let cfg = HarnessConfig::default();
        let r = hill_climb(&t, "s", &suite, &cfg, &SearchConfig { budget: 0, seed: 1, restarts: 0 }).unwrap();
        assert_eq!(r.best_weights, t.weights());
        assert_eq!(r.best_score, r.initial_score);
        assert_eq!(r.history.len(), 1);
    }

    #[test]
    fn search_is_seeded_and_monotone() {
        let suite: Vec<_> = focused71().into_iter().skip(40).take(8).collect();
        // Start from a deliberately poor point.
        let t = RankerTemplate::disc_lex();
        let start = t.with_weights(&vec![0.0; t.weight_count()]).unwrap();
        let cfg = HarnessConfig::default();
        let sc = SearchConfig { budget: 25, seed: 7, restarts: 1 };
        let a = hill_climb(&start, "s", &suite, &cfg, &sc).unwrap();
        let b = hill_climb(&start, "s", &suite, &cfg, &sc).unwrap();
        assert_eq!(a.best_weights, b.best_weights);
        assert_eq!(a.history, b.history);
        assert!(a.best_score >= a.initial_score);
        assert!(a.history.windows(2).all(|w| w[1].1 > w[0].1));
        let rescored = score_benchmark("s", &suite, &start.with_weights(&a.best_weights).unwrap(), &cfg).unwrap();
        assert_eq!(rescored.saturated_score, a.best_score);
    }
}
