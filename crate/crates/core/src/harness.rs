//! Scoring a ranker over simulator trajectories.

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::benchmarks::BenchmarkCase;
use crate::error::{Error, Result};
use crate::features::{extract_features_with, FeatureVector};
use crate::ideal::{State, VariableSet};
use crate::rankers::{lex_compare, BuiltinRanker, Rank, Ranker};
use crate::simulator::{run_trajectory, MonomialTags, SimConfig, Trajectory, DEFAULT_CAP};

/// Per-step violation flag bits.
pub const FLAG_DELAY: u8 = 1;
pub const FLAG_NORMALIZATION: u8 = 2;
pub const FLAG_ALIGN_F0: u8 = 4;
pub const FLAG_ALIGN_F14: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayAccrual {
    /// +1 for every step while the stall lasts.
    PerStep,
    /// +1 the first time a stall reaches the window.
    OncePerStall,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessConfig {
    pub m: usize,
    pub cap: usize,
    pub heavy_weight: f64,
    pub light_weight: f64,
    pub structural_penalty: f64,
    /// `None` means the whole suite.
    pub stage_prefixes: Vec<Option<usize>>,
    pub stage_weights: Vec<f64>,
    pub saturated: bool,
    pub delay_accrual: DelayAccrual,
    /// Whether alignment is also checked at the monomial-entry step.
    pub align_at_tau: bool,
    pub monomial_tags: MonomialTags,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            m: 5,
            cap: DEFAULT_CAP,
            heavy_weight: 1.0,
            light_weight: 0.5,
            structural_penalty: 1000.0,
            stage_prefixes: vec![Some(20), Some(40), None],
            stage_weights: vec![1.0, 2.0, 4.0],
            saturated: true,
            delay_accrual: DelayAccrual::PerStep,
            align_at_tau: true,
            monomial_tags: MonomialTags::any(),
        }
    }
}

impl HarnessConfig {
    pub fn with_m(m: usize) -> Self {
        Self {
            m,
            ..Self::default()
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            cap: self.cap,
            monomial_tags: self.monomial_tags.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationReport {
    pub case: String,
    pub total_violations: f64,
    pub delay_violations: usize,
    pub normalization_violations: usize,
    pub align_f0: f64,
    pub align_f14: f64,
    pub structural: bool,
    pub local_increases: usize,
    pub max_plateau: usize,
    pub solved: bool,
    /// First monomial-phase index, or the stream length.
    pub tau: usize,
    pub rank_stream: Vec<Rank>,
    pub best_stream: Vec<Rank>,
    pub step_flags: Vec<u8>,
    /// Whether the best-so-far rank strictly dropped at each step.
    pub improved: Vec<bool>,
}

impl ViolationReport {
    fn structural_failure(case: &str, ranks: &[Rank], penalty: f64) -> Self {
        Self {
            case: case.to_string(),
            total_violations: penalty,
            delay_violations: 0,
            normalization_violations: 0,
            align_f0: 0.0,
            align_f14: 0.0,
            structural: true,
            local_increases: 0,
            max_plateau: 0,
            solved: false,
            tau: ranks.len(),
            rank_stream: ranks.to_vec(),
            best_stream: Vec::new(),
            step_flags: vec![0; ranks.len()],
            improved: vec![false; ranks.len()],
        }
    }
}

fn lex(a: &Rank, b: &Rank) -> Ordering {
    lex_compare(a, b).expect("ranks validated before comparison")
}

/// Scores one rank stream against its feature stream.
///
/// `arity` is the length every rank must have; `None` only requires the
/// stream to be internally consistent.
pub fn evaluate_trajectory(
    case: &str,
    ranks: &[Rank],
    features: &[FeatureVector],
    arity: Option<usize>,
    cfg: &HarnessConfig,
) -> Result<ViolationReport> {
    if ranks.len() != features.len() {
        return Err(Error::LengthMismatch {
            left: ranks.len(),
            right: features.len(),
        });
    }
    let want = arity.or_else(|| ranks.first().map(Rank::len)).unwrap_or(0);
    let malformed = ranks.iter().any(|r| {
        r.len() != want || r.is_empty() || !r.is_finite() || r.discrete.as_ref().is_some_and(|d| d.len() != r.raw.len())
    });
    if malformed {
        return Ok(ViolationReport::structural_failure(case, ranks, cfg.structural_penalty));
    }

    let n = ranks.len();
    let tau = features.iter().position(|f| f.monomial_phase()).unwrap_or(n);
    let mut flags = vec![0u8; n];
    let mut improved = vec![false; n];
    let mut best_stream = Vec::with_capacity(n);

    let mut normalization = 0usize;
    for (t, (r, f)) in ranks.iter().zip(features).enumerate() {
        let c1 = r.component(0);
        let ok = if f.monomial_phase() { c1 == 0.0 } else { c1 > 0.0 };
        if !ok {
            normalization += 1;
            flags[t] |= FLAG_NORMALIZATION;
        }
    }

    let mut delay = 0usize;
    let mut last_improve = 0usize;
    let mut charged_stall = false;
    for t in 0..n {
        if t == 0 {
            best_stream.push(ranks[0].clone());
        } else {
            let prev = &best_stream[t - 1];
            if lex(&ranks[t], prev) == Ordering::Less {
                best_stream.push(ranks[t].clone());
                last_improve = t;
                improved[t] = true;
                charged_stall = false;
            } else {
                best_stream.push(prev.clone());
            }
        }
        if t < tau && t - last_improve >= cfg.m {
            let charge = match cfg.delay_accrual {
                DelayAccrual::PerStep => true,
                DelayAccrual::OncePerStall => !charged_stall,
            };
            if charge {
                delay += 1;
                flags[t] |= FLAG_DELAY;
                charged_stall = true;
            }
        }
    }

    let mut align_f0 = 0.0;
    let mut align_f14 = 0.0;
    let last_checked = if cfg.align_at_tau { tau } else { tau.saturating_sub(1) };
    for t in 1..n.min(last_checked + 1) {
        let descended = lex(&ranks[t], &ranks[t - 1]) == Ordering::Less;
        if descended {
            continue;
        }
        if features[t][0] < features[t - 1][0] {
            align_f0 += cfg.heavy_weight;
            flags[t] |= FLAG_ALIGN_F0;
        }
        if features[t][14] < features[t - 1][14] {
            align_f14 += cfg.light_weight;
            flags[t] |= FLAG_ALIGN_F14;
        }
    }

    let mut local_increases = 0usize;
    let mut max_plateau = 0usize;
    let mut run = 0usize;
    for t in 1..n {
        match lex(&ranks[t], &ranks[t - 1]) {
            Ordering::Equal => {
                run += 1;
                max_plateau = max_plateau.max(run);
            }
            o => {
                run = 0;
                if o == Ordering::Greater {
                    local_increases += 1;
                }
            }
        }
    }

    let total = (delay + normalization) as f64 + align_f0 + align_f14;
    Ok(ViolationReport {
        case: case.to_string(),
        total_violations: total,
        delay_violations: delay,
        normalization_violations: normalization,
        align_f0,
        align_f14,
        structural: false,
        local_increases,
        max_plateau,
        solved: total == 0.0,
        tau,
        rank_stream: ranks.to_vec(),
        best_stream,
        step_flags: flags,
        improved,
    })
}

/// True iff two evaluations on `fv` are bit-identical.
pub fn check_determinism(ranker: &dyn Ranker, fv: &FeatureVector) -> bool {
    ranker.rank(fv).bit_eq(&ranker.rank(fv))
}

/// Trajectory, features and scored ranks of one initial state.
#[derive(Clone, Debug)]
pub struct CaseEvaluation {
    pub trajectory: Trajectory,
    pub features: Vec<FeatureVector>,
    pub report: ViolationReport,
}

pub fn evaluate_state(name: &str, initial: State, ranker: &dyn Ranker, cfg: &HarnessConfig) -> Result<CaseEvaluation> {
    let trajectory = run_trajectory(initial, &cfg.sim_config())?;
    let features: Vec<FeatureVector> = trajectory
        .states
        .iter()
        .map(|s| extract_features_with(s, &cfg.monomial_tags))
        .collect();
    let mut ranks = Vec::with_capacity(features.len());
    let mut impure = false;
    for f in &features {
        let r = ranker.rank(f);
        impure |= !r.bit_eq(&ranker.rank(f));
        ranks.push(r);
    }
    let report = if impure {
        ViolationReport::structural_failure(name, &ranks, cfg.structural_penalty)
    } else {
        evaluate_trajectory(name, &ranks, &features, Some(ranker.arity()), cfg)?
    };
    Ok(CaseEvaluation {
        trajectory,
        features,
        report,
    })
}

pub fn evaluate_case(case: &BenchmarkCase, ranker: &dyn Ranker, cfg: &HarnessConfig) -> Result<CaseEvaluation> {
    let state = case.state().map_err(|e| e.in_case(&case.name))?;
    evaluate_state(&case.name, state, ranker, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseSummary {
    pub name: String,
    pub violations: f64,
    pub solved: bool,
    pub increases: usize,
    pub max_plateau: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteTotals {
    pub cases: usize,
    pub solved: usize,
    pub violations: f64,
    pub staged_violations: f64,
    pub local_increases: usize,
    pub max_plateau: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub ranker: String,
    pub m: usize,
    pub cap: usize,
    pub cases: Vec<CaseSummary>,
    pub totals: SuiteTotals,
    pub saturated_score: f64,
    #[serde(skip)]
    pub reports: Vec<ViolationReport>,
}

impl SuiteReport {
    pub fn all_solved(&self) -> bool {
        self.totals.solved == self.totals.cases
    }

    /// The objective maximized by search: the saturated score, or the
    /// negated staged total when saturation is off.
    pub fn objective(&self, cfg: &HarnessConfig) -> f64 {
        if cfg.saturated {
            self.saturated_score
        } else {
            -self.totals.staged_violations
        }
    }

    pub fn case(&self, name: &str) -> Option<&ViolationReport> {
        self.reports.iter().find(|r| r.case == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `2 N_solved - sum tanh(v_i / 10)`.
pub fn saturated_score(violations: &[f64], solved: usize) -> f64 {
    2.0 * solved as f64 - violations.iter().map(|v| (v / 10.0).tanh()).sum::<f64>()
}

pub fn staged_total(violations: &[f64], cfg: &HarnessConfig) -> f64 {
    cfg.stage_prefixes
        .iter()
        .zip(&cfg.stage_weights)
        .map(|(prefix, w)| {
            let k = prefix.unwrap_or(violations.len()).min(violations.len());
            w * violations[..k].iter().sum::<f64>()
        })
        .sum()
}

pub fn summarize(suite: &str, ranker: &str, reports: Vec<ViolationReport>, cfg: &HarnessConfig) -> SuiteReport {
    let violations: Vec<f64> = reports.iter().map(|r| r.total_violations).collect();
    let solved = reports.iter().filter(|r| r.solved).count();
    let totals = SuiteTotals {
        cases: reports.len(),
        solved,
        violations: violations.iter().sum(),
        staged_violations: staged_total(&violations, cfg),
        local_increases: reports.iter().map(|r| r.local_increases).sum(),
        max_plateau: reports.iter().map(|r| r.max_plateau).max().unwrap_or(0),
    };
    SuiteReport {
        suite: suite.to_string(),
        ranker: ranker.to_string(),
        m: cfg.m,
        cap: cfg.cap,
        cases: reports
            .iter()
            .map(|r| CaseSummary {
                name: r.case.clone(),
                violations: r.total_violations,
                solved: r.solved,
                increases: r.local_increases,
                max_plateau: r.max_plateau,
            })
            .collect(),
        totals,
        saturated_score: saturated_score(&violations, solved),
        reports,
    }
}

/// Scores every case in parallel; the report keeps suite order.
pub fn score_benchmark(suite: &str, cases: &[BenchmarkCase], ranker: &dyn Ranker, cfg: &HarnessConfig) -> Result<SuiteReport> {
    let reports = cases
        .par_iter()
        .map(|c| evaluate_case(c, ranker, cfg).map(|e| e.report))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(suite, ranker.name(), reports, cfg))
}

pub const LEX_COUNTEREXAMPLE: &str = "z^3 + x^7 + z^5*y^2 + z^3*x^2*w^4*y^6 + z^3*x^2*w^6*y^3 + z^4*w^6*y^5";
pub const DISC_COUNTEREXAMPLE: &str = "z^3 + x^12 + y^6 + w^9*y^4 + x^9*y^8*w^10";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub label: String,
    pub ranker: String,
    pub polynomial: String,
    pub m: usize,
    pub delay_violations: usize,
    pub total_violations: f64,
    pub initial_rank: Rank,
    pub expectation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub findings: Vec<Finding>,
}

impl CounterexampleReport {
    pub fn all_hold(&self) -> bool {
        self.findings.iter().all(|f| f.holds)
    }
}

fn finding(label: &str, ranker: BuiltinRanker, poly: &str, m: usize, expect_violation: bool) -> Result<(Finding, CaseEvaluation)> {
    let state = State::parse(poly, Arc::new(VariableSet::dim4_p3()))?;
    let cfg = HarnessConfig::with_m(m);
    let eval = evaluate_state(label, state, &ranker, &cfg)?;
    let r = &eval.report;
    let holds = if expect_violation {
        r.delay_violations >= 1
    } else {
        r.total_violations == 0.0
    };
    let f = Finding {
        label: label.to_string(),
        ranker: ranker.as_str().to_string(),
        polynomial: poly.to_string(),
        m,
        delay_violations: r.delay_violations,
        total_violations: r.total_violations,
        initial_rank: r.rank_stream[0].clone(),
        expectation: if expect_violation {
            "at least one delay violation".into()
        } else {
            "no violations".into()
        },
        holds,
    };
    Ok((f, eval))
}

/// The two bounded-delay counterexamples and the repaired ranker on the second.
pub fn verify_counterexamples() -> Result<CounterexampleReport> {
    let specs = [
        ("lex_tuple_window_10", BuiltinRanker::CleanLex, LEX_COUNTEREXAMPLE, 10, true),
        ("disc_lex_window_5", BuiltinRanker::DiscLex, DISC_COUNTEREXAMPLE, 5, true),
        ("r100_window_5", BuiltinRanker::R100, DISC_COUNTEREXAMPLE, 5, false),
    ];
    let findings = specs
        .iter()
        .map(|&(label, r, poly, m, expect)| finding(label, r, poly, m, expect).map(|(f, _)| f))
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleReport { findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FEATURE_COUNT;
    use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

    fn fv(f0: f64, f9: f64) -> FeatureVector {
        let mut a = [0.0; FEATURE_COUNT];
        a[0] = f0;
        a[9] = f9;
        FeatureVector(a)
    }

    fn stream(values: &[f64]) -> Vec<Rank> {
        values.iter().map(|&v| Rank::raw(vec![1.0, v])).collect()
    }

    #[test]
    fn strictly_descending_stream_has_no_violations() {
        let ranks = stream(&[9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0]);
        let feats = vec![fv(3.0, 0.0); ranks.len()];
        for m in 1..6 {
            let r = evaluate_trajectory("d", &ranks, &feats, None, &HarnessConfig::with_m(m)).unwrap();
            assert!(r.solved);
            assert_eq!(r.max_plateau, 0);
        }
    }

    #[test]
    fn constant_stream_counts_delay_per_step() {
        let ranks = stream(&[4.0; 12]);
        let feats = vec![fv(3.0, 0.0); 12];
        let r = evaluate_trajectory("c", &ranks, &feats, None, &HarnessConfig::default()).unwrap();
        assert_eq!(r.delay_violations, 7);
        assert_eq!(r.max_plateau, 11);
        let flagged: Vec<usize> = (0..12).filter(|&t| r.step_flags[t] & FLAG_DELAY != 0).collect();
        assert_eq!(flagged, (5..12).collect::<Vec<_>>());

        let cfg = HarnessConfig {
            delay_accrual: DelayAccrual::OncePerStall,
            ..HarnessConfig::default()
        };
        let r = evaluate_trajectory("c", &ranks, &feats, None, &cfg).unwrap();
        assert_eq!(r.delay_violations, 1);
    }

    #[test]
    fn stall_stops_at_monomial_phase() {
        let ranks = stream(&[4.0; 8]);
        let mut feats = vec![fv(3.0, 0.0); 8];
        feats[6] = fv(0.0, 1.0);
        feats[7] = fv(0.0, 1.0);
        let mut ranks = ranks;
        ranks[6] = Rank::raw(vec![0.0, 4.0]);
        ranks[7] = Rank::raw(vec![0.0, 4.0]);
        let r = evaluate_trajectory("s", &ranks, &feats, None, &HarnessConfig::default()).unwrap();
        assert_eq!(r.tau, 6);
        // t = 5 only; t = 6 improves.
        assert_eq!(r.delay_violations, 1);
    }

    #[test]
    fn normalization_and_alignment() {
        let ranks = vec![Rank::raw(vec![2.0, 1.0]), Rank::raw(vec![2.0, 1.0]), Rank::raw(vec![1.0, 0.0])];
        let feats = vec![fv(3.0, 0.0), fv(2.0, 0.0), fv(0.0, 1.0)];
        let r = evaluate_trajectory("n", &ranks, &feats, None, &HarnessConfig::default()).unwrap();
        assert_eq!(r.normalization_violations, 1);
        assert_eq!(r.align_f0, 1.0);
        assert_eq!(r.total_violations, 2.0);
        assert!(!r.solved);
        assert_eq!(r.step_flags[1], FLAG_ALIGN_F0);
        assert_eq!(r.step_flags[2], FLAG_NORMALIZATION);
    }

    #[test]
    fn non_finite_rank_is_structural() {
        let ranks = vec![Rank::raw(vec![1.0, f64::NAN])];
        let r = evaluate_trajectory("x", &ranks, &[fv(1.0, 0.0)], None, &HarnessConfig::default()).unwrap();
        assert!(r.structural);
        assert_eq!(r.total_violations, 1000.0);
        let mixed = vec![Rank::raw(vec![1.0, 2.0]), Rank::raw(vec![1.0])];
        let r = evaluate_trajectory("y", &mixed, &[fv(1.0, 0.0); 2], None, &HarnessConfig::default()).unwrap();
        assert!(r.structural);
    }

    #[test]
    fn saturated_score_examples() {
        assert_eq!(saturated_score(&[0.0; 100], 100), 200.0);
        let mut v = vec![0.0; 100];
        v[0] = 10.0;
        assert!((saturated_score(&v, 99) - 197.238_405_844_044_24).abs() < 1e-9);
    }

    #[test]
    fn staged_total_single_stage_is_plain_sum() {
        let v = [1.0, 2.0, 3.0];
        let cfg = HarnessConfig {
            stage_prefixes: vec![None],
            stage_weights: vec![1.0],
            ..HarnessConfig::default()
        };
        assert_eq!(staged_total(&v, &cfg), 6.0);
        assert_eq!(staged_total(&v, &HarnessConfig::default()), 6.0 + 12.0 + 24.0);
    }

    struct Counter(AtomicU64);

    impl Ranker for Counter {
        fn name(&self) -> &str {
            "counter"
        }
        fn arity(&self) -> usize {
            2
        }
        fn rank(&self, _: &FeatureVector) -> Rank {
            let n = self.0.fetch_add(1, AtomicOrdering::SeqCst);
            Rank::raw(vec![1.0, n as f64])
        }
    }

    struct Clock;

    impl Ranker for Clock {
        fn name(&self) -> &str {
            "clock"
        }
        fn arity(&self) -> usize {
            2
        }
        fn rank(&self, _: &FeatureVector) -> Rank {
            let t = std::time::Instant::now();
            let mut spin = 0u64;
            while t.elapsed().as_nanos() == 0 {
                spin += 1;
            }
            let nanos = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos();
            Rank::raw(vec![1.0, (nanos as f64) + spin as f64])
        }
    }

    #[test]
    fn determinism_check() {
        let f = fv(3.0, 0.0);
        for r in BuiltinRanker::ALL {
            assert!(check_determinism(&r, &f));
        }
        assert!(!check_determinism(&Counter(AtomicU64::new(0)), &f));
        assert!(!check_determinism(&Clock, &f));
    }

    #[test]
    fn impure_ranker_fails_case() {
        let s = State::parse("z^3 + x^9", Arc::new(VariableSet::dim4_p3())).unwrap();
        let e = evaluate_state("c", s, &Counter(AtomicU64::new(0)), &HarnessConfig::default()).unwrap();
        assert!(e.report.structural);
        assert!(!e.report.solved);
    }

    #[test]
    fn counterexamples_hold() {
        let report = verify_counterexamples().unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(report.findings[1].initial_rank.discrete, Some(vec![3, 4280, 531, 5000, 220]));
    }
}
