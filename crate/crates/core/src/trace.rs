//! Per-step CSV traces of a scored trajectory.
//!
//! Reals use Rust's shortest round-trip formatting, so traces diff cleanly.

use std::fmt::Write;

use crate::error::Result;
use crate::features::FEATURE_NAMES;
use crate::harness::{evaluate_state, CaseEvaluation, HarnessConfig};
use crate::ideal::State;
use crate::rankers::Ranker;

fn join<T: ToString>(values: &[T], sep: &str) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Header and one row per state. Row `t` carries the center and exceptional
/// exponent of the step leaving state `t` (empty on the final row), then the
/// features, rank components, a 0/1 best-so-far marker and the violation
/// bitmask (delay 1, normalization 2, f0 alignment 4, f14 alignment 8).
pub fn render_csv(eval: &CaseEvaluation) -> String {
    let report = &eval.report;
    let arity = report.rank_stream.first().map_or(0, |r| r.raw.len());
    let discrete = report.rank_stream.first().is_some_and(|r| r.discrete.is_some());

    let mut header = vec!["step".to_string(), "center_kind".into(), "center_var".into(), "exc".into()];
    header.extend(FEATURE_NAMES.iter().map(|n| n.to_string()));
    header.extend((1..=arity).map(|i| format!("c{i}")));
    if discrete {
        header.extend((1..=arity).map(|i| format!("d{i}")));
    }
    header.push("best_so_far".into());
    header.push("violation_flags".into());

    let mut out = header.join(",");
    out.push('\n');
    let traj = &eval.trajectory;
    for (t, fv) in eval.features.iter().enumerate() {
        let (kind, var, exc) = match traj.centers.get(t) {
            Some(c) => {
                let vars = &traj.states[t].vars;
                let name = vars.names()[c.chart_variable(vars)].clone();
                (c.kind().to_string(), name, traj.excs[t].to_string())
            }
            None => (String::new(), String::new(), String::new()),
        };
        let mut row = format!("{t},{kind},{var},{exc},{}", join(&fv.0, ","));
        if let Some(rank) = report.rank_stream.get(t) {
            let _ = write!(row, ",{}", join(&rank.raw, ","));
            if let Some(d) = &rank.discrete {
                let _ = write!(row, ",{}", join(d, ","));
            }
        }
        // 1 when this row's rank is the running best (always at step 0).
        let best = u8::from(t == 0 || report.improved.get(t).copied().unwrap_or(false));
        let flags = report.step_flags.get(t).copied().unwrap_or(0);
        let _ = writeln!(row, ",{best},{flags}");
        out.push_str(&row);
    }
    out
}

pub fn trace(initial: State, ranker: &dyn Ranker, cfg: &HarnessConfig) -> Result<(String, CaseEvaluation)> {
    let eval = evaluate_state("trace", initial, ranker, cfg)?;
    Ok((render_csv(&eval), eval))
}
