//! Deterministic canonical blow-up step and trajectory generation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::{Boundary, IdealSpec, State, Tag, TaggedMonomial, VariableSet};

pub const DEFAULT_CAP: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Center {
    /// `V(x_j, z)` for the base variable at this index.
    Codim2(usize),
    /// Divisor-type fallback `V(z)`.
    DivisorZ,
}

impl Center {
    /// Chart variable receiving the exceptional contribution.
    pub fn chart_variable(&self, vars: &VariableSet) -> usize {
        match *self {
            Center::Codim2(j) => j,
            Center::DivisorZ => vars.elim_index(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Center::Codim2(_) => "codim2",
            Center::DivisorZ => "divisor_z",
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Codim2(j) => write!(f, "codim2({j})"),
            Center::DivisorZ => f.write_str("divisor_z"),
        }
    }
}

/// Which tags may remain when the monomial phase is declared. `None` disables
/// the tag check, leaving z-absence as the only condition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialTags(pub Option<BTreeSet<Tag>>);

impl MonomialTags {
    pub fn any() -> Self {
        Self(None)
    }

    pub fn only(tags: impl IntoIterator<Item = Tag>) -> Self {
        Self(Some(tags.into_iter().collect()))
    }

    pub fn allows(&self, tag: &Tag) -> bool {
        self.0.as_ref().is_none_or(|set| set.contains(tag))
    }
}

/// Pure z-order if the monic term is present, else the minimal total degree.
pub fn exceptional_exponent(ideal: &IdealSpec, vars: &VariableSet) -> Result<u64> {
    let elim = vars.elim_index();
    let ord_z = ideal
        .iter()
        .filter(|m| m.is_pure_z_power(elim))
        .map(|m| m.z_exponent(elim))
        .min();
    if let Some(o) = ord_z {
        return Ok(o);
    }
    ideal
        .iter()
        .map(|m| m.exponents.total_degree())
        .min()
        .ok_or(Error::EmptyIdeal)
}

fn pure_base_variable(m: &TaggedMonomial, vars: &VariableSet) -> Option<usize> {
    let e = &m.exponents;
    if e.get(vars.elim_index()) != 0 || e.support_size() != 1 {
        return None;
    }
    e.support().next()
}

pub fn select_center(ideal: &IdealSpec, vars: &VariableSet) -> Result<Center> {
    if ideal.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    let elim = vars.elim_index();

    // Rule 1: largest pure base power; first occurrence wins ties.
    let mut best: Option<(u64, usize)> = None;
    for m in ideal.iter() {
        if let Some(j) = pure_base_variable(m, vars) {
            let a = m.exponents.get(j);
            if best.is_none_or(|(b, _)| a > b) {
                best = Some((a, j));
            }
        }
    }
    if let Some((_, j)) = best {
        return Ok(Center::Codim2(j));
    }

    // Rule 2: first base monomial of minimal degree, then its largest exponent
    // (variable order breaks ties).
    let base_min = ideal
        .iter()
        .filter(|m| m.exponents.get(elim) == 0)
        .fold(None::<&TaggedMonomial>, |acc, m| match acc {
            Some(a) if a.exponents.total_degree() <= m.exponents.total_degree() => Some(a),
            _ => Some(m),
        });
    if let Some(m) = base_min {
        let mut pick: Option<(u64, usize)> = None;
        for j in vars.base_indices() {
            let a = m.exponents.get(j);
            if a > 0 && pick.is_none_or(|(b, _)| a > b) {
                pick = Some((a, j));
            }
        }
        if let Some((_, j)) = pick {
            return Ok(Center::Codim2(j));
        }
    }

    Ok(Center::DivisorZ)
}

/// Result of a single canonical step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub state: State,
    pub center: Center,
    pub exc: u64,
}

pub fn step(state: &State) -> Result<Step> {
    let vars = &state.vars;
    let elim = vars.elim_index();
    let exc = exceptional_exponent(&state.ideal, vars)?;
    let center = select_center(&state.ideal, vars)?;
    let v = center.chart_variable(vars);

    let keep: &[usize] = match center {
        Center::Codim2(j) => &[j, elim],
        Center::DivisorZ => &[elim],
    };
    let mut boundary: Boundary = state.boundary.restricted_to(keep);
    boundary.add(v, exc);

    let monomials = state
        .ideal
        .iter()
        .filter_map(|m| {
            let mut e = m.exponents.clone();
            let ez = e.get(elim);
            if ez > 0 {
                e.set(v, e.get(v).saturating_add(ez));
            }
            e.set(v, e.get(v).saturating_sub(exc));
            (!e.is_zero()).then(|| TaggedMonomial::new(m.tag.clone(), e))
        })
        .collect();

    Ok(Step {
        state: State {
            vars: vars.clone(),
            ideal: IdealSpec::new(monomials),
            boundary,
        },
        center,
        exc,
    })
}

/// No monomial involves z and (if enabled) every tag is allowed. The empty
/// ideal is vacuously in monomial phase.
pub fn is_monomial_phase(ideal: &IdealSpec, vars: &VariableSet, allowed: &MonomialTags) -> bool {
    let elim = vars.elim_index();
    ideal
        .iter()
        .all(|m| m.exponents.get(elim) == 0 && allowed.allows(&m.tag))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub cap: usize,
    pub monomial_tags: MonomialTags,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            monomial_tags: MonomialTags::any(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<State>,
    pub centers: Vec<Center>,
    pub excs: Vec<u64>,
    /// First index in monomial phase, if reached.
    pub monomial_step: Option<usize>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.centers.len()
    }

    pub fn terminated_monomial(&self) -> bool {
        self.monomial_step.is_some()
    }
}

pub fn run_trajectory(initial: State, cfg: &SimConfig) -> Result<Trajectory> {
    let mut states = vec![initial];
    let mut centers = Vec::new();
    let mut excs = Vec::new();
    let mut monomial_step = None;
    loop {
        let cur = states.last().expect("nonempty");
        if is_monomial_phase(&cur.ideal, &cur.vars, &cfg.monomial_tags) {
            monomial_step = Some(states.len() - 1);
            break;
        }
        if centers.len() >= cfg.cap {
            break;
        }
        let s = step(cur)?;
        centers.push(s.center);
        excs.push(s.exc);
        states.push(s.state);
    }
    Ok(Trajectory {
        states,
        centers,
        excs,
        monomial_step,
    })
}
