//! The 26 intrinsic proxy features of a simulator state.
//!
//! Every feature is a support/degree statistic of the exponent list and the
//! boundary. Notation used in comments:
//! - `M_min`: monomials of total degree equal to `exc`
//! - `M_base`: monomials with no z
//! - `M_base_min`: base monomials of minimal total degree `f1`

use std::fmt;
use std::ops::Index;

use crate::ideal::{ExponentVector, State};
use crate::simulator::{exceptional_exponent, is_monomial_phase, MonomialTags};

pub const FEATURE_COUNT: usize = 26;

/// Sentinel for `jacobian_min_order` when no nonzero partial exists.
pub const JACOBIAN_SENTINEL: f64 = 1000.0;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "max_order",
    "elimination_order",
    "dim_max_locus_proxy",
    "comp_max_locus_proxy",
    "boundary_count",
    "shade_penalty",
    "jacobian_vanish_flag",
    "newton_slope",
    "e_order_boundary_proxy",
    "monomial_phase",
    "inseparable_initial_flag",
    "plateau_risk",
    "frobenius_defect",
    "center_complexity",
    "weighted_order_proxy",
    "tau_directrix_proxy",
    "e_order_elim",
    "embedding_dim_proxy",
    "wildness_index",
    "base_dim_max_locus_proxy",
    "base_comp_max_locus_proxy",
    "hilbert_samuel_base_value",
    "jacobian_min_order",
    "jacobian_nonzero_partials",
    "padic_depth_initial",
    "boundary_mult_sum",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn zeros() -> Self {
        Self([0.0; FEATURE_COUNT])
    }

    pub fn as_array(&self) -> &[f64; FEATURE_COUNT] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn monomial_phase(&self) -> bool {
        self.0[9] == 1.0
    }

    /// Bitwise equality, used for purity checks.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Index<usize> for FeatureVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<[f64; FEATURE_COUNT]> for FeatureVector {
    fn from(a: [f64; FEATURE_COUNT]) -> Self {
        Self(a)
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn p_adic_valuation(mut n: u64, p: u64) -> u64 {
    let mut k = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Feature vector with the tag check of the monomial-phase flag disabled.
pub fn extract_features(state: &State) -> FeatureVector {
    extract_features_with(state, &MonomialTags::any())
}

pub fn extract_features_with(state: &State, monomial_tags: &MonomialTags) -> FeatureVector {
    let mut f = [0.0f64; FEATURE_COUNT];
    let vars = &state.vars;
    let Ok(exc) = exceptional_exponent(&state.ideal, vars) else {
        // Empty ideal: terminal, everything else zero.
        f[9] = 1.0;
        return FeatureVector(f);
    };
    let elim = vars.elim_index();
    let p = state.char_p();
    let b = &state.boundary;
    let monos = &state.ideal.monomials;
    let nvars = vars.len();

    let m_min: Vec<&ExponentVector> = monos
        .iter()
        .map(|m| &m.exponents)
        .filter(|e| e.total_degree() == exc)
        .collect();
    let m_base: Vec<&ExponentVector> = monos
        .iter()
        .map(|m| &m.exponents)
        .filter(|e| e.get(elim) == 0)
        .collect();
    let f1 = m_base.iter().map(|e| e.total_degree()).min().unwrap_or(0);
    let m_base_min: Vec<&ExponentVector> = m_base
        .iter()
        .copied()
        .filter(|e| e.total_degree() == f1)
        .collect();
    let has_monic = monos
        .iter()
        .any(|m| m.is_pure_z_power(elim) && m.z_exponent(elim) == exc);

    let f0 = exc as f64;
    f[0] = f0;
    f[1] = f1 as f64;

    let touched_min = (0..nvars).filter(|&v| m_min.iter().any(|e| e.get(v) > 0)).count();
    f[2] = (nvars - touched_min) as f64;
    f[3] = m_min.len() as f64;
    f[4] = b.component_count() as f64;

    f[5] = monos
        .iter()
        .filter(|m| {
            let d = m.exponents.total_degree();
            m.tag.is_mixed_like() && d >= p && d < 2 * p
        })
        .count() as f64;

    let flat_all = monos
        .iter()
        .all(|m| m.exponents.as_slice().iter().all(|&e| e == 0 || e % p == 0));
    f[6] = flat_all as u8 as f64;

    f[7] = if has_monic {
        if f1 == 0 {
            f0
        } else {
            f0 / f1 as f64
        }
    } else {
        0.0
    };

    f[8] = m_min
        .iter()
        .map(|e| vars.base_indices().map(|v| e.get(v).min(b.get(v))).sum::<u64>())
        .min()
        .unwrap_or(0) as f64;

    f[9] = is_monomial_phase(&state.ideal, vars, monomial_tags) as u8 as f64;

    let flat_initial = m_min
        .iter()
        .all(|e| e.as_slice().iter().all(|&x| x == 0 || x % p == 0));
    f[10] = flat_initial as u8 as f64;

    f[11] = if f1 == 0 {
        f0
    } else {
        1.0 / (1.0 + (f0 - f1 as f64).abs())
    };

    f[12] = (0..nvars)
        .filter(|&v| {
            monos.iter().any(|m| m.exponents.get(v) > 0)
                && monos.iter().all(|m| m.exponents.get(v) % p == 0)
        })
        .count() as f64;

    f[13] = m_base
        .iter()
        .filter(|e| e.support_size() == 1)
        .map(|e| e.total_degree())
        .max()
        .unwrap_or(0) as f64;

    f[14] = weighted_order_proxy(state);

    f[15] = vars
        .base_indices()
        .filter(|&j| m_base_min.iter().all(|e| e.get(j) == 0))
        .count() as f64;

    f[16] = monos
        .iter()
        .map(|m| m.exponents.get(elim))
        .filter(|&ez| ez > 0)
        .min()
        .unwrap_or(0) as f64;

    f[17] = (0..nvars)
        .filter(|&v| monos.iter().any(|m| m.exponents.get(v) > 0))
        .count() as f64;

    f[18] = monos
        .iter()
        .filter(|m| {
            m.tag.is_mixed_like()
                && m.exponents.total_degree() >= p
                && m.exponents.as_slice().iter().any(|&e| e > 0 && e % p != 0)
        })
        .count() as f64;

    let touched_base = vars
        .base_indices()
        .filter(|&j| m_base_min.iter().any(|e| e.get(j) > 0))
        .count();
    f[19] = (vars.base_count() - touched_base) as f64;
    f[20] = m_base_min.len() as f64;
    f[21] = hilbert_samuel_base(state) as f64;

    let mut jac_min: Option<u64> = None;
    let mut jac_count = 0u64;
    for m in monos {
        let deg = m.exponents.total_degree();
        for &e in m.exponents.as_slice() {
            if e > 0 && e % p != 0 {
                jac_count += 1;
                let d = deg - 1;
                jac_min = Some(jac_min.map_or(d, |j| j.min(d)));
            }
        }
    }
    f[22] = jac_min.map_or(JACOBIAN_SENTINEL, |j| j as f64);
    f[23] = jac_count as f64;

    f[24] = m_min
        .iter()
        .flat_map(|e| e.as_slice().iter().copied().filter(|&x| x > 0))
        .map(|x| p_adic_valuation(x, p))
        .min()
        .unwrap_or(0) as f64;

    f[25] = b.mass() as f64;

    FeatureVector(f)
}

/// Boundary-aware weighted-order proxy (f14).
///
/// Skips the first monic `z^{f0}` term; every other monomial contributes its
/// boundary-residualized base degree divided by `e_z` (or by `f0` when z is
/// absent). Returns the minimum, or 0 if nothing qualifies.
pub fn weighted_order_proxy(state: &State) -> f64 {
    let vars = &state.vars;
    let Ok(f0) = exceptional_exponent(&state.ideal, vars) else {
        return 0.0;
    };
    let elim = vars.elim_index();
    let mut skipped = false;
    let mut best: Option<f64> = None;
    for m in state.ideal.iter() {
        if !skipped && m.is_pure_z_power(elim) && m.z_exponent(elim) == f0 {
            skipped = true;
            continue;
        }
        let residual: u64 = vars
            .base_indices()
            .map(|v| m.exponents.get(v).saturating_sub(state.boundary.get(v)))
            .sum();
        let ez = m.exponents.get(elim);
        let ratio = if ez > 0 {
            residual as f64 / ez as f64
        } else {
            residual as f64 / f0 as f64
        };
        best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
    }
    best.unwrap_or(0.0)
}

/// Hilbert-Samuel proxy (f21): standard monomials of degree `<= f1` in the
/// base variables outside the ideal generated by the minimal-degree base
/// monomials. 0 when the ideal has no base monomials.
pub fn hilbert_samuel_base(state: &State) -> u64 {
    let vars = &state.vars;
    let elim = vars.elim_index();
    let base: Vec<&ExponentVector> = state
        .ideal
        .iter()
        .map(|m| &m.exponents)
        .filter(|e| e.get(elim) == 0)
        .collect();
    let Some(f1) = base.iter().map(|e| e.total_degree()).min() else {
        return 0;
    };
    let gens: Vec<Vec<u64>> = base
        .iter()
        .filter(|e| e.total_degree() == f1)
        .map(|e| vars.base_indices().map(|v| e.get(v)).collect())
        .collect();
    count_standard_monomials(&gens, vars.base_count(), f1 + 1)
}

/// Number of monomials in `nvars` variables of total degree `< bound` that are
/// not divisible by any generator.
pub fn count_standard_monomials(gens: &[Vec<u64>], nvars: usize, bound: u64) -> u64 {
    if bound == 0 {
        return 0;
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        // Unit ideal.
        return 0;
    }
    if gens.is_empty() {
        return monomials_below(nvars, bound);
    }
    if nvars == 1 {
        let least = gens.iter().map(|g| g[0]).min().expect("nonempty");
        return least.min(bound);
    }
    // Branch on the exponent of the last variable; a generator stays relevant
    // once that exponent reaches its own last exponent.
    let last = nvars - 1;
    let mut total = 0u64;
    for a in 0..bound {
        let active: Vec<Vec<u64>> = gens
            .iter()
            .filter(|g| g[last] <= a)
            .map(|g| g[..last].to_vec())
            .collect();
        total += count_standard_monomials(&active, last, bound - a);
    }
    total
}

/// `C(bound - 1 + nvars, nvars)`: monomials in `nvars` variables of degree `< bound`.
fn monomials_below(nvars: usize, bound: u64) -> u64 {
    if bound == 0 {
        return 0;
    }
    let n = bound - 1 + nvars as u64;
    let k = nvars as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}
