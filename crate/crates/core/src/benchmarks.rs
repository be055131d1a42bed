//! Embedded benchmark suites, extension families, a surrogate generator and
//! JSON manifests.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{infer_tag, parse_polynomial, ExponentVector, IdealSpec, State, Tag, TaggedMonomial, VariableSet};

/// (name, p, dim, polynomial)
const BROAD_PROTOTYPES: [(&str, u32, usize, &str); 24] = [
    ("plateau_line_A3", 5, 3, "z^5 + x^10"),
    ("drop_line_A3", 5, 3, "z^5 + x^7"),
    ("wild_surrogate_A3", 5, 3, "z^5 + x^5*y + x^10"),
    ("drop_plane_A4", 5, 4, "z^5 + x^5*w^4"),
    ("plateau_cross_A3", 5, 3, "z^5 + x^10 + y^10 + x^5*y^5"),
    ("oblique_surrogate_A3", 5, 3, "z^5 + x^5*y^4 + y^10"),
    ("non_monic_z_A3", 5, 3, "z^4*x + y^10"),
    ("binomial_pair_A4", 5, 4, "z^5 + x^10 + y^5 + w^5"),
    ("AS_flavor_A3", 5, 3, "z^5 + z + x^5*y^4"),
    ("jac_vanish_A3", 5, 3, "z^10 + x^15 + y^10"),
    ("monomial_control_A3", 5, 3, "x^7*y^5"),
    ("param_drop_a6_A3", 5, 3, "z^5 + x^6"),
    ("param_drop_a7_A3", 5, 3, "z^5 + x^7"),
    ("param_drop_a9_A3", 5, 3, "z^5 + x^9"),
    ("A4_drop_mixed", 5, 4, "z^5 + x^5*w^4"),
    ("A4_plateau_plus_mix", 5, 4, "z^5 + x^10 + x^5*y + w^5"),
    ("A4_nonmonic_z", 5, 4, "z^4*x^2 + y^10 + w^5"),
    ("A4_AS_flavor", 5, 4, "z^5 + z + x^5*y^4 + w^9"),
    ("A4_binomial_toroidal", 5, 4, "z^5 + x^5*y^5"),
    ("A5_drop_two_params", 5, 5, "z^5 + x^5*u^4 + y^10"),
    ("A5_wild_oblique", 5, 5, "z^5 + x^5*y^4*u + v^10"),
    ("A5_cross_competition", 5, 5, "z^5 + x^10 + y^10 + x^5*y^5 + u^5*v^4"),
    ("A6_multi_mixed", 5, 6, "z^5 + x^5*u^4 + y^5*v^4 + w^9"),
    ("A6_nonmonic_wild", 5, 6, "z^4*x^2 + x^5*y^4*v + u^10 + w^5"),
];

const FOCUSED_BASE_COMPETITION: [(&str, &str); 20] = [
    ("p3_A4_plateau_line_x6", "z^3 + x^6 + w^6"),
    ("p3_A4_plateau_line_x9", "z^3 + x^9 + w^6"),
    ("p3_A4_plateau_line_x12", "z^3 + x^12 + w^6"),
    ("p3_A4_cross_x6_y6", "z^3 + x^6 + y^6 + w^6"),
    ("p3_A4_cross_x6_y9", "z^3 + x^6 + y^9 + w^6"),
    ("p3_A4_cross_x6_y12", "z^3 + x^6 + y^12 + w^6"),
    ("p3_A4_cross_x9_y6", "z^3 + x^9 + y^6 + w^6"),
    ("p3_A4_cross_x9_y9", "z^3 + x^9 + y^9 + w^6"),
    ("p3_A4_cross_x9_y12", "z^3 + x^9 + y^12 + w^6"),
    ("p3_A4_cross_x12_y6", "z^3 + x^12 + y^6 + w^6"),
    ("p3_A4_cross_x12_y9", "z^3 + x^12 + y^9 + w^6"),
    ("p3_A4_cross_x12_y12", "z^3 + x^12 + y^12 + w^6"),
    ("p3_A4_cross_square_6", "z^3 + x^6 + y^6 + x^3*y^3 + w^6"),
    ("p3_A4_cross_square_6_w9", "z^3 + x^6 + y^6 + x^3*y^3 + w^9"),
    ("p3_A4_plateau_mix_6a", "z^3 + x^6 + x^4*y^2 + w^6"),
    ("p3_A4_plateau_mix_6b", "z^3 + y^6 + x^2*y^4 + w^6"),
    ("p3_A4_cross_mix_6c", "z^3 + x^6 + y^6 + x^5*y + w^6"),
    ("p3_A4_cross_mix_6d", "z^3 + x^9 + y^6 + x^7*y^2 + w^6"),
    ("p3_A4_cross_mix_6e", "z^3 + x^12 + y^9 + x^8*y*w + w^6"),
    ("p3_A4_pure_cross_666", "z^3 + x^6 + y^6 + w^6"),
];

const FOCUSED_ADVERSARIAL: [(&str, &str); 51] = [
    ("p3_A4_monomial_control_1", "x^7*y^5*w^4"),
    ("p3_A4_monomial_control_2", "x^9*y^6"),
    ("p3_A4_cross_Frob_6_6_6", "z^3 + x^6 + y^6 + w^6"),
    ("p3_A4_cross_Frob_9_6_6", "z^3 + x^9 + y^6 + w^6"),
    ("p3_A4_cross_Frob_9_9_6", "z^3 + x^9 + y^9 + w^6"),
    ("p3_A4_cross_Frob_9_9_9", "z^3 + x^9 + y^9 + w^9"),
    ("p3_A4_cross_Frob_12_9_6", "z^3 + x^12 + y^9 + w^6"),
    ("p3_A4_cross_Frob_12_12_6", "z^3 + x^12 + y^12 + w^6"),
    ("p3_A4_cross_Frob_12_12_12", "z^3 + x^12 + y^12 + w^12"),
    ("p3_A4_cross_Frob_15_12_9", "z^3 + x^15 + y^12 + w^9"),
    ("p3_A4_tieperm_6_1", "z^3 + x^6 + y^6 + w^6"),
    ("p3_A4_tieperm_6_2", "z^3 + x^6 + w^6 + y^6"),
    ("p3_A4_tieperm_6_3", "z^3 + y^6 + x^6 + w^6"),
    ("p3_A4_tieperm_6_4", "z^3 + y^6 + w^6 + x^6"),
    ("p3_A4_tieperm_6_5", "z^3 + w^6 + x^6 + y^6"),
    ("p3_A4_tieperm_6_6", "z^3 + w^6 + y^6 + x^6"),
    ("p3_A4_tieperm_9_1", "z^3 + x^9 + y^9 + w^9"),
    ("p3_A4_tieperm_9_2", "z^3 + x^9 + w^9 + y^9"),
    ("p3_A4_tieperm_9_3", "z^3 + y^9 + x^9 + w^9"),
    ("p3_A4_tieperm_9_4", "z^3 + y^9 + w^9 + x^9"),
    ("p3_A4_tieperm_9_5", "z^3 + w^9 + x^9 + y^9"),
    ("p3_A4_tieperm_9_6", "z^3 + w^9 + y^9 + x^9"),
    ("p3_A4_tieperm_12_1", "z^3 + x^12 + y^12 + w^12"),
    ("p3_A4_tieperm_12_2", "z^3 + x^12 + w^12 + y^12"),
    ("p3_A4_tieperm_12_3", "z^3 + y^12 + x^12 + w^12"),
    ("p3_A4_tieperm_12_4", "z^3 + y^12 + w^12 + x^12"),
    ("p3_A4_tieperm_12_5", "z^3 + w^12 + x^12 + y^12"),
    ("p3_A4_tieperm_12_6", "z^3 + w^12 + y^12 + x^12"),
    ("p3_A4_immediate_shade_1", "z^3 + x^9 + y^6 + w^6 + x^2*y"),
    ("p3_A4_immediate_shade_2", "z^3 + x^9 + y^6 + w^6 + x*y^2"),
    ("p3_A4_immediate_shade_3", "z^3 + x^9 + y^6 + w^6 + x*y*w"),
    ("p3_A4_immediate_shade_4", "z^3 + x^9 + y^6 + w^6 + x^2*y*w"),
    ("p3_A4_immediate_shade_5", "z^3 + x^9 + y^6 + w^6 + x^2*y^2*w"),
    ("p3_A4_immediate_shade_6", "z^3 + x^9 + y^6 + w^6 + x^3*y^2"),
    ("p3_A4_kangaroo_delay_step_1_deg4", "z^3 + x^12 + y^6 + w^6 + x^5*y*w"),
    ("p3_A4_kangaroo_delay_step_2_deg4", "z^3 + x^15 + y^6 + w^6 + x^8*y*w"),
    ("p3_A4_kangaroo_delay_step_3_deg4", "z^3 + x^18 + y^6 + w^6 + x^11*y*w"),
    ("p3_A4_kangaroo_delay_step_4_deg4", "z^3 + x^21 + y^6 + w^6 + x^14*y*w"),
    ("p3_A4_kangaroo_delay_step_5_deg4", "z^3 + x^24 + y^6 + w^6 + x^17*y*w"),
    ("p3_A4_kangaroo_double_delay_1_3", "z^3 + x^18 + y^6 + w^6 + x^5*y*w + x^11*y^2*w"),
    ("p3_A4_kangaroo_double_delay_2_4", "z^3 + x^21 + y^6 + w^6 + x^8*y*w + x^14*y^2*w"),
    ("p3_A4_kangaroo_double_delay_3_5", "z^3 + x^24 + y^6 + w^6 + x^11*y*w + x^17*y^2*w"),
    ("p3_A4_z2_initial_perturb_1", "z^3 + z^2*x + x^9 + y^6 + w^6"),
    ("p3_A4_z2_initial_perturb_2", "z^3 + z^2*y + x^9 + y^6 + w^6"),
    ("p3_A4_z2_initial_perturb_3", "z^3 + z^2*x*y + x^9 + y^6 + w^6"),
    ("p3_A4_z2_initial_perturb_4", "z^3 + z^2*x*w + x^9 + y^6 + w^6"),
    ("p3_A4_z2_initial_perturb_5", "z^3 + z^2*x^2*y + x^9 + y^6 + w^6"),
    ("p3_A4_toroidal_plus_oblique_1", "z^3 + x^3*y^3*w^3 + x^2*y + w^9"),
    ("p3_A4_toroidal_plus_oblique_2", "z^3 + x^6*y^3 + x^3*y^2 + w^12"),
    ("p3_A4_order9_Frob_flat", "z^9 + x^18 + y^18 + w^18"),
    ("p3_A4_order9_with_shade", "z^9 + x^27 + y^18 + w^18 + x^14*y^2*w"),
];

/// Heavy-tail cases: the bounded-delay counterexample first, then the
/// reconstructed variants (flagged by provenance).
const HEAVY_TAIL: [(&str, &str, bool); 6] = [
    ("p3_A4_counter_example_1", "z^3 + x^12 + y^6 + w^9*y^4 + x^9*y^8*w^10", false),
    ("p3_A4_counter_example_2", "z^3 + x^12 + y^6 + x^9*y^4 + w^9*y^8*x^10", true),
    ("p3_A4_counter_example_3", "z^3 + x^12 + y^6 + x^5*y^5*w^5", true),
    ("p3_A4_shade_boundary_8", "z^3 + x^12 + y^6 + x^3*y^3*w^2", true),
    ("p3_A4_shade_boundary_9", "z^3 + x^12 + y^6 + x^3*y^3*w^3", true),
    ("p3_A4_deep_variable_w", "z^3 + x^12 + y^6 + y^4*w^27", true),
];

const PAIRS: [(u32, u32); 5] = [(7, 5), (11, 4), (13, 2), (8, 5), (10, 3)];

pub const SUITE_NAMES: [&str; 3] = ["broad24", "focused71", "extended100"];

/// Where a case comes from. Serialized into the manifest `notes` field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    TableRow,
    Family(String),
    /// Under-determined family member rebuilt from its description; exempt
    /// from exact reproduction.
    Reconstructed,
    Generated(u64),
    External(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::TableRow => f.write_str("table-row"),
            Provenance::Family(p) => write!(f, "family({p})"),
            Provenance::Reconstructed => f.write_str("family(reconstructed)"),
            Provenance::Generated(seed) => write!(f, "generated({seed})"),
            Provenance::External(s) => f.write_str(s),
        }
    }
}

impl FromStr for Provenance {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "table-row" {
            return Ok(Provenance::TableRow);
        }
        if s == "family(reconstructed)" {
            return Ok(Provenance::Reconstructed);
        }
        if let Some(inner) = s.strip_prefix("family(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Provenance::Family(inner.to_string()));
        }
        if let Some(seed) = s
            .strip_prefix("generated(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse().ok())
        {
            return Ok(Provenance::Generated(seed));
        }
        Ok(Provenance::External(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkCase {
    pub name: String,
    pub p: u32,
    pub dim: usize,
    pub vars: Arc<VariableSet>,
    pub ideal: IdealSpec,
    /// Source text; `ideal` is its parse (with tag overrides applied).
    pub poly: String,
    pub provenance: Provenance,
}

impl BenchmarkCase {
    pub fn new(name: &str, vars: Arc<VariableSet>, poly: &str, provenance: Provenance) -> Result<Self> {
        let ideal = parse_polynomial(poly, &vars).map_err(|e| e.in_case(name))?;
        Ok(Self {
            name: name.to_string(),
            p: vars.char_p(),
            dim: vars.len(),
            vars,
            ideal,
            poly: poly.to_string(),
            provenance,
        })
    }

    pub fn state(&self) -> Result<State> {
        State::initial(self.vars.clone(), self.ideal.clone())
    }

    /// Excluded from exact-reproduction checks.
    pub fn is_exempt(&self) -> bool {
        self.provenance == Provenance::Reconstructed
    }

    /// Tags that differ from inference, as written to a manifest.
    fn tag_overrides(&self) -> Option<Vec<Tag>> {
        let differs = self
            .ideal
            .iter()
            .any(|m| infer_tag(&m.exponents, &self.vars).ok().as_ref() != Some(&m.tag));
        differs.then(|| self.ideal.tags())
    }
}

fn dim4() -> Arc<VariableSet> {
    Arc::new(VariableSet::dim4_p3())
}

fn build(rows: &[(&str, &str)], vars: &Arc<VariableSet>, provenance: Provenance) -> Vec<BenchmarkCase> {
    rows.iter()
        .map(|(name, poly)| BenchmarkCase::new(name, vars.clone(), poly, provenance.clone()).expect("embedded row parses"))
        .collect()
}

pub fn broad24() -> Vec<BenchmarkCase> {
    BROAD_PROTOTYPES
        .iter()
        .map(|&(name, p, dim, poly)| {
            let vars = Arc::new(VariableSet::standard(dim, p).expect("embedded layout"));
            BenchmarkCase::new(name, vars, poly, Provenance::TableRow).expect("embedded row parses")
        })
        .collect()
}

pub fn focused71() -> Vec<BenchmarkCase> {
    let vars = dim4();
    let mut cases = build(&FOCUSED_BASE_COMPETITION, &vars, Provenance::TableRow);
    cases.extend(build(&FOCUSED_ADVERSARIAL, &vars, Provenance::TableRow));
    cases
}

/// The 29 family cases appended to `focused71`.
pub fn extension29() -> Vec<BenchmarkCase> {
    let vars = dim4();
    let mut out = Vec::with_capacity(29);
    let mut push = |name: String, poly: String, provenance: Provenance| {
        out.push(BenchmarkCase::new(&name, vars.clone(), &poly, provenance).expect("family case parses"));
    };
    for (name, poly, reconstructed) in HEAVY_TAIL {
        let prov = if reconstructed {
            Provenance::Reconstructed
        } else {
            Provenance::Family("heavy-tail".into())
        };
        push(name.into(), poly.into(), prov);
    }
    for i in 1..=5u32 {
        push(
            format!("p3_A4_fermat_{i}"),
            format!("z^3 + x^6 + y^6 + x^3*y^3*w^3 + w^{}", 3 * i + 1),
            Provenance::Family(format!("fermat i={i}")),
        );
    }
    push(
        "p3_A4_weighted_plateau".into(),
        "z^3 + x^6 + y^9 + w^18".into(),
        Provenance::Family("weighted-plateau".into()),
    );
    push(
        "p3_A4_weighted_plateau_xw15".into(),
        "z^3 + x^6 + y^9 + w^18 + x*w^15".into(),
        Provenance::Family("weighted-plateau".into()),
    );
    for (a, b) in PAIRS {
        push(
            format!("p3_A4_pair_{a}_{b}"),
            format!("z^3 + x^{a} + y^{b} + w^12"),
            Provenance::Family(format!("pair a={a} b={b}")),
        );
    }
    push(
        "p3_A4_extreme_imbalance".into(),
        "z^3 + x^4 + y^100 + w^6".into(),
        Provenance::Family("extreme".into()),
    );
    for i in 1..=10u32 {
        push(
            format!("p3_A4_dense_mixed_{i}"),
            format!("z^3 + x^9 + y^9 + x^2*y^2*w^2 + x^{i}*w^5 + y^4*w^{i}"),
            Provenance::Family(format!("dense i={i}")),
        );
    }
    out
}

pub fn extended100() -> Vec<BenchmarkCase> {
    let mut cases = focused71();
    cases.extend(extension29());
    cases
}

pub fn suite(name: &str) -> Result<Vec<BenchmarkCase>> {
    match name {
        "broad24" => Ok(broad24()),
        "focused71" => Ok(focused71()),
        "extended100" => Ok(extended100()),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

pub fn builtin_suites() -> Vec<(&'static str, Vec<BenchmarkCase>)> {
    SUITE_NAMES.iter().map(|&n| (n, suite(n).expect("builtin"))).collect()
}

/// One manifest entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    pub p: u32,
    pub dim: usize,
    pub vars: Vec<String>,
    pub poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<Tag>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl From<&BenchmarkCase> for ManifestEntry {
    fn from(c: &BenchmarkCase) -> Self {
        Self {
            name: c.name.clone(),
            p: c.p,
            dim: c.dim,
            vars: c.vars.names().to_vec(),
            poly: c.poly.clone(),
            tags: c.tag_overrides(),
            notes: Some(c.provenance.to_string()),
        }
    }
}

impl ManifestEntry {
    pub fn to_case(&self) -> Result<BenchmarkCase> {
        let fail = |e: Error| e.in_case(&self.name);
        if self.vars.len() != self.dim {
            return Err(fail(Error::Manifest(format!(
                "dim {} but {} variables",
                self.dim,
                self.vars.len()
            ))));
        }
        let vars = Arc::new(VariableSet::from_names(&self.vars, self.p).map_err(fail)?);
        let provenance = self
            .notes
            .as_deref()
            .map_or(Provenance::External(String::new()), |n| n.parse().expect("infallible"));
        let mut case = BenchmarkCase::new(&self.name, vars, &self.poly, provenance)?;
        if let Some(tags) = &self.tags {
            case.ideal = case.ideal.with_tags(tags.clone()).map_err(fail)?;
        }
        Ok(case)
    }
}

pub fn manifest_to_json(cases: &[BenchmarkCase]) -> Result<String> {
    let entries: Vec<ManifestEntry> = cases.iter().map(ManifestEntry::from).collect();
    Ok(serde_json::to_string_pretty(&entries)?)
}

pub fn manifest_from_json(text: &str) -> Result<Vec<BenchmarkCase>> {
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
    entries.iter().map(ManifestEntry::to_case).collect()
}

pub fn save_manifest(cases: &[BenchmarkCase], path: &Path) -> Result<()> {
    let mut text = manifest_to_json(cases)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_manifest(path: &Path) -> Result<Vec<BenchmarkCase>> {
    manifest_from_json(&std::fs::read_to_string(path)?)
}

/// Seeded cases shaped like the broad benchmark: a monic `z^p` plus 2 to 5
/// base or mixed terms of total degree at most `4p`, in characteristic 5.
/// Dimensions are drawn uniformly from `dims`.
pub fn generate_broad_surrogates(seed: u64, count: usize, dims: &[usize]) -> Result<Vec<BenchmarkCase>> {
    const P: u32 = 5;
    if count > 0 && dims.is_empty() {
        return Err(Error::InvalidVariables("no dimensions to sample".into()));
    }
    let layouts = dims
        .iter()
        .map(|&d| VariableSet::standard(d, P).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_deg = 4 * P as u64;
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let vars = layouts[rng.random_range(0..layouts.len())].clone();
        let base: Vec<usize> = vars.base_indices().collect();
        let mut monos = vec![{
            let mut e = ExponentVector::zeros(vars.len());
            e.set(vars.elim_index(), P as u64);
            e
        }];
        let terms = rng.random_range(2..=5);
        while monos.len() < terms + 1 {
            let support = rng.random_range(1..=base.len().min(3));
            let degree = rng.random_range(support as u64..=max_deg);
            let picked = sample(&mut rng, base.len(), support).into_vec();
            let mut e = ExponentVector::zeros(vars.len());
            for &k in &picked {
                e.set(base[k], 1);
            }
            for _ in support as u64..degree {
                let k = picked[rng.random_range(0..support)];
                e.set(base[k], e.get(base[k]) + 1);
            }
            if !monos.contains(&e) {
                monos.push(e);
            }
        }
        let ideal = IdealSpec::new(
            monos
                .into_iter()
                .map(|e| {
                    let tag = infer_tag(&e, &vars).expect("nonzero");
                    TaggedMonomial::new(tag, e)
                })
                .collect(),
        );
        let poly = ideal.render(&vars);
        let name = format!("surrogate_{seed}_{i}_A{}", vars.len());
        cases.push(BenchmarkCase::new(&name, vars, &poly, Provenance::Generated(seed))?);
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_sizes() {
        assert_eq!(broad24().len(), 24);
        assert_eq!(focused71().len(), 71);
        assert_eq!(extended100().len(), 100);
        assert_eq!(extension29().iter().filter(|c| c.is_exempt()).count(), 5);
    }

    #[test]
    fn known_rows() {
        let f = focused71();
        let c = f.iter().find(|c| c.name == "p3_A4_cross_mix_6e").unwrap();
        assert_eq!(c.poly, "z^3 + x^12 + y^9 + x^8*y*w + w^6");
        let b = broad24();
        let m = b.iter().find(|c| c.name == "monomial_control_A3").unwrap();
        assert_eq!((m.dim, m.p, m.poly.as_str()), (3, 5, "x^7*y^5"));
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = extended100().into_iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 100);
    }

    #[test]
    fn leading_terms_are_monic_pure_z() {
        let monomial_rows = ["p3_A4_monomial_control_1", "p3_A4_monomial_control_2", "monomial_control_A3"];
        for c in broad24().iter().chain(extended100().iter()) {
            if monomial_rows.contains(&c.name.as_str()) || c.name.contains("nonmonic") || c.name.contains("non_monic") {
                continue;
            }
            let first = &c.ideal.monomials[0];
            assert_eq!(first.tag, Tag::PureZ, "{}", c.name);
            assert_eq!(first.z_exponent(c.vars.elim_index()) % c.p as u64, 0, "{}", c.name);
        }
    }

    #[test]
    fn tieperm_triples_share_monomials() {
        let f = focused71();
        for k in [6, 9, 12] {
            let group: Vec<_> = f
                .iter()
                .filter(|c| c.name.starts_with(&format!("p3_A4_tieperm_{k}_")))
                .collect();
            assert_eq!(group.len(), 6);
            let mut first: Vec<_> = group[0].ideal.monomials.clone();
            first.sort_by(|a, b| a.exponents.as_slice().cmp(b.exponents.as_slice()));
            for c in &group[1..] {
                let mut other = c.ideal.monomials.clone();
                other.sort_by(|a, b| a.exponents.as_slice().cmp(b.exponents.as_slice()));
                assert_eq!(first, other);
            }
        }
    }

    #[test]
    fn manifest_round_trip() {
        for (_, cases) in builtin_suites() {
            let text = manifest_to_json(&cases).unwrap();
            assert_eq!(manifest_from_json(&text).unwrap(), cases);
        }
    }

    #[test]
    fn manifest_errors_name_the_case() {
        let text = r#"[{"name":"bad_case","p":3,"dim":4,"vars":["x","y","w","z"],"poly":"z^3 + x^-1"}]"#;
        let err = manifest_from_json(text).unwrap_err();
        assert!(err.to_string().contains("bad_case"), "{err}");
    }

    #[test]
    fn manifest_tags_override_inference() {
        let text = r#"[{"name":"t","p":3,"dim":4,"vars":["x","y","w","z"],"poly":"z^3 + x^2*y","tags":["pure-z","oblique"]}]"#;
        let cases = manifest_from_json(text).unwrap();
        assert_eq!(cases[0].ideal.tags(), vec![Tag::PureZ, Tag::Oblique]);
        let again = manifest_from_json(&manifest_to_json(&cases).unwrap()).unwrap();
        assert_eq!(again, cases);
    }

    #[test]
    fn surrogates_are_seeded() {
        let a = generate_broad_surrogates(1, 60, &[4, 5, 6]).unwrap();
        assert_eq!(a.len(), 60);
        assert_eq!(a, generate_broad_surrogates(1, 60, &[4, 5, 6]).unwrap());
        assert_ne!(a, generate_broad_surrogates(2, 60, &[4, 5, 6]).unwrap());
        assert!(generate_broad_surrogates(1, 0, &[4]).unwrap().is_empty());
        for c in &a {
            assert!((3..=6).contains(&c.ideal.len()));
            assert!(c.ideal.iter().skip(1).all(|m| m.exponents.total_degree() <= 20));
            assert_eq!(c.ideal.monomials[0].tag, Tag::PureZ);
        }
    }
}
