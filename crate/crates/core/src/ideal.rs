//! Exponent-only encoding of monic hypersurface singularities.
//!
//! A polynomial is reduced to an ordered list of tagged exponent vectors over a
//! fixed [`VariableSet`]; coefficients are discarded. The list order is the
//! deterministic tie-break order used by center selection, so it is preserved
//! by parsing, rendering and every transform.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered variable names with one distinguished elimination variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
    elim_index: usize,
    char_p: u32,
}

impl VariableSet {
    pub fn new(names: Vec<String>, elim_index: usize, char_p: u32) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidVariables("no variables".into()));
        }
        if elim_index >= names.len() {
            return Err(Error::InvalidVariables(format!(
                "elimination index {elim_index} out of range for {} variables",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
                return Err(Error::InvalidVariables(format!("bad variable name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidVariables(format!("duplicate variable `{name}`")));
            }
        }
        if !is_prime(char_p) {
            return Err(Error::NotPrime(char_p));
        }
        Ok(Self {
            names,
            elim_index,
            char_p,
        })
    }

    /// Uses `z` as the elimination variable when present, otherwise the last name.
    pub fn from_names<S: AsRef<str>>(names: &[S], char_p: u32) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let elim = names
            .iter()
            .position(|n| n == "z")
            .unwrap_or(names.len().saturating_sub(1));
        Self::new(names, elim, char_p)
    }

    /// Variable layout used by the embedded suites: `(x,y,z)` in dimension 3,
    /// `(x,y,w,z)` in dimension 4, `(x,y,u,v,z)` in dimension 5 and
    /// `(x,y,w,u,v,z)` in dimension 6.
    pub fn standard(dim: usize, char_p: u32) -> Result<Self> {
        let names: &[&str] = match dim {
            2 => &["x", "z"],
            3 => &["x", "y", "z"],
            4 => &["x", "y", "w", "z"],
            5 => &["x", "y", "u", "v", "z"],
            6 => &["x", "y", "w", "u", "v", "z"],
            _ => {
                return Err(Error::InvalidVariables(format!(
                    "no standard layout for dimension {dim}"
                )))
            }
        };
        Self::from_names(names, char_p)
    }

    /// `(x, y, w, z)` in characteristic 3.
    pub fn dim4_p3() -> Self {
        Self::standard(4, 3).expect("static layout")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elim_index(&self) -> usize {
        self.elim_index
    }

    pub fn char_p(&self) -> u32 {
        self.char_p
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn base_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.names.len()).filter(move |&i| i != self.elim_index)
    }

    pub fn base_count(&self) -> usize {
        self.names.len() - 1
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(exponents: Vec<u64>) -> Self {
        Self(exponents)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: u64) {
        self.0[i] = value;
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &e| acc.saturating_add(e))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Indices with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    /// True iff the vector is nonzero and every positive entry sits at `index`.
    pub fn supported_only_on(&self, index: usize) -> bool {
        self.0[index] > 0 && self.support_size() == 1
    }
}

impl From<Vec<u64>> for ExponentVector {
    fn from(v: Vec<u64>) -> Self {
        Self(v)
    }
}

/// Bookkeeping label attached to a monomial in the initial benchmark and
/// carried unchanged along a trajectory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    PureZ,
    PureBase,
    Mixed,
    Oblique,
    MonomialLike,
    Other(String),
}

impl Tag {
    pub fn as_str(&self) -> &str {
        match self {
            Tag::PureZ => "pure-z",
            Tag::PureBase => "pure-base",
            Tag::Mixed => "mixed",
            Tag::Oblique => "oblique",
            Tag::MonomialLike => "monomial-like",
            Tag::Other(s) => s,
        }
    }

    /// Tags counted by the shade and wildness proxies.
    pub fn is_mixed_like(&self) -> bool {
        matches!(self, Tag::Mixed | Tag::Oblique)
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "pure-z" => Tag::PureZ,
            "pure-base" => Tag::PureBase,
            "mixed" => Tag::Mixed,
            "oblique" => Tag::Oblique,
            "monomial-like" => Tag::MonomialLike,
            "" => return Err(Error::UnknownTag(String::new())),
            other => {
                if other
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
                {
                    Tag::Other(other.to_string())
                } else {
                    return Err(Error::UnknownTag(other.to_string()));
                }
            }
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Tag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Classifies a monomial by its support: only z gives `pure-z`, a single base
/// variable gives `pure-base`, anything else is `mixed`.
pub fn infer_tag(e: &ExponentVector, vars: &VariableSet) -> Result<Tag> {
    if e.is_zero() {
        return Err(Error::ZeroExponent);
    }
    Ok(match e.support_size() {
        1 if e.get(vars.elim_index()) > 0 => Tag::PureZ,
        1 => Tag::PureBase,
        _ => Tag::Mixed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaggedMonomial {
    pub tag: Tag,
    pub exponents: ExponentVector,
}

impl TaggedMonomial {
    pub fn new(tag: Tag, exponents: ExponentVector) -> Self {
        Self { tag, exponents }
    }

    /// The monic elimination term: tagged `pure-z` and still supported only on z.
    /// A monomial that merely degenerates to a z-power under the rewrite keeps its
    /// original tag and does not count.
    pub fn is_pure_z_power(&self, elim: usize) -> bool {
        self.tag == Tag::PureZ && self.exponents.supported_only_on(elim)
    }

    pub fn z_exponent(&self, elim: usize) -> u64 {
        self.exponents.get(elim)
    }
}

/// Ordered list of tagged monomials; order is the tie-break order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IdealSpec {
    pub monomials: Vec<TaggedMonomial>,
}

impl IdealSpec {
    pub fn new(monomials: Vec<TaggedMonomial>) -> Self {
        Self { monomials }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TaggedMonomial> {
        self.monomials.iter()
    }

    pub fn tags(&self) -> Vec<Tag> {
        self.monomials.iter().map(|m| m.tag.clone()).collect()
    }

    /// Replaces every tag; `tags` must match the monomial count.
    pub fn with_tags(mut self, tags: Vec<Tag>) -> Result<Self> {
        if tags.len() != self.monomials.len() {
            return Err(Error::LengthMismatch {
                left: tags.len(),
                right: self.monomials.len(),
            });
        }
        for (m, t) in self.monomials.iter_mut().zip(tags) {
            m.tag = t;
        }
        Ok(self)
    }

    /// Renders in the `z^3 + x^9*y` syntax accepted by [`parse_polynomial`].
    /// Tags that differ from the inferred one are written as `tag: term`.
    pub fn render(&self, vars: &VariableSet) -> String {
        let terms: Vec<String> = self
            .monomials
            .iter()
            .map(|m| {
                let body = render_monomial(&m.exponents, vars);
                match infer_tag(&m.exponents, vars) {
                    Ok(t) if t == m.tag => body,
                    _ => format!("{}: {}", m.tag, body),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

fn render_monomial(e: &ExponentVector, vars: &VariableSet) -> String {
    let elim = vars.elim_index();
    let order = std::iter::once(elim).chain(vars.base_indices());
    let factors: Vec<String> = order
        .filter(|&i| e.get(i) > 0)
        .map(|i| match e.get(i) {
            1 => vars.names()[i].clone(),
            k => format!("{}^{}", vars.names()[i], k),
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// Parses `+`-separated monomials such as `z^{3} + x^9*y + 1*x^2 w`.
///
/// Factors are `var`, `var^k` or `var^{k}` joined by `*` or juxtaposition; a
/// coefficient, if present, must be `1`. A term may be prefixed by `tag:` to
/// override [`infer_tag`].
pub fn parse_polynomial(text: &str, vars: &VariableSet) -> Result<IdealSpec> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut monomials = Vec::new();
    for raw in text.split('+') {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(Error::MalformedTerm(text.to_string()));
        }
        let (tag, body) = match raw.split_once(':') {
            Some((t, b)) => (Some(t.parse::<Tag>()?), b),
            None => (None, raw),
        };
        let exponents = parse_monomial(body, vars)?;
        let tag = match tag {
            Some(t) => t,
            None => infer_tag(&exponents, vars)?,
        };
        monomials.push(TaggedMonomial::new(tag, exponents));
    }
    Ok(IdealSpec::new(monomials))
}

fn parse_monomial(body: &str, vars: &VariableSet) -> Result<ExponentVector> {
    let chars: Vec<char> = body.chars().collect();
    let mut e = ExponentVector::zeros(vars.len());
    let mut i = 0;
    let mut seen_factor = false;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: String = chars[start..i].iter().collect();
            if coeff != "1" || seen_factor {
                return Err(Error::MalformedTerm(body.trim().to_string()));
            }
            seen_factor = true;
            continue;
        }
        if !(c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::MalformedTerm(body.trim().to_string()));
        }
        // Longest variable name matching at this position.
        let rest: String = chars[i..].iter().collect();
        let hit = vars
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        let (var, name_len) = match hit {
            Some((idx, n)) => (idx, n.chars().count()),
            None => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                return Err(Error::UnknownVariable(word));
            }
        };
        i += name_len;
        seen_factor = true;
        let mut exp = 1u64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let braced = i < chars.len() && chars[i] == '{';
            if braced {
                i += 1;
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '-' | '.')) {
                if !braced && chars[i].is_ascii_alphabetic() {
                    break;
                }
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if braced {
                if i >= chars.len() || chars[i] != '}' {
                    return Err(Error::MalformedTerm(body.trim().to_string()));
                }
                i += 1;
            }
            exp = match text.parse::<u64>() {
                Ok(k) if k > 0 && text.chars().all(|c| c.is_ascii_digit()) => k,
                _ => {
                    return Err(Error::BadExponent {
                        var: vars.names()[var].clone(),
                        text,
                    })
                }
            };
        }
        let cur = e.get(var);
        e.set(var, cur.saturating_add(exp));
    }
    if e.is_zero() {
        return Err(Error::ZeroExponent);
    }
    Ok(e)
}

/// Exceptional multiplicity per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Boundary(Vec<u64>);

impl Boundary {
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn from_vec(v: Vec<u64>) -> Self {
        Self(v)
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zeroes every entry whose index is not in `keep`.
    pub fn restricted_to(&self, keep: &[usize]) -> Self {
        Self(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &m)| if keep.contains(&i) { m } else { 0 })
                .collect(),
        )
    }

    pub fn add(&mut self, i: usize, amount: u64) {
        self.0[i] = self.0[i].saturating_add(amount);
    }

    pub fn mass(&self) -> u64 {
        self.0.iter().fold(0u64, |a, &m| a.saturating_add(m))
    }

    pub fn component_count(&self) -> usize {
        self.0.iter().filter(|&&m| m > 0).count()
    }
}

/// Full intrinsic simulator state: the ideal and the boundary record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub vars: Arc<VariableSet>,
    pub ideal: IdealSpec,
    pub boundary: Boundary,
}

impl State {
    pub fn new(vars: Arc<VariableSet>, ideal: IdealSpec, boundary: Boundary) -> Result<Self> {
        if boundary.len() != vars.len() {
            return Err(Error::LengthMismatch {
                left: boundary.len(),
                right: vars.len(),
            });
        }
        if let Some(m) = ideal.iter().find(|m| m.exponents.len() != vars.len()) {
            return Err(Error::LengthMismatch {
                left: m.exponents.len(),
                right: vars.len(),
            });
        }
        Ok(Self {
            vars,
            ideal,
            boundary,
        })
    }

    /// State with the zero boundary.
    pub fn initial(vars: Arc<VariableSet>, ideal: IdealSpec) -> Result<Self> {
        let b = Boundary::zero(vars.len());
        Self::new(vars, ideal, b)
    }

    pub fn parse(text: &str, vars: Arc<VariableSet>) -> Result<Self> {
        let ideal = parse_polynomial(text, &vars)?;
        Self::initial(vars, ideal)
    }

    pub fn elim(&self) -> usize {
        self.vars.elim_index()
    }

    pub fn char_p(&self) -> u64 {
        self.vars.char_p() as u64
    }
}
