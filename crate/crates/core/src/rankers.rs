//! Built-in ranking functions, the discretization map and lex comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Scalarization weights of the two-component ranker.
pub const TWO_COMPONENT_WEIGHTS: [f64; 4] = [284_669_250.0, 5_581_750.0, 250.0, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rank {
    pub raw: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete: Option<Vec<i64>>,
}

impl Rank {
    pub fn raw(raw: Vec<f64>) -> Self {
        Self { raw, discrete: None }
    }

    /// Number of compared components.
    pub fn len(&self) -> usize {
        match &self.discrete {
            Some(d) => d.len(),
            None => self.raw.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Compared component `i`: the discrete value when present.
    pub fn component(&self, i: usize) -> f64 {
        match &self.discrete {
            Some(d) => d[i] as f64,
            None => self.raw[i],
        }
    }

    pub fn first(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.component(0))
    }

    pub fn is_finite(&self) -> bool {
        self.raw.iter().all(|v| v.is_finite())
    }

    /// Bitwise equality of both layers.
    pub fn bit_eq(&self, other: &Rank) -> bool {
        self.raw.len() == other.raw.len()
            && self.raw.iter().zip(&other.raw).all(|(a, b)| a.to_bits() == b.to_bits())
            && self.discrete == other.discrete
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match &self.discrete {
            Some(d) => d.iter().map(|v| v.to_string()).collect(),
            None => self.raw.iter().map(|v| v.to_string()).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

/// Lexicographic order on exact values, no tolerance.
pub fn lex_compare(a: &Rank, b: &Rank) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for i in 0..a.len() {
        let (x, y) = (a.component(i), b.component(i));
        match x.partial_cmp(&y) {
            Some(Ordering::Equal) => continue,
            Some(o) => return Ok(o),
            None => return Err(Error::NonFiniteRank),
        }
    }
    Ok(Ordering::Equal)
}

pub fn lex_less(a: &Rank, b: &Rank) -> Result<bool> {
    Ok(lex_compare(a, b)? == Ordering::Less)
}

fn floor_i64(x: f64) -> i64 {
    x.floor() as i64
}

/// The map into the naturals applied after the five-component rankers.
pub fn discretize(raw: &[f64; 5]) -> [i64; 5] {
    let [c1, c2, c3, c4, c5] = *raw;
    let d4 = 5000 - floor_i64(100.0 * (1.0 + (-c4).max(0.0)).ln());
    [
        floor_i64(c1),
        floor_i64(100.0 * c2),
        floor_i64(10.0 * (c3 + 50.0)),
        d4.max(0),
        floor_i64(10.0 * (c5 + 20.0)),
    ]
}

fn c1_shifted(fv: &FeatureVector, shift: f64) -> f64 {
    if fv.monomial_phase() {
        0.0
    } else {
        fv[0] + shift
    }
}

/// Unscalarized components shared by the two-component and clean lex rankers.
pub fn rank_clean_lex(fv: &FeatureVector) -> [f64; 5] {
    let f = |i: usize| fv[i];
    let c1 = c1_shifted(fv, 0.25);
    let c2 = f(14);
    let inner = f(21) + 0.1 * f(19) + 0.05 * f(20) + f(10)
        - (1.0 - f(23)) * (1.0 + f(22) / 5.0)
        - 5.0 * (f(24) / 10.0).atan2(f(21) / 25.0);
    let c3 = 50.0 * (inner / 5.0).tanh();
    let c4 = 0.15 * f(1) - 1.5 * f(7) - (0.1 * f(25)).exp() + 0.2 * f(8);
    let c5 = 0.5 * f(5) + 0.5 * f(18) - 0.1 * f(4);
    [c1, c2, c3, c4, c5]
}

pub fn rank_two_component(fv: &FeatureVector) -> [f64; 2] {
    let [c1, c2, c3, c4, c5] = rank_clean_lex(fv);
    let [w2, w3, w4, w5] = TWO_COMPONENT_WEIGHTS;
    [c1, w2 * c2 + w3 * c3 + w4 * c4 + w5 * c5]
}

pub fn rank_disc_raw(fv: &FeatureVector) -> [f64; 5] {
    let f = |i: usize| fv[i];
    let c1 = c1_shifted(fv, 0.0);
    let c2 = 0.5 * f(14) + 0.5 * f(21) + 0.05 * f(1) + 0.01 * f(5);
    let c3 = f(10) + f(19) + 0.1 * f(20);
    let c4 = -(4.0 * f(24).powi(3)
        + f(25)
        + 5.0 * (1.0 - f(23)) * f(24)
        + 10.0 * f(10) * f(24) * (1.0 - f(23)));
    let c5 = f(18) + 0.5 * f(8);
    [c1, c2, c3, c4, c5]
}

pub fn rank_r100_raw(fv: &FeatureVector) -> [f64; 5] {
    let f = |i: usize| fv[i];
    let c1 = c1_shifted(fv, 0.0);
    let c2 = f(14) + 0.1 * f(21) + 0.1 * f(1) + 0.8 * f(23) + 0.5 * f(7) + 0.2 * f(17);
    let c3 = f(10) + 2.0 * f(19) + 0.5 * f(20) + 0.1 * f(4) + 0.2 * f(12) + 0.1 * f(13);

    let acc = 10.0 * f(24).powi(2) + 5.0 * f(25);
    let jac = f(6) + (1.0 - f(23)) + f(12) + f(13);
    let alpha = (jac + f(21) / (1.0 + f(22))).tanh().max(0.0);
    let wild = f(10) + f(18) + f(5) + f(19) * f(20) + f(4);
    let beta = (wild / 5.0).tanh().max(0.0);
    let gamma = ((f(24) + f(25) + f(4)) / 10.0).tanh().max(0.0);
    let kappa = 1000.0 * (1.0 + ((acc + f(4) + f(5) + f(18)) / 100.0).tanh());
    let sigma = 0.01 + 0.5 * alpha + 0.5 * beta + 0.1 * gamma;
    let c4 = -(acc + kappa * sigma.exp());

    let c5 = f(18) + f(5) + 0.5 * f(8) + 2.0 * f(6) + 0.1 * f(15) - 0.1 * f(22);
    [c1, c2, c3, c4, c5]
}

pub trait Ranker: Send + Sync {
    fn name(&self) -> &str;

    /// Number of components every output must have.
    fn arity(&self) -> usize;

    fn rank(&self, fv: &FeatureVector) -> Rank;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinRanker {
    TwoComponent,
    CleanLex,
    CleanLexPi,
    DiscLex,
    DiscLexRaw,
    R100,
    R100Raw,
}

impl BuiltinRanker {
    pub const ALL: [BuiltinRanker; 7] = [
        BuiltinRanker::TwoComponent,
        BuiltinRanker::CleanLex,
        BuiltinRanker::CleanLexPi,
        BuiltinRanker::DiscLex,
        BuiltinRanker::DiscLexRaw,
        BuiltinRanker::R100,
        BuiltinRanker::R100Raw,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinRanker::TwoComponent => "two_component",
            BuiltinRanker::CleanLex => "clean_lex",
            BuiltinRanker::CleanLexPi => "clean_lex_pi",
            BuiltinRanker::DiscLex => "disc_lex",
            BuiltinRanker::DiscLexRaw => "disc_lex_raw",
            BuiltinRanker::R100 => "r100",
            BuiltinRanker::R100Raw => "r100_raw",
        }
    }
}

impl FromStr for BuiltinRanker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownRanker(s.to_string()))
    }
}

impl fmt::Display for BuiltinRanker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn with_pi(raw: [f64; 5]) -> Rank {
    Rank {
        raw: raw.to_vec(),
        discrete: Some(discretize(&raw).to_vec()),
    }
}

impl Ranker for BuiltinRanker {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn arity(&self) -> usize {
        match self {
            BuiltinRanker::TwoComponent => 2,
            _ => 5,
        }
    }

    fn rank(&self, fv: &FeatureVector) -> Rank {
        match self {
            BuiltinRanker::TwoComponent => Rank::raw(rank_two_component(fv).to_vec()),
            BuiltinRanker::CleanLex => Rank::raw(rank_clean_lex(fv).to_vec()),
            BuiltinRanker::CleanLexPi => with_pi(rank_clean_lex(fv)),
            BuiltinRanker::DiscLex => with_pi(rank_disc_raw(fv)),
            BuiltinRanker::DiscLexRaw => Rank::raw(rank_disc_raw(fv).to_vec()),
            BuiltinRanker::R100 => with_pi(rank_r100_raw(fv)),
            BuiltinRanker::R100Raw => Rank::raw(rank_r100_raw(fv).to_vec()),
        }
    }
}

pub fn ranker_names() -> Vec<&'static str> {
    BuiltinRanker::ALL.iter().map(|r| r.as_str()).collect()
}

pub fn ranker_by_name(name: &str) -> Result<BuiltinRanker> {
    name.parse()
}
