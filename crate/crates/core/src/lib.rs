//! Toy canonical blow-up simulator for hypersurface singularities in positive
//! characteristic, with feature extraction, ranking functions, a descent
//! harness, embedded benchmark suites and a ranker weight search.

pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod features;
pub mod harness;
pub mod ideal;
pub mod rankers;
pub mod search;
pub mod simulator;
pub mod trace;

pub use error::{Error, Result};
pub use features::{extract_features, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
pub use ideal::{parse_polynomial, Boundary, ExponentVector, IdealSpec, State, Tag, TaggedMonomial, VariableSet};
pub use simulator::{run_trajectory, step, Center, SimConfig, Trajectory};
