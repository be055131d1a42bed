use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty polynomial text")]
    EmptyInput,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("bad exponent `{text}` for variable `{var}`: exponents must be positive integers")]
    BadExponent { var: String, text: String },

    #[error("malformed term `{0}`")]
    MalformedTerm(String),

    #[error("unknown tag annotation `{0}`")]
    UnknownTag(String),

    #[error("characteristic {0} is not prime")]
    NotPrime(u32),

    #[error("invalid variable set: {0}")]
    InvalidVariables(String),

    #[error("exponent vector has total degree 0")]
    ZeroExponent,

    #[error("ideal is empty")]
    EmptyIdeal,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("rank contains a non-finite entry")]
    NonFiniteRank,

    #[error("unknown ranker `{0}`")]
    UnknownRanker(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("case `{case}`: {source}")]
    Case {
        case: String,
        #[source]
        source: Box<Error>,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_case(self, case: &str) -> Error {
        Error::Case {
            case: case.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
