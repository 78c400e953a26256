use thiserror::Error;

/// Errors raised by the engine.
///
/// Disagreements with published values are never errors; they are reported
/// as data by the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generator {0} is not a positive integer")]
    NonPositiveGenerator(i64),
    #[error("generators have gcd {0}, so they do not define a numerical semigroup")]
    NotCoprime(u64),
    #[error("{0} is not a positive element of the semigroup")]
    NotAMember(i64),
    #[error("unknown germ preset `{0}` (expected node, cusp, tacnode, triple_point or smooth)")]
    UnknownPreset(String),
    #[error("truncation order {truncation} is too small: {reason}")]
    TruncationTooSmall { truncation: usize, reason: String },
    #[error("invalid parametrization: {0}")]
    InvalidParametrization(String),
    #[error("malformed nodal curve: {0}")]
    MalformedCurve(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("catalog entry `{entry}`: {source}")]
    InEntry { entry: String, source: Box<Error> },
}

impl Error {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyGenerators => "empty_generators",
            Error::NonPositiveGenerator(_) => "non_positive_generator",
            Error::NotCoprime(_) => "not_coprime",
            Error::NotAMember(_) => "not_a_member",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::TruncationTooSmall { .. } => "truncation_too_small",
            Error::InvalidParametrization(_) => "invalid_parametrization",
            Error::MalformedCurve(_) => "malformed_curve",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse(_) => "parse_error",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::InEntry { source, .. } => source.code(),
        }
    }

    pub(crate) fn truncation(truncation: usize, reason: impl Into<String>) -> Self {
        Error::TruncationTooSmall {
            truncation,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
