use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants are split (see [`Error::is_numeric`]) into input-validation
/// failures and numerical failures; the CLI maps them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constant term vanished after merging equal exponents")]
    ConstantTermVanished,
    #[error("term exponent evaluates to {0} < 0")]
    NegativeExponent(f64),
    #[error("parameter point is not in the cone: {0}")]
    NotInCone(String),
    #[error("spectrum is empty: the poly-exponential reduced to a nonzero constant")]
    EmptySpectrum,
    #[error("index {index} out of range for an ordered spectrum of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("a zero lies on or near the contour boundary")]
    ZeroOnBoundary,
    #[error("largest exponent is tied or its coefficient merged to zero")]
    TiedLeadingExponent,
    #[error("parameter path leaves the cone at s = {0}")]
    PathLeftCone(f64),
    #[error("growth fit inconclusive: {0}")]
    Inconclusive(String),
    #[error("truncation removed every non-constant term")]
    DegenerateTruncation,
    #[error("no Perron frontier in the strip")]
    NoFrontier,
    #[error("cycle enumeration budget exceeded after {found} cycles")]
    BudgetExceeded { found: usize },
    #[error("edge lengths are not invariant under the automorphism (edge {0})")]
    NotInvariant(String),
    #[error("lambda0 is not a root of unity of order dividing {order}")]
    BadEigenvalue { order: usize },
    #[error("not a graph automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of a numerical procedure on valid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ZeroOnBoundary
                | Error::Inconclusive(_)
                | Error::NoFrontier
                | Error::BudgetExceeded { .. }
                | Error::Numeric(_)
        )
    }

    /// Stable machine-readable code, used on stderr by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ConstantTermVanished => "constant-term-vanished",
            Error::NegativeExponent(_) => "negative-exponent",
            Error::NotInCone(_) => "not-in-cone",
            Error::EmptySpectrum => "empty-spectrum",
            Error::OutOfRange { .. } => "out-of-range",
            Error::ZeroOnBoundary => "zero-on-boundary",
            Error::TiedLeadingExponent => "tied-leading-exponent",
            Error::PathLeftCone(_) => "path-left-cone",
            Error::Inconclusive(_) => "inconclusive",
            Error::DegenerateTruncation => "degenerate-truncation",
            Error::NoFrontier => "no-frontier",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::NotInvariant(_) => "not-invariant",
            Error::BadEigenvalue { .. } => "bad-eigenvalue",
            Error::NotAutomorphism(_) => "not-automorphism",
            Error::UnknownParameter(_) => "unknown-parameter",
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "invalid",
            Error::Numeric(_) => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
