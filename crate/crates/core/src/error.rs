use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report.
///
/// Variants fall into two families: input errors (malformed text, values
/// outside an operation's domain) and numerical failures (overflow, fits
/// that do not converge). [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {position}: expected one of {}", expected.join(", "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
    },

    #[error("variable x{index} is outside dimension {dimension}")]
    Dimension { index: usize, dimension: usize },

    #[error("point has {got} coordinates but the form lives in dimension {expected}")]
    PointDimension { expected: usize, got: usize },

    #[error("exponent at offset {position} is not a numeric literal")]
    NonLiteralExponent { position: usize },

    #[error("cannot evaluate at the origin")]
    Origin,

    #[error("result exceeds the representable range")]
    Overflow,

    #[error("expression is outside the log-homogeneous class: {0}")]
    NotInClass(String),

    #[error("the zero form has no degree")]
    UndefinedDegree,

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("input is the zero form")]
    ZeroInput,

    #[error("expected a single degree, found {0} distinct degrees")]
    MixedDegrees(usize),

    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },

    #[error("pairing diverges: Re λ = {re_degree} <= -{dimension} and the origin lies in the test function support")]
    Integrability { re_degree: f64, dimension: usize },

    #[error("pairing is implemented for n in 1..=3, got n = {0}")]
    DimensionUnsupported(usize),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("no recurrence of order <= {max_order} fits the samples")]
    NoFit { max_order: usize },

    #[error("characteristic roots do not cluster (annihilation residual {residual:e})")]
    RootSplit { residual: f64 },

    #[error("|Im λ|·Δ = {phase} is too close to π; sampling aliases the degree")]
    AliasRisk { phase: f64 },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable category name used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::Dimension { .. } | Error::PointDimension { .. } => "DimensionError",
            Error::NonLiteralExponent { .. } => "NonLiteralExponent",
            Error::Origin => "OriginError",
            Error::Overflow => "OverflowError",
            Error::NotInClass(_) => "NotInClass",
            Error::UndefinedDegree => "UndefinedDegree",
            Error::NonPositiveScale(_) => "NonPositiveScale",
            Error::ZeroInput => "ZeroInput",
            Error::MixedDegrees(_) => "MixedDegrees",
            Error::Index { .. } => "IndexError",
            Error::Integrability { .. } => "IntegrabilityError",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::NoFit { .. } => "NoFit",
            Error::RootSplit { .. } => "RootSplit",
            Error::AliasRisk { .. } => "AliasRisk",
            Error::Evaluation(_) => "EvaluationError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Process exit status for this failure: 3 for numerical failures, 2 for
    /// input errors.
    pub fn exit_code(&self) -> u8 {
        if self.is_numerical() {
            3
        } else {
            2
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow
                | Error::NoFit { .. }
                | Error::RootSplit { .. }
                | Error::AliasRisk { .. }
                | Error::Evaluation(_)
        )
    }
}
