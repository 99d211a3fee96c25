use thiserror::Error;

/// Every failure the library can report.
///
/// Domain conditions (budget exhaustion, points off a variety, failed
/// consistency checks) are distinct variants so callers can tell them apart
/// from malformed input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("coefficient not in field: {0}")]
    NotInField(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomials or ideals belong to different rings")]
    RingMismatch,

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("the ideal is the whole ring (empty variety)")]
    EmptyVariety,

    #[error("invalid Poisson structure: {0}")]
    InvalidStructure(String),

    #[error("point does not lie on the variety: {0}")]
    NotOnVariety(String),

    #[error("group size exceeds cap {0}")]
    CapExceeded(usize),

    #[error("matrix is not invertible")]
    NonInvertible,

    #[error("no symplectic form attached to the group")]
    NoSymplecticForm,

    #[error("group does not preserve the symplectic form")]
    NotSymplectic,

    #[error("Molien series disagrees with Reynolds count in degree {degree}: molien {molien}, reynolds {reynolds}")]
    MolienMismatch { degree: u32, molien: String, reynolds: usize },

    #[error("cannot rewrite {0} in the invariant generators")]
    Rewrite(String),

    #[error("parameter c is missing or not class-invariant on reflection class {0}")]
    ClassParameter(usize),

    #[error("lift is not divisible by the deformation parameter")]
    Divisibility,

    #[error("element is not central: {0}")]
    NotCentral(String),

    #[error("center generation not certified at degree {0}")]
    GenerationNotCertified(u32),

    #[error("structure constants are not associative")]
    NonAssociative,

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("schema violation: {0}")]
    Schema(String),
}

impl Error {
    /// Short machine-readable code used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable(_) => "unknown-variable",
            Error::NotInField(_) => "not-in-field",
            Error::DimensionMismatch { .. } => "dimension",
            Error::RingMismatch => "ring-mismatch",
            Error::Budget(_) => "budget",
            Error::EmptyVariety => "empty-variety",
            Error::InvalidStructure(_) => "invalid-structure",
            Error::NotOnVariety(_) => "not-on-variety",
            Error::CapExceeded(_) => "cap",
            Error::NonInvertible => "non-invertible",
            Error::NoSymplecticForm => "no-symplectic-form",
            Error::NotSymplectic => "not-symplectic",
            Error::MolienMismatch { .. } => "molien",
            Error::Rewrite(_) => "rewrite",
            Error::ClassParameter(_) => "class-parameter",
            Error::Divisibility => "divisibility",
            Error::NotCentral(_) => "not-central",
            Error::GenerationNotCertified(_) => "generation",
            Error::NonAssociative => "non-associative",
            Error::Unsupported(_) => "unsupported",
            Error::Schema(_) => "schema",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
