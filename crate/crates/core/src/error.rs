use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("variable `{0}` has no image under the substitution")]
    UnmappedVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("saturation did not stabilize within {0} steps")]
    SaturationCap(usize),
    #[error("decomposition failure: {0}")]
    DecompositionFailure(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("projection is not allowable")]
    NotAllowable,
    #[error("projection degenerate: {0}")]
    DegenerateProjection(String),
    #[error("Chow ideal did not stabilize within {rounds} samples")]
    NoStabilization { rounds: usize, partial: Vec<String> },
    #[error("ideal has a non-monomial generator")]
    NotMonomial,
    #[error("hyperplanes do not cut out the diagonal")]
    NotDiagonal,
    #[error("certificate verification failed: {0}")]
    CertificateViolation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

impl AlgebraError {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            AlgebraError::RingMismatch => "RING_MISMATCH",
            AlgebraError::InvalidField(_) => "INVALID_FIELD",
            AlgebraError::Parse { .. } => "PARSE",
            AlgebraError::UnmappedVariable(_) => "UNMAPPED_VARIABLE",
            AlgebraError::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            AlgebraError::NotUnivariate => "NOT_UNIVARIATE",
            AlgebraError::UnitIdeal => "UNIT_IDEAL",
            AlgebraError::SaturationCap(_) => "SATURATION_CAP",
            AlgebraError::DecompositionFailure(_) => "DECOMPOSITION_FAILURE",
            AlgebraError::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            AlgebraError::NotAllowable => "NOT_ALLOWABLE",
            AlgebraError::DegenerateProjection(_) => "DEGENERATE_PROJECTION",
            AlgebraError::NoStabilization { .. } => "NO_STABILIZATION",
            AlgebraError::NotMonomial => "NOT_MONOMIAL",
            AlgebraError::NotDiagonal => "NOT_DIAGONAL",
            AlgebraError::CertificateViolation(_) => "CERTIFICATE_VIOLATION",
            AlgebraError::Numeric(_) => "NUMERIC",
            AlgebraError::Invalid(_) => "INVALID",
        }
    }
}
