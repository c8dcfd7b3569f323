use thiserror::Error;

/// Errors raised by the library.
///
/// Semantic failures of certificates are not errors: they are reported
/// inside a [`crate::cert::Certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("form is not homogeneous: found degrees {0} and {1}")]
    NotHomogeneous(u32, u32),
    #[error("form is identically zero")]
    ZeroForm,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operation needs a prime field: {0}")]
    UnsupportedField(String),
    #[error("characteristic {p} too small: {what}")]
    CharacteristicTooSmall { p: u64, what: String },
    #[error("no square-free split apolar form over the rationals in degree {0}")]
    NonSplitApolar(usize),
    #[error("no split square-free witness found in degree {0}")]
    NoSplitWitness(usize),
    #[error("no decomposition over the ground field: {0}")]
    NoRationalDecomposition(String),
    #[error("decomposition family is empty: {0}")]
    FamilyEmpty(String),
    #[error("projection is degenerate (contraction vanishes)")]
    DegenerateProjection,
    #[error("span intersection is not a single point (dimension {0})")]
    NotUnique(usize),
    #[error("span intersection is empty")]
    EmptyIntersection,
    #[error("decomposition is not a minimal certificate: {0}")]
    NotMinimalCertificate(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("lemma hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("curve has too few rational points: {found} < {needed}")]
    CurveTooSmall { found: usize, needed: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
