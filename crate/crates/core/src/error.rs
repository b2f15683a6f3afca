use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error("input columns are linearly dependent")]
    DependentColumns,

    #[error("matrix is singular")]
    Singular,

    #[error("word {word} lies outside the ball of radius {radius}")]
    OutOfBall { word: String, radius: usize },

    #[error("rewriting did not terminate within {steps} steps")]
    NonTermination { steps: usize },

    #[error("no built-in window family for {0}; supply the window words explicitly")]
    UnsupportedWindow(String),

    #[error("operation not supported for {0}")]
    UnsupportedKind(String),

    #[error("window is not sufficiently invariant: dim VW = {dim_vw}, dim W = {dim_w}, epsilon = {epsilon}")]
    InsufficientInvariance {
        report: Box<crate::folner::InvarianceReport>,
        dim_vw: usize,
        dim_w: usize,
        epsilon: String,
    },

    #[error("degree {needed} exceeds the table's degree cap {cap}")]
    DegreeCapExceeded { needed: usize, cap: usize },

    #[error("root-vector search exhausted after {tried} candidates (search hypothesis {hypothesis})")]
    RootSearchExhausted { tried: usize, hypothesis: &'static str },

    #[error("certification missing: {0}")]
    CertificationMissing(String),

    #[error("instance exceeds the enumeration budget: {0}")]
    UnsupportedSize(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
