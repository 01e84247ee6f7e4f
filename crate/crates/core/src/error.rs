use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("system is not a Riesz basis ({0})")]
    NotARieszBasis(String),

    #[error("no biorthogonal sequence exists (minimality fails): smallest singular value {sigma_min:e} below rank tolerance {tolerance:e}")]
    NoBiorthogonalSequence { sigma_min: f64, tolerance: f64 },

    #[error("dual construction is ill-conditioned: biorthogonality residual {residual:e} exceeds {limit:e} (Gram condition {condition:e})")]
    IllConditioned { residual: f64, limit: f64, condition: f64 },

    #[error("sequences are not biorthogonal: residual {residual:e} exceeds {limit:e}")]
    NotBiorthogonal { residual: f64, limit: f64 },

    #[error("operator is singular: smallest singular value {sigma_min:e} below tolerance {tolerance:e}")]
    SingularOperator { sigma_min: f64, tolerance: f64 },

    #[error("criteria disagreement: {0}")]
    CriteriaDisagreement(String),

    #[error("node (tau={tau}, mu={mu}) lies outside the safe window |tau| <= {limit}")]
    Truncation { tau: f64, mu: f64, limit: f64 },

    #[error("invalid discretization: {0}")]
    Discretization(String),

    #[error("invalid point set: {0}")]
    PointSet(String),

    #[error("growth fit needs positive values, got {value} at index {index}")]
    FitDomain { index: usize, value: f64 },

    #[error("invalid family spec: {0}")]
    Family(String),

    #[error("size {size}: {source}")]
    AtSize {
        size: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any size annotations added by the scaling driver.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtSize { source, .. } => source.root(),
            other => other,
        }
    }
}
