use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid type spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("{0:?} is not a positive root")]
    NotPositiveRoot(Vec<i64>),

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i64>),

    #[error("{0:?} is not in the cascade")]
    NotCascadeRoot(Vec<i64>),

    #[error("simple-root subset {0:?} is empty or not connected")]
    DisconnectedSubset(Vec<usize>),

    #[error("element is not in the nilradical n: {0}")]
    NotInNilradical(String),

    #[error("weight {0:?} is not a dominant point of the cascade lattice")]
    NotDominantLatticePoint(Vec<String>),

    #[error("r_cap {cap} exceeded: found {found} indecomposable dominant points, expected {expected}")]
    CapExceeded { cap: u32, found: usize, expected: usize },

    #[error("multiplicity one violated at weight {weight:?}: invariant space has dimension {dim}")]
    TheoremViolation { weight: Vec<String>, dim: usize },

    #[error("cascade monomial has zero coefficient in the invariant of weight {0:?}")]
    LeadingCoefficientZero(Vec<String>),

    #[error("dominant point {0:?} has no nonnegative decomposition over the generators")]
    NotFree(Vec<i64>),

    #[error("span criteria disagree at weight {0:?}")]
    SpanMismatch(Vec<String>),

    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("singular system")]
    Singular,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
