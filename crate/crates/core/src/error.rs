use std::fmt;

/// Which exact search ran out of room.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    Linf,
    LinfStar,
    LambdaStar,
    Cells,
}

impl fmt::Display for SearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SearchKind::Linf => "linf",
            SearchKind::LinfStar => "linf_star",
            SearchKind::LambdaStar => "lambda_star",
            SearchKind::Cells => "cell decomposition",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{kind} enumeration budget exceeded: d = {dim}, N = {points} (limit N <= {limit})")]
    BudgetExceeded {
        kind: SearchKind,
        dim: usize,
        points: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point set is empty")]
    EmptySet,

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
