use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented range.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The formula is undefined for the given input (division by zero).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("irregular topology: {0}")]
    IrregularTopology(String),

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("traffic shares sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("invalid placement order: {0}")]
    InvalidOrder(String),

    /// No parameter choice reaches the requested target.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("rank {rank} outside 1..={n_items}")]
    RankOutOfRange { rank: usize, n_items: usize },

    #[error("unknown service {0:?}")]
    UnknownService(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
