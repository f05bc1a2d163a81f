use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("user {user} and base-station {bs} are co-located (distance {distance} m)")]
    CoLocated { user: usize, bs: usize, distance: f64 },

    #[error("cannot cut a dendrogram with {leaves} leaves into {requested} clusters")]
    CutOutOfRange { leaves: usize, requested: usize },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("instance too large for the brute-force oracle: {0}")]
    OracleTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
