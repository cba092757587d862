use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown predicate '{0}'")]
    UnknownPredicate(String),
    #[error("unknown suite '{0}' (expected all, section2, section3 or means-axioms)")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("report serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Core(#[from] qradius_core::Error),
}
