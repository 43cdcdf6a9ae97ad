use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Newton pairs: {0}")]
    InvalidNewton(String),
    #[error("invalid Puiseux pairs: {0}")]
    InvalidPuiseux(String),
    #[error("invalid characteristic sequence: {0}")]
    InvalidCharacteristic(String),
    #[error("invalid multiplicity sequence: {0}")]
    InvalidMultiplicity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("counting argument {k} exceeds membership bound {bound}")]
    Range { k: i64, bound: u64 },
    #[error("semigroup check out of budget: {0}")]
    Intractable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
