use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no root of the crossover equation in {0}")]
    NoRoot(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unknown figure: {0}")]
    UnknownFigure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
