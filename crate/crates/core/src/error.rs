use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a series that is zero to precision")]
    DivisionByZeroSeries,
    #[error("composition needs an inner series with positive valuation (got lead {0})")]
    CompositionOrderError(i64),
    #[error("reversion needs a series q·(unit) + ... (got lead {0})")]
    ReversionOrderError(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("eta quotient has odd exponent sum {0}; weight is not an integer")]
    FractionalWeightError(i64),
    #[error("eta quotient has non-integral order {0}/24 at infinity")]
    FractionalOrderError(i64),
    #[error("eta quotient: {0}")]
    InvalidEtaQuotient(String),
    #[error("Eisenstein series parity condition fails: {0}")]
    ParityError(String),
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("generator data insufficient for {spec}: rank {achieved} of {expected}")]
    RankDeficient {
        spec: String,
        achieved: usize,
        expected: usize,
    },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("constant term of f cannot be normalized to 1: {0}")]
    NonVanishingConstraint(String),
    #[error("precision exhausted: need {needed}, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("coefficient not {p}-integral at index {index}")]
    NonIntegralAtP { p: u64, index: usize },
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
