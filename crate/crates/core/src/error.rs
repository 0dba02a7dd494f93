use thiserror::Error;

use crate::metasurface::PolarizedMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{what} = {value} exceeds the supported bound of {bound}")]
    Bound { what: &'static str, value: usize, bound: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid encoding: {0}")]
    Encoding(String),
    #[error("mode {0} is not part of the mode basis")]
    MissingMode(PolarizedMode),
    #[error("encodings share mode {0}")]
    OverlappingEncodings(PolarizedMode),
    #[error("zero operator has no defined fidelity")]
    ZeroOperator,
    #[error("value outside its domain: {0}")]
    Domain(String),
    #[error("sweep point {parameter} = {value}: {source}")]
    SweepPoint {
        parameter: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}
