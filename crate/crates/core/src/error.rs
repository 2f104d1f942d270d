use thiserror::Error;

/// Errors raised by the controller model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} lies outside {domain}")]
    Domain { what: &'static str, value: f64, domain: &'static str },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("Paley order {0} exceeds the 8-bit range (max 255)")]
    OrderOutOfRange(u32),
    #[error("grid exponent {grid} is too coarse for Paley order {order} (needs at least {needed})")]
    GridTooCoarse { order: u8, grid: u32, needed: u32 },
    #[error("grid exponent {0} exceeds the 2^16 sample cap")]
    GridTooFine(u32),
    #[error("spectrum with {terms} terms does not fit a grid of {grid} samples")]
    SpectrumTooLong { terms: usize, grid: usize },
    #[error("pi-pulse of {tau_pi:e} s does not fit in a {segment:e} s segment")]
    PulseTooLong { tau_pi: f64, segment: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
