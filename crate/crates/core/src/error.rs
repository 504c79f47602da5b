use thiserror::Error;

/// Errors produced by the simulator and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("antenna index {index} out of range for {antennas} transmit antennas")]
    IndexOutOfRange { index: usize, antennas: usize },

    #[error("RIS phases have not been aligned")]
    PhasesNotAligned,

    #[error("SNR grid is empty")]
    EmptyGrid,

    #[error("no interference floor: kappa = 0 and omega_i = 0, the asymptotic UPEP is 0")]
    NoInterferenceFloor,

    #[error("adaptive quadrature did not converge after {intervals} intervals (error estimate {error:e})")]
    QuadratureNotConverged { intervals: usize, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
