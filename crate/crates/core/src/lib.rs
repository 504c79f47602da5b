//! Link-level simulation and error-probability analysis of RIS-assisted
//! full-duplex space shift keying with residual self-interference and loop
//! interference.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod link;
pub mod montecarlo;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use params::SystemParams;
