//! Frequency-selective beamforming with dynamic metasurface antennas.

pub mod bandwidth;
pub mod binary;
pub mod channel;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod gain;
pub mod model;
pub mod oracle;
pub mod output;
pub mod planner;
pub mod rate;
pub mod scenario;
pub mod training;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{DmaDesign, ResonantConfig};
