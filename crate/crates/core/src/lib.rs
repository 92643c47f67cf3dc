//! Grover search on small qubit registers: circuit synthesis, exact
//! statevector and density-matrix simulation, calibrated noise, state
//! tomography, success metrics and the accompanying statistics.

pub mod bits;
pub mod calibration;
pub mod cli;
pub mod error;
pub mod grover;
pub mod metrics;
pub mod noise;
pub mod sim;
pub mod stats;
pub mod tomography;

pub use error::{Error, Result};
