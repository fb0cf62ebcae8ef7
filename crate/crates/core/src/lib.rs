//! Numerical simulator for Z₃ parafermion chains: braiding by ground-space
//! projection, contextuality witnesses under noise, qutrit process
//! tomography and a Jones-calculus model of the photonic gates.

pub mod algebra;
pub mod braid;
pub mod error;
pub mod noise;
pub mod optics;
pub mod samples;
pub mod tensor;
pub mod tomography;
pub mod witness;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
