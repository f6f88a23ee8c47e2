//! Hierarchical pinning model with site disorder: exact moment recursions,
//! pool Monte Carlo for the quenched partition function, and certificates
//! that bracket the quenched critical field.

pub mod annealed;
pub mod certificates;
pub mod dd;
pub mod disorder;
pub mod error;
pub mod experiments;
pub mod fractional;
pub mod geometry;
pub mod logspace;
pub mod oracle;
pub mod params;
pub mod pool;
pub mod rng;
mod serde_float;

pub use disorder::DisorderModel;
pub use error::{Error, Result};
pub use params::{ModelParams, Regime};
