//! Decoherence and dissipation timescales for a bosonic mode coupled to an
//! oscillator bath.

pub mod born;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod fock;
pub mod parallel;
pub mod spectral;

pub use error::{Error, Result};
