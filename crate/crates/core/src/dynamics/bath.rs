use crate::error::{Error, Result};
use crate::fock::{thermal_occupation, CompositeBasis};

/// One reservoir oscillator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathMode {
    pub frequency: f64,
    pub coupling: f64,
    pub dim: usize,
}

/// Finite set of reservoir oscillators with real couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteBath {
    modes: Vec<BathMode>,
}

impl DiscreteBath {
    pub fn new(modes: Vec<BathMode>) -> Result<Self> {
        for (j, m) in modes.iter().enumerate() {
            if !(m.frequency > 0.0) || !m.frequency.is_finite() {
                return Err(Error::InvalidArgument(format!("bath mode {j}: frequency must be positive")));
            }
            if !(m.coupling >= 0.0) || !m.coupling.is_finite() {
                return Err(Error::InvalidArgument(format!("bath mode {j}: coupling must be real and >= 0")));
            }
            if m.dim < 2 {
                return Err(Error::InvalidArgument(format!("bath mode {j}: coupled modes need dim >= 2")));
            }
        }
        Ok(Self { modes })
    }

    pub fn empty() -> Self {
        Self { modes: Vec::new() }
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Copy with every coupling multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Result<Self> {
        Self::new(self.modes.iter().map(|m| BathMode { coupling: m.coupling * scale, ..*m }).collect())
    }

    pub fn max_coupling(&self) -> f64 {
        self.modes.iter().map(|m| m.coupling).fold(0.0, f64::max)
    }

    /// Composite basis with the field first and the bath modes after it.
    pub fn basis_with_field(&self, field_dim: usize) -> Result<CompositeBasis> {
        let mut dims = vec![field_dim];
        dims.extend(self.modes.iter().map(|m| m.dim));
        CompositeBasis::new(dims)
    }

    /// Thermal occupations `n_j` at inverse temperature `beta`.
    pub fn thermal_occupations(&self, beta: f64) -> Vec<f64> {
        self.modes.iter().map(|m| thermal_occupation(beta, m.frequency)).collect()
    }
}
