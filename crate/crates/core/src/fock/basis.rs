use crate::error::{Error, Result};

/// A single bosonic mode truncated to the levels `|0>, ..., |dim-1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("Fock space needs at least one level".into()));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Ordered product of truncated modes. Mode 0 is the field, modes `1..=N`
/// are the bath oscillators in ascending order. Flat indices are
/// field-major: the last mode varies fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompositeBasis {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl CompositeBasis {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("composite basis needs at least one mode".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument(format!("zero-dimensional mode in {dims:?}")));
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len() - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let total = strides[0] * dims[0];
        Ok(Self { dims, strides, total })
    }

    pub fn single(space: FockSpace) -> Self {
        Self { dims: vec![space.dim()], strides: vec![1], total: space.dim() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn mode_space(&self, mode: usize) -> FockSpace {
        FockSpace { dim: self.dims[mode] }
    }

    pub fn index(&self, occupations: &[usize]) -> usize {
        debug_assert_eq!(occupations.len(), self.dims.len());
        occupations.iter().zip(&self.strides).map(|(n, s)| n * s).sum()
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, stride) in self.strides.iter().enumerate() {
            out[k] = index / stride;
            index %= stride;
        }
        out
    }

    /// Occupation of a single mode at a flat index.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % self.dims[mode]
    }

    pub fn total_excitation(&self, index: usize) -> usize {
        (0..self.dims.len()).map(|k| self.occupation(index, k)).sum()
    }

    /// Basis over a subset of modes, kept in their original order.
    pub fn restrict(&self, modes: &[usize]) -> Result<Self> {
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() || sorted.iter().any(|&m| m >= self.dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "invalid mode selection {modes:?} for {} modes",
                self.dims.len()
            )));
        }
        Self::new(sorted.iter().map(|&m| self.dims[m]).collect())
    }

    pub fn concat(&self, other: &CompositeBasis) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims).expect("concatenation of valid bases")
    }
}
