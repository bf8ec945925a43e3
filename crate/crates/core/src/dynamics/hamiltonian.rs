use super::bath::DiscreteBath;
use crate::error::{Error, Result};
use crate::fock::{CMatrix, CVector, CompositeBasis, C64};

/// Hamiltonian stored row by row as `(column, value)` pairs.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    basis: CompositeBasis,
    rows: Vec<Vec<(usize, C64)>>,
}

impl Hamiltonian {
    pub fn from_dense(matrix: &CMatrix, basis: CompositeBasis) -> Result<Self> {
        let n = basis.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} Hamiltonian for basis of dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rows = (0..n)
            .map(|i| (0..n).filter(|&j| matrix[(i, j)] != C64::new(0.0, 0.0)).map(|j| (j, matrix[(i, j)])).collect())
            .collect();
        Ok(Self { basis, rows })
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.total_dim()
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        CVector::from_iterator(self.dim(), self.rows.iter().map(|row| row.iter().map(|&(j, h)| h * v[j]).sum::<C64>()))
    }

    /// Dense sub-block on the given (sorted) index set.
    pub fn block(&self, indices: &[usize]) -> CMatrix {
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = CMatrix::zeros(indices.len(), indices.len());
        for (k, &i) in indices.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if pos[j] != usize::MAX {
                    m[(k, pos[j])] += v;
                }
            }
        }
        m
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.to_dense();
        (&d - d.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest matrix element connecting two different blocks of `partition`.
    pub fn off_block_max(&self, partition: &[Vec<usize>]) -> f64 {
        let mut label = vec![0usize; self.dim()];
        for (s, idx) in partition.iter().enumerate() {
            for &i in idx {
                label[i] = s;
            }
        }
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if label[i] != label[j] {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }
}

/// `H = w a^dag a + sum_j W_j b_j^dag b_j + sum_j g_j (a^dag b_j + a b_j^dag)`.
pub fn build_hamiltonian(omega: f64, bath: &DiscreteBath, basis: &CompositeBasis) -> Result<Hamiltonian> {
    if basis.n_modes() != bath.len() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} modes, expected field + {} bath modes",
            basis.n_modes(),
            bath.len()
        )));
    }
    for (j, m) in bath.modes().iter().enumerate() {
        if basis.dims()[j + 1] != m.dim {
            return Err(Error::DimensionMismatch(format!(
                "bath mode {j} has dim {} but basis says {}",
                m.dim,
                basis.dims()[j + 1]
            )));
        }
    }
    let n = basis.total_dim();
    let d0 = basis.dims()[0];
    let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
    let field_stride = n / d0;
    for i in 0..n {
        let occ = basis.occupations(i);
        let diag = omega * occ[0] as f64
            + bath.modes().iter().zip(&occ[1..]).map(|(m, &k)| m.frequency * k as f64).sum::<f64>();
        if diag != 0.0 {
            rows[i].push((i, C64::new(diag, 0.0)));
        }
        if occ[0] + 1 >= d0 {
            continue;
        }
        for (j, mode) in bath.modes().iter().enumerate() {
            let nb = occ[j + 1];
            if nb == 0 || mode.coupling == 0.0 {
                continue;
            }
            // a^dag b_j: field up one, bath mode j down one
            let bath_stride: usize = basis.dims()[j + 2..].iter().product();
            let target = i + field_stride - bath_stride;
            let v = C64::new(mode.coupling * (((occ[0] + 1) * nb) as f64).sqrt(), 0.0);
            rows[target].push((i, v));
            rows[i].push((target, v.conj()));
        }
    }
    for row in &mut rows {
        row.sort_by_key(|&(j, _)| j);
    }
    Ok(Hamiltonian { basis: basis.clone(), rows })
}

/// Basis indices grouped by total excitation number, ascending.
pub fn excitation_sectors(basis: &CompositeBasis) -> Vec<Vec<usize>> {
    let max: usize = basis.dims().iter().map(|d| d - 1).sum();
    let mut sectors = vec![Vec::new(); max + 1];
    for i in 0..basis.total_dim() {
        sectors[basis.total_excitation(i)].push(i);
    }
    sectors
}
