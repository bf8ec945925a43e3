use nalgebra::DVector;

use super::basis::CompositeBasis;
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Pure state over a composite truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KetVector {
    amplitudes: CVector,
    basis: CompositeBasis,
}

/// Mixed state over a composite truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    basis: CompositeBasis,
}

/// Result of checking the density-matrix invariants numerically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validity {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Validity {
    pub fn holds(&self, hermitian_tol: f64, trace_tol: f64, eig_floor: f64) -> bool {
        self.hermiticity_error <= hermitian_tol
            && self.trace_error <= trace_tol
            && self.min_eigenvalue >= -eig_floor
    }
}

impl KetVector {
    pub fn new(amplitudes: CVector, basis: CompositeBasis) -> Result<Self> {
        if amplitudes.len() != basis.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for basis of dimension {}",
                amplitudes.len(),
                basis.total_dim()
            )));
        }
        Ok(Self { amplitudes, basis })
    }

    pub fn basis_state(basis: CompositeBasis, occupations: &[usize]) -> Result<Self> {
        if occupations.len() != basis.n_modes()
            || occupations.iter().zip(basis.dims()).any(|(n, d)| n >= d)
        {
            return Err(Error::DimensionMismatch(format!(
                "occupations {occupations:?} outside basis {:?}",
                basis.dims()
            )));
        }
        let mut amps = CVector::zeros(basis.total_dim());
        amps[basis.index(occupations)] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps, basis })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.unscale_mut(n);
        }
        self
    }

    pub fn tensor(&self, other: &KetVector) -> KetVector {
        KetVector {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            basis: self.basis.concat(&other.basis),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
            basis: self.basis.clone(),
        }
    }

    /// Reduced density matrix on `keep`, computed without forming the full
    /// projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (kept_basis, kept_idx, traced_idx, traced_dim) = split_indices(&self.basis, keep)?;
        let mut m = CMatrix::zeros(kept_basis.total_dim(), traced_dim);
        for (i, amp) in self.amplitudes.iter().enumerate() {
            m[(kept_idx[i], traced_idx[i])] = *amp;
        }
        Ok(DensityMatrix { entries: &m * m.adjoint(), basis: kept_basis })
    }
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, basis: CompositeBasis) -> Result<Self> {
        let n = basis.total_dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for basis of dimension {n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, basis })
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64], basis: CompositeBasis) -> Result<Self> {
        let v = DVector::from_iterator(populations.len(), populations.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&v), basis)
    }

    pub fn maximally_mixed(basis: CompositeBasis) -> Self {
        let n = basis.total_dim();
        Self { entries: CMatrix::identity(n, n).unscale(n as f64), basis }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr rho^2`, evaluated as the squared Frobenius norm of a Hermitian matrix.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn linear_entropy(&self) -> f64 {
        linear_entropy(self)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            entries: self.entries.kronecker(&other.entries),
            basis: self.basis.concat(&other.basis),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }

    pub fn validity(&self) -> Validity {
        let herm = (&self.entries - self.entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace_error = (self.trace() - C64::new(1.0, 0.0)).norm();
        let sym = (&self.entries + self.entries.adjoint()).scale(0.5);
        let eig = nalgebra::SymmetricEigen::new(sym);
        let min_eigenvalue = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        Validity { hermiticity_error: herm, trace_error, min_eigenvalue }
    }
}

/// Kronecker product of kets in the order given.
pub fn tensor_kets(factors: &[KetVector]) -> Result<KetVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.tensor(f)))
}

pub fn tensor_densities(factors: &[DensityMatrix]) -> Result<DensityMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.tensor(f)))
}

/// Trace out every mode not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (kept_basis, kept_idx, traced_idx, traced_dim) = split_indices(&rho.basis, keep)?;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); traced_dim];
    for (i, &r) in traced_idx.iter().enumerate() {
        groups[r].push(i);
    }
    let n = kept_basis.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for group in &groups {
        for &i in group {
            for &j in group {
                out[(kept_idx[i], kept_idx[j])] += rho.entries[(i, j)];
            }
        }
    }
    Ok(DensityMatrix { entries: out, basis: kept_basis })
}

/// Idempotency deficit `1 - Tr rho^2`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

/// States that can report `<op>`.
pub trait Expectation {
    fn expectation(&self, op: &CMatrix) -> Result<C64>;
}

impl Expectation for KetVector {
    fn expectation(&self, op: &CMatrix) -> Result<C64> {
        check_op(op, self.basis.total_dim())?;
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }
}

impl Expectation for DensityMatrix {
    fn expectation(&self, op: &CMatrix) -> Result<C64> {
        check_op(op, self.basis.total_dim())?;
        // Tr(op rho) without forming the product
        let n = self.basis.total_dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += op[(i, k)] * self.entries[(k, i)];
            }
        }
        Ok(acc)
    }
}

pub fn expectation<S: Expectation>(op: &CMatrix, state: &S) -> Result<C64> {
    state.expectation(op)
}

fn check_op(op: &CMatrix, n: usize) -> Result<()> {
    if op.nrows() != n || op.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a state of dimension {n}",
            op.nrows(),
            op.ncols()
        )));
    }
    Ok(())
}

type Split = (CompositeBasis, Vec<usize>, Vec<usize>, usize);

fn split_indices(basis: &CompositeBasis, keep: &[usize]) -> Result<Split> {
    let kept_basis = basis.restrict(keep)?;
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let traced: Vec<usize> = (0..basis.n_modes()).filter(|m| !keep_sorted.contains(m)).collect();
    let traced_dim: usize = traced.iter().map(|&m| basis.dims()[m]).product();
    let n = basis.total_dim();
    let mut kept_idx = Vec::with_capacity(n);
    let mut traced_idx = Vec::with_capacity(n);
    for i in 0..n {
        let occ = basis.occupations(i);
        let k = keep_sorted.iter().fold(0, |acc, &m| acc * basis.dims()[m] + occ[m]);
        let r = traced.iter().fold(0, |acc, &m| acc * basis.dims()[m] + occ[m]);
        kept_idx.push(k);
        traced_idx.push(r);
    }
    Ok((kept_basis, kept_idx, traced_idx, traced_dim))
}

/// Unit-norm ket of a real random-ish state; only used by tests.
#[cfg(test)]
pub(crate) fn pseudo_random_ket(basis: CompositeBasis, seed: u64) -> KetVector {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let n = basis.total_dim();
    let amps = CVector::from_iterator(n, (0..n).map(|_| C64::new(next(), next())));
    KetVector::new(amps, basis).unwrap().normalized()
}

#[allow(dead_code)]

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;

    fn basis(d: &[usize]) -> CompositeBasis {
        CompositeBasis::new(d.to_vec()).unwrap()
    }

    #[test]
    fn vacuum_tensor_is_index_zero() {
        let a = KetVector::basis_state(basis(&[2]), &[0]).unwrap();
        let p = a.tensor(&a);
        assert_eq!(p.amplitudes()[0], C64::new(1.0, 0.0));
        let one = KetVector::basis_state(basis(&[2]), &[1]).unwrap();
        let q = one.tensor(&a);
        assert_eq!(q.amplitudes()[2], C64::new(1.0, 0.0));
    }

    #[test]
    fn bell_state_reduces_to_half_identity() {
        let b = basis(&[2, 2]);
        let mut amps = CVector::zeros(4);
        amps[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = KetVector::new(amps, b).unwrap();
        let r = psi.to_density().partial_trace(&[0]).unwrap();
        assert!((r.entries()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.entries()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(r.entries()[(0, 1)].norm() < 1e-15);
        let r2 = psi.reduced(&[0]).unwrap();
        assert!((r.entries() - r2.entries()).norm() < 1e-15);
    }

    #[test]
    fn product_state_factor_recovered() {
        let a = pseudo_random_ket(basis(&[3]), 1).to_density();
        let b = pseudo_random_ket(basis(&[2]), 2).to_density();
        let ab = a.tensor(&b);
        let ra = ab.partial_trace(&[0]).unwrap();
        let rb = ab.partial_trace(&[1]).unwrap();
        assert!((ra.entries() - a.entries()).norm() < 1e-12);
        assert!((rb.entries() - b.entries()).norm() < 1e-12);
        assert!((ab.purity() - a.purity() * b.purity()).abs() < 1e-12);
    }

    #[test]
    fn mixed_product_purity_multiplies() {
        let a = DensityMatrix::diagonal(&[0.7, 0.2, 0.1], basis(&[3])).unwrap();
        let b = DensityMatrix::maximally_mixed(basis(&[2]));
        let ab = tensor_densities(&[a.clone(), b.clone()]).unwrap();
        assert!((ab.purity() - a.purity() * b.purity()).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_entropy() {
        let rho = DensityMatrix::maximally_mixed(basis(&[4]));
        assert!((linear_entropy(&rho) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_order_independent() {
        let psi = pseudo_random_ket(basis(&[3, 2, 2, 3]), 7);
        let rho = psi.to_density();
        let direct = rho.partial_trace(&[0]).unwrap();
        let staged = rho.partial_trace(&[0, 1, 2]).unwrap().partial_trace(&[0, 1]).unwrap().partial_trace(&[0]).unwrap();
        let other = rho.partial_trace(&[0, 3]).unwrap().partial_trace(&[0]).unwrap();
        assert!((direct.entries() - staged.entries()).norm() < 1e-12);
        assert!((direct.entries() - other.entries()).norm() < 1e-12);
        assert!((direct.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        let b = basis(&[2, 2]);
        assert!(KetVector::new(CVector::zeros(3), b.clone()).is_err());
        let psi = KetVector::basis_state(b.clone(), &[0, 0]).unwrap();
        let op = CMatrix::identity(3, 3);
        assert!(psi.expectation(&op).is_err());
        assert!(psi.to_density().expectation(&op).is_err());
        assert!(KetVector::basis_state(b, &[2, 0]).is_err());
        let _ = FockSpace::new(2).unwrap();
    }

    #[test]
    fn ket_and_density_expectation_agree() {
        let b = basis(&[3, 2]);
        let psi = pseudo_random_ket(b.clone(), 11);
        let op = crate::fock::number_operator(&b, 0);
        let e1 = psi.expectation(&op).unwrap();
        let e2 = psi.to_density().expectation(&op).unwrap();
        assert!((e1 - e2).norm() < 1e-13);
        assert!(e1.im.abs() < 1e-10);
    }
}
