//! Truncated Fock-space primitives: ladder operators, single-mode state
//! constructors, composite bases, and the reduced-state toolkit.

mod basis;
mod state;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use basis::{CompositeBasis, FockSpace};
pub use state::{
    expectation, linear_entropy, partial_trace, tensor_densities, tensor_kets, DensityMatrix, Expectation,
    KetVector, Validity,
};

#[cfg(test)]
pub(crate) use state::pseudo_random_ket;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Minimum retained weight (norm squared) for a truncated state constructor.
pub const MIN_RETAINED_WEIGHT: f64 = 0.999;

/// Maximum tail mass a truncated thermal distribution may drop.
pub const MAX_THERMAL_TAIL: f64 = 1e-6;

/// Matrix of the annihilation operator, `<n-1|a|n> = sqrt(n)`.
pub fn annihilation_matrix(space: FockSpace) -> CMatrix {
    let d = space.dim();
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Lift a single-mode operator to the composite basis.
pub fn embed(op: &CMatrix, basis: &CompositeBasis, mode: usize) -> Result<CMatrix> {
    if mode >= basis.n_modes() || op.nrows() != basis.dims()[mode] || op.ncols() != basis.dims()[mode] {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on mode {mode} of {:?}",
            op.nrows(),
            op.ncols(),
            basis.dims()
        )));
    }
    let n = basis.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for col in 0..n {
        let occ = basis.occupation(col, mode);
        for row_occ in 0..basis.dims()[mode] {
            let v = op[(row_occ, occ)];
            if v != C64::new(0.0, 0.0) {
                let row = col + row_occ * stride(basis, mode) - occ * stride(basis, mode);
                out[(row, col)] = v;
            }
        }
    }
    Ok(out)
}

fn stride(basis: &CompositeBasis, mode: usize) -> usize {
    basis.dims()[mode + 1..].iter().product()
}

pub fn number_operator(basis: &CompositeBasis, mode: usize) -> CMatrix {
    let n = basis.total_dim();
    CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        (0..n).map(|i| C64::new(basis.occupation(i, mode) as f64, 0.0)),
    ))
}

/// Initial state of the field mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldStateSpec {
    Fock(usize),
    Coherent(C64),
    /// Even superposition of `|alpha>` and `|-alpha>`.
    EvenCat(C64),
}

impl FieldStateSpec {
    pub fn ket(&self, space: FockSpace) -> Result<KetVector> {
        match *self {
            FieldStateSpec::Fock(n) => fock_state(n, space),
            FieldStateSpec::Coherent(alpha) => coherent_state(alpha, space),
            FieldStateSpec::EvenCat(alpha) => even_cat_state(alpha, space),
        }
    }

    /// Smallest dimension the constructors consider adequate.
    pub fn recommended_dim(&self) -> usize {
        match *self {
            FieldStateSpec::Fock(n) => n + 2,
            FieldStateSpec::Coherent(alpha) | FieldStateSpec::EvenCat(alpha) => recommended_dim(alpha),
        }
    }
}

fn recommended_dim(alpha: C64) -> usize {
    let m = alpha.norm_sqr();
    (m + 6.0 * (m + 1.0).sqrt()).ceil() as usize
}

pub fn fock_state(n: usize, space: FockSpace) -> Result<KetVector> {
    if n >= space.dim() {
        return Err(Error::Truncation(format!("Fock level {n} outside dimension {}", space.dim())));
    }
    KetVector::basis_state(CompositeBasis::single(space), &[n])
}

/// Unnormalised coherent-state amplitudes `alpha^n / sqrt(n!)`, without the
/// Gaussian prefactor.
fn poisson_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut c = Vec::with_capacity(dim);
    let mut cur = C64::new(1.0, 0.0);
    for n in 0..dim {
        if n > 0 {
            cur = cur * alpha / (n as f64).sqrt();
        }
        c.push(cur);
    }
    c
}

fn warn_if_tight(alpha: C64, space: FockSpace) {
    let rec = recommended_dim(alpha);
    if space.dim() < rec {
        log::warn!("dimension {} below recommended {rec} for |alpha| = {}", space.dim(), alpha.norm());
    }
}

/// Glauber coherent state, renormalised after truncation.
pub fn coherent_state(alpha: C64, space: FockSpace) -> Result<KetVector> {
    warn_if_tight(alpha, space);
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let amps: Vec<C64> = poisson_amplitudes(alpha, space.dim()).into_iter().map(|c| c * prefactor).collect();
    finish_truncated(amps, 1.0, space)
}

/// Even coherent state `(|alpha> + |-alpha>) / sqrt(2 (1 + exp(-2|alpha|^2)))`.
///
/// With this normalisation `<a^dag a> = |alpha|^2 tanh |alpha|^2`.
pub fn even_cat_state(alpha: C64, space: FockSpace) -> Result<KetVector> {
    warn_if_tight(alpha, space);
    let m = alpha.norm_sqr();
    // |alpha> + |-alpha> keeps only even levels, each doubled.
    let prefactor = 2.0 * (-m / 2.0).exp();
    let amps: Vec<C64> = poisson_amplitudes(alpha, space.dim())
        .into_iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c * prefactor } else { C64::new(0.0, 0.0) })
        .collect();
    let exact_norm_sqr = 2.0 * (1.0 + (-2.0 * m).exp());
    finish_truncated(amps, exact_norm_sqr, space)
}

fn finish_truncated(amps: Vec<C64>, exact_norm_sqr: f64, space: FockSpace) -> Result<KetVector> {
    let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let retained = kept / exact_norm_sqr;
    if retained < MIN_RETAINED_WEIGHT {
        return Err(Error::Truncation(format!(
            "dimension {} retains only {retained:.6} of the state's weight",
            space.dim()
        )));
    }
    let ket = KetVector::new(CVector::from_vec(amps), CompositeBasis::single(space))?;
    Ok(ket.normalized())
}

/// Mean thermal occupation `1 / (exp(beta * freq) - 1)`; zero at `beta = inf`.
pub fn thermal_occupation(beta: f64, freq: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * freq).exp_m1()
    }
}

/// Inverse temperature giving mean occupation `n_bar` at `freq`.
pub fn beta_for_occupation(n_bar: f64, freq: f64) -> f64 {
    if n_bar <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 / n_bar).ln_1p() / freq
    }
}

/// Boltzmann populations `p_n ~ exp(-beta freq n)` over the truncated levels.
/// `beta = f64::INFINITY` is the zero-temperature vacuum.
pub fn thermal_weights(beta: f64, freq: f64, space: FockSpace) -> Result<Vec<f64>> {
    if !(beta > 0.0) || !(freq > 0.0) {
        return Err(Error::InvalidArgument(format!("thermal weights need beta > 0 and freq > 0, got {beta}, {freq}")));
    }
    let d = space.dim();
    if beta.is_infinite() {
        let mut p = vec![0.0; d];
        p[0] = 1.0;
        return Ok(p);
    }
    let q = (-beta * freq).exp();
    let tail = q.powi(d as i32);
    if tail > MAX_THERMAL_TAIL {
        return Err(Error::Truncation(format!("thermal tail mass {tail:.3e} beyond {d} levels")));
    }
    let raw: Vec<f64> = (0..d).map(|n| q.powi(n as i32)).collect();
    let z: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|p| p / z).collect())
}
