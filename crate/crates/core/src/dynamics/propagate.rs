use nalgebra::SymmetricEigen;

use super::hamiltonian::{excitation_sectors, Hamiltonian};
use crate::error::{Error, Result};
use crate::fock::{CMatrix, CVector, KetVector, C64};

/// Largest composite dimension propagated by dense eigendecomposition when
/// the method is [`Method::Auto`].
pub const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    DensePropagator,
    AdaptiveOde,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub t_max: f64,
    pub n_samples: usize,
    pub method: Method,
    /// Allowed norm drift; also sets the ODE step tolerance.
    pub tolerance: f64,
    /// Thermal ensemble is truncated once this much weight is left.
    pub weight_cutoff: f64,
    pub max_members: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self { t_max: 1.0, n_samples: 101, method: Method::Auto, tolerance: 1e-10, weight_cutoff: 1e-3, max_members: 4096 }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(Error::InvalidArgument("n_samples must be >= 2".into()));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidArgument("t_max must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if !(self.weight_cutoff > 0.0 && self.weight_cutoff <= 0.1) {
            return Err(Error::InvalidArgument("weight_cutoff must lie in (0, 0.1]".into()));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let last = (self.n_samples - 1) as f64;
        (0..self.n_samples).map(|k| self.t_max * k as f64 / last).collect()
    }
}

/// One block of a block-diagonal Hamiltonian with its eigenbasis.
pub struct Sector {
    indices: Vec<usize>,
    energies: Vec<f64>,
    vectors: CMatrix,
}

/// Time-evolution operator for a fixed Hamiltonian.
pub enum Propagator<'h> {
    /// Eigendecomposition of each block of a block-diagonal Hamiltonian.
    Dense(Vec<Sector>),
    Ode { hamiltonian: &'h Hamiltonian, tolerance: f64 },
}

impl<'h> Propagator<'h> {
    pub fn new(h: &'h Hamiltonian, method: Method, tolerance: f64) -> Self {
        let dense = match method {
            Method::DensePropagator => true,
            Method::AdaptiveOde => false,
            Method::Auto => h.dim() <= DENSE_LIMIT,
        };
        if !dense {
            return Propagator::Ode { hamiltonian: h, tolerance };
        }
        let mut blocks = excitation_sectors(h.basis());
        blocks.retain(|b| !b.is_empty());
        if h.off_block_max(&blocks) != 0.0 {
            blocks = vec![(0..h.dim()).collect()];
        }
        let sectors = blocks
            .into_iter()
            .map(|indices| {
                let eig = SymmetricEigen::new(h.block(&indices));
                Sector { energies: eig.eigenvalues.iter().cloned().collect(), vectors: eig.eigenvectors, indices }
            })
            .collect();
        Propagator::Dense(sectors)
    }

    /// States at each requested time, which must be ascending and start at >= 0.
    pub fn evolve(&self, psi0: &CVector, times: &[f64]) -> Result<Vec<CVector>> {
        match self {
            Propagator::Dense(sectors) => Ok(times.iter().map(|&t| apply_dense(sectors, psi0, t)).collect()),
            Propagator::Ode { hamiltonian, tolerance } => integrate(hamiltonian, psi0, times, *tolerance),
        }
    }
}

fn apply_dense(sectors: &[Sector], psi0: &CVector, t: f64) -> CVector {
    let mut out = CVector::zeros(psi0.len());
    for s in sectors {
        let local = CVector::from_iterator(s.indices.len(), s.indices.iter().map(|&i| psi0[i]));
        if local.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        let mut coeff = s.vectors.ad_mul(&local);
        for (c, &e) in coeff.iter_mut().zip(&s.energies) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let evolved = &s.vectors * coeff;
        for (k, &i) in s.indices.iter().enumerate() {
            out[i] = evolved[k];
        }
    }
    out
}

// Dormand-Prince 5(4) tableau. The Hamiltonian is time independent, so the
// stage nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

const MAX_STEPS: usize = 10_000_000;

fn rhs(h: &Hamiltonian, psi: &CVector) -> CVector {
    h.apply(psi) * C64::new(0.0, -1.0)
}

fn integrate(h: &Hamiltonian, psi0: &CVector, times: &[f64], tolerance: f64) -> Result<Vec<CVector>> {
    // local error target well below the allowed global norm drift
    let tol = (tolerance * 1e-3).max(1e-14);
    let scale = h.rows().iter().flat_map(|r| r.iter().map(|(_, v)| v.norm())).fold(1.0, f64::max);
    let mut h_step = 0.1 / scale;
    let mut t = 0.0;
    let mut y = psi0.clone();
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0usize;
    let mut k1 = rhs(h, &y);
    for &target in times {
        if target < t {
            return Err(Error::InvalidArgument("sample times must be ascending".into()));
        }
        while t < target {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Convergence(format!("step budget exhausted at t = {t}")));
            }
            let last = t + h_step >= target;
            let dt = if last { target - t } else { h_step };
            let mut k: Vec<CVector> = Vec::with_capacity(7);
            k.push(k1.clone());
            for s in 1..7 {
                let mut stage = y.clone();
                for (r, kr) in k.iter().enumerate() {
                    if A[s][r] != 0.0 {
                        stage.axpy(C64::new(dt * A[s][r], 0.0), kr, C64::new(1.0, 0.0));
                    }
                }
                k.push(rhs(h, &stage));
            }
            // 7th stage is evaluated at the 5th-order solution (FSAL)
            let mut y_new = y.clone();
            for (r, kr) in k.iter().take(6).enumerate() {
                if A[6][r] != 0.0 {
                    y_new.axpy(C64::new(dt * A[6][r], 0.0), kr, C64::new(1.0, 0.0));
                }
            }
            let mut err = CVector::zeros(y.len());
            for (r, kr) in k.iter().enumerate() {
                if E[r] != 0.0 {
                    err.axpy(C64::new(dt * E[r], 0.0), kr, C64::new(1.0, 0.0));
                }
            }
            let err_norm = err
                .iter()
                .zip(y.iter().zip(y_new.iter()))
                .map(|(e, (a, b))| {
                    let sc = tol + tol * a.norm().max(b.norm());
                    (e.norm() / sc).powi(2)
                })
                .sum::<f64>()
                .sqrt()
                / (y.len() as f64).sqrt();
            if !err_norm.is_finite() {
                return Err(Error::Convergence(format!("non-finite error estimate at t = {t}")));
            }
            if err_norm <= 1.0 {
                t = if last { target } else { t + dt };
                y = y_new;
                k1 = k.swap_remove(6);
            }
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            if !last || err_norm > 1.0 {
                h_step = dt * factor;
            }
            if h_step < 1e-14 * target.max(1.0) {
                return Err(Error::Convergence(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// `psi(t_k) = exp(-i H t_k) psi0` at the sample times of `cfg`.
pub fn evolve(psi0: &KetVector, h: &Hamiltonian, cfg: &EvolutionConfig) -> Result<Vec<KetVector>> {
    cfg.validate()?;
    if psi0.basis() != h.basis() {
        return Err(Error::DimensionMismatch("initial state and Hamiltonian use different bases".into()));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("initial state norm {} is not 1", psi0.norm())));
    }
    let prop = Propagator::new(h, cfg.method, cfg.tolerance);
    let states = prop.evolve(psi0.amplitudes(), &cfg.times())?;
    states
        .into_iter()
        .map(|amps| {
            let drift = (amps.norm() - 1.0).abs();
            if drift > cfg.tolerance {
                return Err(Error::Convergence(format!("norm drift {drift:.3e} exceeds tolerance")));
            }
            KetVector::new(amps, h.basis().clone())
        })
        .collect()
}
