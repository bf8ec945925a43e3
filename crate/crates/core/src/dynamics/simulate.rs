use super::bath::DiscreteBath;
use super::ensemble::thermal_ensemble;
use super::hamiltonian::build_hamiltonian;
use super::propagate::{EvolutionConfig, Propagator};
use crate::born::FieldMoments;
use crate::error::{Error, Result};
use crate::fock::{CMatrix, CVector, CompositeBasis, DensityMatrix, FieldStateSpec, FockSpace, Validity, C64};
use crate::parallel::map_indexed;

/// Field initial state together with its truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldMode {
    pub state: FieldStateSpec,
    pub space: FockSpace,
}

/// Ensemble-averaged observables on the sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Field energy `w <a^dag a>`.
    pub e1: Vec<f64>,
    /// Linear entropy of the field.
    pub delta1: Vec<f64>,
    /// Linear entropy of the reservoir.
    pub delta2: Vec<f64>,
    pub mean_a: Vec<C64>,
    pub norm: Vec<f64>,
    pub total_excitation: Vec<f64>,
    /// Worst per-member norm drift over the run.
    pub max_norm_drift: f64,
    /// Worst per-member drift of `<a^dag a + sum_j b_j^dag b_j>`.
    pub max_excitation_drift: f64,
    /// Worst-case invariant check over every reduced density produced.
    pub worst_validity: Validity,
    /// Moments of the constructed (truncated) field state.
    pub field_moments: FieldMoments,
    /// Mean occupation of each bath mode in the simulated initial state.
    pub bath_occupations: Vec<f64>,
    pub ensemble_size: usize,
}

impl Trajectory {
    pub fn energy_change(&self) -> Vec<f64> {
        self.e1.iter().map(|e| e - self.e1[0]).collect()
    }

    pub fn delta1_change(&self) -> Vec<f64> {
        self.delta1.iter().map(|d| d - self.delta1[0]).collect()
    }

    /// `1 - Tr rho_2(t)^2 / Tr rho_2(0)^2`.
    pub fn normalized_reservoir_deficit(&self) -> Vec<f64> {
        let p0 = 1.0 - self.delta2[0];
        self.delta2.iter().map(|d| 1.0 - (1.0 - d) / p0).collect()
    }
}

struct Sample {
    n_field: f64,
    mean_a: C64,
    norm: f64,
    n_total: f64,
    rho1: CMatrix,
    rho2: CMatrix,
}

/// Evolve every thermal-ensemble member and average the observables.
///
/// `beta = f64::INFINITY` starts the bath in its vacuum. Reduced densities
/// are averaged over members before purities are taken.
pub fn simulate(field: &FieldMode, omega: f64, bath: &DiscreteBath, beta: f64, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument("field frequency must be positive".into()));
    }
    if !bath.is_empty() && field.space.dim() < 2 {
        return Err(Error::InvalidArgument("a coupled field needs dim >= 2".into()));
    }
    let field_ket = field.state.ket(field.space)?;
    let field_moments = FieldMoments::from_ket(&field_ket)?;
    let basis = bath.basis_with_field(field.space.dim())?;
    let h = build_hamiltonian(omega, bath, &basis)?;
    let prop = Propagator::new(&h, cfg.method, cfg.tolerance);
    let ensemble = thermal_ensemble(beta, bath, cfg.weight_cutoff, cfg.max_members)?;
    let times = cfg.times();

    let member_states = map_indexed(ensemble.members.len(), |m| {
        let psi0 = product_state(&field_ket.amplitudes().clone(), &basis, &ensemble.members[m].occupations);
        prop.evolve(&psi0, &times)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let d0 = basis.dims()[0];
    let d_bath = basis.total_dim() / d0;
    let excitation: Vec<f64> = (0..basis.total_dim()).map(|i| basis.total_excitation(i) as f64).collect();
    let field_occ: Vec<f64> = (0..basis.total_dim()).map(|i| basis.occupation(i, 0) as f64).collect();

    let mut max_norm_drift: f64 = 0.0;
    let mut max_excitation_drift: f64 = 0.0;
    for states in &member_states {
        let n0 = weighted_sum(&states[0], &excitation);
        for psi in states {
            max_norm_drift = max_norm_drift.max((psi.norm() - 1.0).abs());
            max_excitation_drift = max_excitation_drift.max((weighted_sum(psi, &excitation) - n0).abs());
        }
    }
    if max_norm_drift > cfg.tolerance {
        return Err(Error::Convergence(format!("norm drift {max_norm_drift:.3e} exceeds tolerance {}", cfg.tolerance)));
    }

    let total_weight = ensemble.cumulative_weight;
    let samples = map_indexed(times.len(), |k| {
        let mut acc = Sample {
            n_field: 0.0,
            mean_a: C64::new(0.0, 0.0),
            norm: 0.0,
            n_total: 0.0,
            rho1: CMatrix::zeros(d0, d0),
            rho2: CMatrix::zeros(d_bath, d_bath),
        };
        for (member, states) in ensemble.members.iter().zip(&member_states) {
            let w = member.weight / total_weight;
            let psi = &states[k];
            let m = CMatrix::from_fn(d0, d_bath, |f, r| psi[f * d_bath + r]);
            acc.rho1 += (&m * m.adjoint()).scale(w);
            acc.rho2 += (m.transpose() * m.conjugate()).scale(w);
            acc.n_field += w * weighted_sum(psi, &field_occ);
            acc.n_total += w * weighted_sum(psi, &excitation);
            acc.norm += w * psi.norm();
            acc.mean_a += mean_annihilation(psi, d0, d_bath).scale(w);
        }
        acc
    });

    let field_basis = CompositeBasis::new(vec![d0])?;
    let bath_basis = CompositeBasis::new(if bath.is_empty() { vec![1] } else { bath.modes().iter().map(|m| m.dim).collect() })?;
    let mut worst = Validity { hermiticity_error: 0.0, trace_error: 0.0, min_eigenvalue: f64::INFINITY };
    let mut traj = Trajectory {
        times: times.clone(),
        e1: Vec::with_capacity(times.len()),
        delta1: Vec::with_capacity(times.len()),
        delta2: Vec::with_capacity(times.len()),
        mean_a: Vec::with_capacity(times.len()),
        norm: Vec::with_capacity(times.len()),
        total_excitation: Vec::with_capacity(times.len()),
        max_norm_drift,
        max_excitation_drift,
        worst_validity: worst,
        field_moments,
        bath_occupations: ensemble.mean_occupations(bath.len()),
        ensemble_size: ensemble.members.len(),
    };
    for s in samples {
        let rho1 = DensityMatrix::new(s.rho1, field_basis.clone())?;
        let rho2 = DensityMatrix::new(s.rho2, bath_basis.clone())?;
        for v in [rho1.validity(), rho2.validity()] {
            worst.hermiticity_error = worst.hermiticity_error.max(v.hermiticity_error);
            worst.trace_error = worst.trace_error.max(v.trace_error);
            worst.min_eigenvalue = worst.min_eigenvalue.min(v.min_eigenvalue);
        }
        traj.e1.push(omega * s.n_field);
        traj.delta1.push(rho1.linear_entropy());
        traj.delta2.push(rho2.linear_entropy());
        traj.mean_a.push(s.mean_a);
        traj.norm.push(s.norm);
        traj.total_excitation.push(s.n_total);
    }
    traj.worst_validity = worst;
    Ok(traj)
}

fn product_state(field: &CVector, basis: &CompositeBasis, bath_occupations: &[usize]) -> CVector {
    let mut psi = CVector::zeros(basis.total_dim());
    let mut occ = vec![0; basis.n_modes()];
    occ[1..].copy_from_slice(bath_occupations);
    for (n, amp) in field.iter().enumerate() {
        occ[0] = n;
        psi[basis.index(&occ)] = *amp;
    }
    psi
}

fn weighted_sum(psi: &CVector, diag: &[f64]) -> f64 {
    psi.iter().zip(diag).map(|(z, d)| z.norm_sqr() * d).sum()
}

fn mean_annihilation(psi: &CVector, d0: usize, d_bath: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for n in 1..d0 {
        let s = (n as f64).sqrt();
        for r in 0..d_bath {
            acc += psi[(n - 1) * d_bath + r].conj() * psi[n * d_bath + r] * s;
        }
    }
    acc
}
