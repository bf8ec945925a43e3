//! Second-order (Born) closed forms for a field mode coupled to a discrete
//! thermal bath.
//!
//! Every function here takes the bath occupations `n_j` directly; use
//! [`DiscreteBath::thermal_occupations`] for a bath at inverse temperature
//! `beta`, or the mean occupations of a simulated ensemble when comparing
//! against the exact dynamics.

use crate::dynamics::DiscreteBath;
use crate::error::{Error, Result};
use crate::fock::{annihilation_matrix, Expectation, FieldStateSpec, FockSpace, KetVector, C64};

/// Initial field moments entering the order-2 formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldMoments {
    /// `<a^dag a>` at t = 0.
    pub mean_n0: f64,
    /// `<a>` at t = 0.
    pub mean_a0: C64,
}

impl FieldMoments {
    pub fn new(mean_n0: f64, mean_a0: C64) -> Result<Self> {
        if !(mean_n0 >= 0.0) || !mean_n0.is_finite() {
            return Err(Error::InvalidArgument(format!("mean excitation {mean_n0} must be finite and >= 0")));
        }
        if mean_a0.norm_sqr() > mean_n0 * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::InvalidArgument(format!("|<a>|^2 = {} exceeds <a^dag a> = {mean_n0}", mean_a0.norm_sqr())));
        }
        Ok(Self { mean_n0, mean_a0 })
    }

    pub fn vacuum() -> Self {
        Self { mean_n0: 0.0, mean_a0: C64::new(0.0, 0.0) }
    }

    /// Analytic moments of an untruncated field state.
    pub fn from_spec(spec: &FieldStateSpec) -> Self {
        match *spec {
            FieldStateSpec::Fock(n) => Self { mean_n0: n as f64, mean_a0: C64::new(0.0, 0.0) },
            FieldStateSpec::Coherent(alpha) => Self { mean_n0: alpha.norm_sqr(), mean_a0: alpha },
            FieldStateSpec::EvenCat(alpha) => {
                let m = alpha.norm_sqr();
                Self { mean_n0: m * m.tanh(), mean_a0: C64::new(0.0, 0.0) }
            }
        }
    }

    /// Moments of a constructed single-mode ket.
    pub fn from_ket(ket: &KetVector) -> Result<Self> {
        if ket.basis().n_modes() != 1 {
            return Err(Error::DimensionMismatch("field moments need a single-mode ket".into()));
        }
        let space = FockSpace::new(ket.basis().total_dim())?;
        let a = annihilation_matrix(space);
        let n = a.adjoint() * &a;
        Ok(Self { mean_n0: ket.expectation(&n)?.re, mean_a0: ket.expectation(&a)? })
    }
}

/// `(W - w) / 2`.
pub fn detuning(frequency: f64, omega: f64) -> f64 {
    (frequency - omega) / 2.0
}

/// `sin(x) / x`, by series near the removable singularity.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Golden-rule window `(sin(D t) / D)^2 = t^2 sinc^2(D t)`.
pub fn window_weight(detuning: f64, t: f64) -> f64 {
    let s = t * sinc(detuning * t);
    s * s
}

/// First-order energy change. It vanishes identically for a thermal (Fock
/// diagonal) bath, which has `<b_j> = 0`.
pub fn energy_order1(_t: f64, _omega: f64, _bath: &DiscreteBath, _occupations: &[f64]) -> f64 {
    0.0
}

fn check_occupations(bath: &DiscreteBath, occupations: &[f64]) {
    assert_eq!(bath.len(), occupations.len(), "one occupation per bath mode");
}

/// `E_1^(2)(t) = w sum_j (g_j sin(D_j t) / D_j)^2 (n_j - <a^dag a>_0)`.
pub fn energy_order2(t: f64, omega: f64, bath: &DiscreteBath, occupations: &[f64], moments: &FieldMoments) -> f64 {
    check_occupations(bath, occupations);
    omega
        * bath
            .modes()
            .iter()
            .zip(occupations)
            .map(|(m, &n)| m.coupling.powi(2) * window_weight(detuning(m.frequency, omega), t) * (n - moments.mean_n0))
            .sum::<f64>()
}

/// Order-2 linear entropy of the field, for initial field states with `<a> = 0`.
pub fn field_purity_deficit_order2(
    t: f64,
    omega: f64,
    bath: &DiscreteBath,
    occupations: &[f64],
    moments: &FieldMoments,
) -> Result<f64> {
    check_occupations(bath, occupations);
    if moments.mean_a0.norm() > 1e-12 {
        return Err(Error::Validity(format!(
            "field purity formula holds for <a> = 0, got |<a>| = {}",
            moments.mean_a0.norm()
        )));
    }
    let m = moments.mean_n0;
    Ok(2.0
        * bath
            .modes()
            .iter()
            .zip(occupations)
            .map(|(mode, &n)| {
                mode.coupling.powi(2) * window_weight(detuning(mode.frequency, omega), t) * (n * (m + 1.0) + (n + 1.0) * m)
            })
            .sum::<f64>())
}

/// Normalised reservoir purity loss `1 - Tr rho_2(t)^2 / Tr rho_2(0)^2` at
/// order 2,
///
/// `t^2 sum_k g_k^2 sinc^2(D_k t) {4 (2<n> + 1)(th_k - 1) + 2<n> - |<a>|^2 th_k}`
///
/// with `th_k = tanh(beta W_k / 2) = 1 / (2 n_k + 1)`. The value is signed.
pub fn reservoir_purity_deficit_order2(
    t: f64,
    omega: f64,
    bath: &DiscreteBath,
    occupations: &[f64],
    moments: &FieldMoments,
) -> f64 {
    check_occupations(bath, occupations);
    let m = moments.mean_n0;
    let a2 = moments.mean_a0.norm_sqr();
    bath.modes()
        .iter()
        .zip(occupations)
        .map(|(mode, &n)| {
            let th = 1.0 / (2.0 * n + 1.0);
            let braces = 4.0 * (2.0 * m + 1.0) * (th - 1.0) + 2.0 * m - a2 * th;
            mode.coupling.powi(2) * window_weight(detuning(mode.frequency, omega), t) * braces
        })
        .sum()
}

/// Order-by-order series on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BornSeries {
    pub times: Vec<f64>,
    pub e1_order0: f64,
    pub e1_order1: Vec<f64>,
    pub e1_order2: Vec<f64>,
    /// `None` when the field has `<a> != 0`.
    pub delta1_order2: Option<Vec<f64>>,
    pub delta2_order2: Vec<f64>,
}

pub fn born_series(
    times: &[f64],
    omega: f64,
    bath: &DiscreteBath,
    occupations: &[f64],
    moments: &FieldMoments,
) -> BornSeries {
    let delta1 = times
        .iter()
        .map(|&t| field_purity_deficit_order2(t, omega, bath, occupations, moments))
        .collect::<Result<Vec<_>>>()
        .ok();
    BornSeries {
        times: times.to_vec(),
        e1_order0: omega * moments.mean_n0,
        e1_order1: times.iter().map(|&t| energy_order1(t, omega, bath, occupations)).collect(),
        e1_order2: times.iter().map(|&t| energy_order2(t, omega, bath, occupations, moments)).collect(),
        delta1_order2: delta1,
        delta2_order2: times.iter().map(|&t| reservoir_purity_deficit_order2(t, omega, bath, occupations, moments)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::BathMode;
    use proptest::prelude::*;

    fn bath(modes: &[(f64, f64)]) -> DiscreteBath {
        DiscreteBath::new(modes.iter().map(|&(frequency, coupling)| BathMode { frequency, coupling, dim: 4 }).collect())
            .unwrap()
    }

    #[test]
    fn detuning_cases() {
        assert_eq!(detuning(1.0, 1.0), 0.0);
        assert_eq!(detuning(3.0, 1.0), 1.0);
        assert!(detuning(0.5, 1.0) < 0.0);
    }

    #[test]
    fn sinc_series_matches_direct() {
        for x in [1e-5, 9e-5, 1.1e-4, 1e-3] {
            let direct = if x == 0.0 { 1.0 } else { (x as f64).sin() / x };
            assert!((sinc(x) - direct).abs() < 1e-15);
        }
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn resonant_zero_temperature_energy() {
        let (g, t) = (0.03, 2.5);
        let b = bath(&[(1.0, g)]);
        let e = energy_order2(t, 1.0, &b, &[0.0], &FieldMoments::new(1.0, C64::new(0.0, 0.0)).unwrap());
        assert!((e + g * g * t * t).abs() < 1e-15);
        assert_eq!(energy_order2(0.0, 1.0, &b, &[0.3], &FieldMoments::vacuum()), 0.0);
        assert_eq!(energy_order1(1.0, 1.0, &b, &[0.3]), 0.0);
        assert_eq!(energy_order1(0.0, 1.0, &b, &[0.3]), 0.0);
    }

    #[test]
    fn field_deficit_domain_and_cold_vacuum() {
        let b = bath(&[(1.1, 0.1), (0.9, 0.2)]);
        let coh = FieldMoments::from_spec(&FieldStateSpec::Coherent(C64::new(1.0, 0.0)));
        assert!(matches!(field_purity_deficit_order2(1.0, 1.0, &b, &[0.0, 0.0], &coh), Err(Error::Validity(_))));
        let v = field_purity_deficit_order2(3.0, 1.0, &b, &[0.0, 0.0], &FieldMoments::vacuum()).unwrap();
        assert_eq!(v, 0.0);
        let cat = FieldMoments::from_spec(&FieldStateSpec::EvenCat(C64::new(1.0, 0.0)));
        assert_eq!(field_purity_deficit_order2(0.0, 1.0, &b, &[0.1, 0.1], &cat).unwrap(), 0.0);
        let t = 1.7;
        let cold = field_purity_deficit_order2(t, 1.0, &b, &[0.0, 0.0], &cat).unwrap();
        let expected: f64 = 2.0
            * b.modes().iter().map(|m| m.coupling.powi(2) * window_weight(detuning(m.frequency, 1.0), t)).sum::<f64>()
            * cat.mean_n0;
        assert!((cold - expected).abs() < 1e-15);
    }

    #[test]
    fn reservoir_zero_temperature_braces() {
        let b = bath(&[(1.0, 0.05)]);
        let t = 2.0;
        let mom = FieldMoments::new(1.5, C64::new(0.6, 0.8)).unwrap();
        let v = reservoir_purity_deficit_order2(t, 1.0, &b, &[0.0], &mom);
        let expected = 0.05f64.powi(2) * t * t * (2.0 * 1.5 - 1.0);
        assert!((v - expected).abs() < 1e-15);
        for t in [0.0, 0.5, 4.0] {
            assert_eq!(reservoir_purity_deficit_order2(t, 1.0, &b, &[0.0], &FieldMoments::vacuum()), 0.0);
        }
    }

    #[test]
    fn reservoir_braces_match_tanh_form() {
        let beta = 1.3;
        let b = bath(&[(0.9, 0.1), (1.2, 0.05)]);
        let occ = b.thermal_occupations(beta);
        let mom = FieldMoments::new(2.0, C64::new(0.5, 0.0)).unwrap();
        let t = 1.1;
        let via_tanh: f64 = b
            .modes()
            .iter()
            .map(|m| {
                let th = (beta * m.frequency / 2.0).tanh();
                let x = detuning(m.frequency, 1.0) * t;
                let s = if x == 0.0 { 1.0 } else { x.sin() / x };
                t * t * m.coupling.powi(2) * s * s * (4.0 * 5.0 * (th - 1.0) + 4.0 - 0.25 * th)
            })
            .sum();
        let v = reservoir_purity_deficit_order2(t, 1.0, &b, &occ, &mom);
        assert!((v - via_tanh).abs() < 1e-14 * via_tanh.abs().max(1.0));
    }

    #[test]
    fn golden_rule_window() {
        for t in [0.5, 2.0, 10.0] {
            let resonant = window_weight(0.0, t);
            assert!((resonant - t * t).abs() < 1e-12 * t * t);
            let edge = window_weight(std::f64::consts::PI / (2.0 * t), t);
            assert!(edge <= (2.0 / std::f64::consts::PI).powi(2) * resonant * (1.0 + 1e-12));
            assert!(window_weight(std::f64::consts::PI / t, t) < 1e-20 * t * t);
            for k in 1..50 {
                let d = std::f64::consts::PI / (2.0 * t) * (1.0 + 0.37 * k as f64);
                assert!(window_weight(d, t) <= (2.0 / std::f64::consts::PI).powi(2) * resonant * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn series_first_order_vanishes() {
        let b = bath(&[(1.0, 0.1)]);
        let s = born_series(&[0.0, 1.0, 2.0], 1.0, &b, &[0.2], &FieldMoments::from_spec(&FieldStateSpec::Fock(2)));
        assert!(s.e1_order1.iter().all(|&e| e.abs() < 1e-12));
        assert_eq!(s.e1_order0, 2.0);
        assert!(s.delta1_order2.is_some());
        let s = born_series(&[1.0], 1.0, &b, &[0.2], &FieldMoments::from_spec(&FieldStateSpec::Coherent(C64::new(1.0, 0.0))));
        assert!(s.delta1_order2.is_none());
    }

    #[test]
    fn moments_validation() {
        assert!(FieldMoments::new(-1.0, C64::new(0.0, 0.0)).is_err());
        assert!(FieldMoments::new(0.5, C64::new(1.0, 0.0)).is_err());
        let ket = crate::fock::coherent_state(C64::new(0.7, 0.2), FockSpace::new(20).unwrap()).unwrap();
        let m = FieldMoments::from_ket(&ket).unwrap();
        assert!((m.mean_n0 - 0.53).abs() < 1e-10);
        assert!((m.mean_a0 - C64::new(0.7, 0.2)).norm() < 1e-10);
    }

    fn arb_setup() -> impl Strategy<Value = (Vec<(f64, f64, f64)>, f64, f64)> {
        (
            proptest::collection::vec((0.2f64..2.0, 0.0f64..0.3, 0.0f64..3.0), 1..6),
            0.0f64..4.0,
            0.0f64..5.0,
        )
    }

    proptest! {
        #[test]
        fn energy_antisymmetric_under_occupation_swap((modes, mean_n0, t) in arb_setup()) {
            // swapping every n_j with <a^dag a>_0 needs a common value for the field side
            let n_common = modes[0].2;
            let b = bath(&modes.iter().map(|&(f, g, _)| (f, g)).collect::<Vec<_>>());
            let occ = vec![mean_n0; b.len()];
            let fwd = energy_order2(t, 1.0, &b, &occ, &FieldMoments { mean_n0: n_common, mean_a0: C64::new(0.0, 0.0) });
            let occ_swapped = vec![n_common; b.len()];
            let rev = energy_order2(t, 1.0, &b, &occ_swapped, &FieldMoments { mean_n0, mean_a0: C64::new(0.0, 0.0) });
            prop_assert!((fwd + rev).abs() <= 1e-12 * fwd.abs().max(1e-300) + 1e-15);
        }

        #[test]
        fn order2_quantities_scale_quadratically((modes, mean_n0, t) in arb_setup(), s in 0.01f64..10.0) {
            let b = bath(&modes.iter().map(|&(f, g, _)| (f, g)).collect::<Vec<_>>());
            let occ: Vec<f64> = modes.iter().map(|m| m.2).collect();
            let mom = FieldMoments { mean_n0, mean_a0: C64::new(0.0, 0.0) };
            let bs = b.scaled(s).unwrap();
            let pairs = [
                (energy_order2(t, 1.0, &b, &occ, &mom), energy_order2(t, 1.0, &bs, &occ, &mom)),
                (field_purity_deficit_order2(t, 1.0, &b, &occ, &mom).unwrap(), field_purity_deficit_order2(t, 1.0, &bs, &occ, &mom).unwrap()),
                (reservoir_purity_deficit_order2(t, 1.0, &b, &occ, &mom), reservoir_purity_deficit_order2(t, 1.0, &bs, &occ, &mom)),
            ];
            for (base, scaled) in pairs {
                prop_assert!((scaled - s * s * base).abs() <= 1e-12 * (s * s * base).abs() + 1e-300);
            }
        }

        #[test]
        fn field_deficit_nonnegative_and_monotone((modes, mean_n0, t) in arb_setup(), bump in 0.0f64..1.0) {
            let b = bath(&modes.iter().map(|&(f, g, _)| (f, g)).collect::<Vec<_>>());
            let occ: Vec<f64> = modes.iter().map(|m| m.2).collect();
            let mom = FieldMoments { mean_n0, mean_a0: C64::new(0.0, 0.0) };
            let base = field_purity_deficit_order2(t, 1.0, &b, &occ, &mom).unwrap();
            prop_assert!(base >= 0.0);
            let more_n = FieldMoments { mean_n0: mean_n0 + bump, ..mom };
            prop_assert!(field_purity_deficit_order2(t, 1.0, &b, &occ, &more_n).unwrap() >= base);
            for j in 0..occ.len() {
                let mut o = occ.clone();
                o[j] += bump;
                prop_assert!(field_purity_deficit_order2(t, 1.0, &b, &o, &mom).unwrap() >= base);
            }
        }
    }
}
