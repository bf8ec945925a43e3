//! Cross-module physics checks against independent oracles.

mod common;

use std::f64::consts::TAU;

use common::*;
use decolab::born::FieldMoments;
use decolab::cli::commands::order_point;
use decolab::cli::config::ScenarioConfig;
use decolab::dynamics::{simulate, BathMode, DiscreteBath, EvolutionConfig, FieldMode, Method};
use decolab::fit::{linear_fit, loglog_fit};
use decolab::fock::{beta_for_occupation, FieldStateSpec, FockSpace, C64};
use decolab::spectral::{
    ratio_report, tau_decoherence, tau_dissipation, tau_reservoir_decoherence, tau_thermal, Horizon, SpectralModel,
};
use proptest::prelude::*;

#[test]
fn short_time_energy_change_is_quadratic() {
    let bath = DiscreteBath::new(vec![
        BathMode { frequency: 0.7, coupling: 0.05, dim: 4 },
        BathMode { frequency: 1.4, coupling: 0.03, dim: 4 },
    ])
    .unwrap();
    let field = FieldMode { state: FieldStateSpec::EvenCat(C64::new(1.2, 0.0)), space: FockSpace::new(12).unwrap() };
    let cfg = EvolutionConfig { t_max: 0.05, n_samples: 11, method: Method::Auto, tolerance: 1e-10, weight_cutoff: 1e-3, max_members: 100 };
    let tr = simulate(&field, 1.0, &bath, f64::INFINITY, &cfg).unwrap();
    let de: Vec<f64> = tr.energy_change().iter().skip(1).map(|x| -x).collect();
    let fit = loglog_fit(&tr.times[1..], &de).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-2, "slope {}", fit.slope);
    // coefficient: sum_j g_j^2 <a^dag a>
    let m = tr.field_moments.mean_n0;
    let c = (0.05f64.powi(2) + 0.03f64.powi(2)) * m;
    assert!((fit.intercept.exp() / c - 1.0).abs() < 1e-2);
}

#[test]
fn halving_coupling_divides_residual_by_sixteen() {
    let cfg = scenario("cat-t0", &[]);
    let a = order_point(&cfg, 4e-3).unwrap();
    let b = order_point(&cfg, 2e-3).unwrap();
    for (x, y) in [(a.e1, b.e1), (a.delta1.unwrap(), b.delta1.unwrap()), (a.delta2, b.delta2)] {
        let r = x / y;
        assert!((14.0..18.0).contains(&r), "ratio {r}");
    }
}

#[test]
fn si_and_dimensionless_reports_agree() {
    let si = scenario("paris", &[]);
    let w = TAU * 51e9;
    let text = format!(
        r#"
[system]
omega = 1.0
[field]
kind = "moments"
mean_n = 9.5
[spectral]
kind = "flat"
tau_dis = {tau:?}
coupling = 1.0
band = [{lo:?}, {hi:?}]
[temperature]
n_bar = 0.05
"#,
        tau = 160e-6 * w,
        lo = 1.6e11 / w,
        hi = 4.8e11 / w
    );
    let dl = ScenarioConfig::parse(&text, &[], "paris-dimensionless").unwrap();
    let a = run("timescales", &si).report;
    let b = run("timescales", &dl).report;
    for key in ["tau_dis", "tau_th", "tau_dec", "tau_res_dec", "exact_sinc.tau_dis", "separability.period"] {
        let x: f64 = a.get(key).unwrap().parse().unwrap();
        let y: f64 = b.get(key).unwrap().parse::<f64>().unwrap() / w;
        assert!((x - y).abs() <= 1e-9 * x.abs(), "{key}: {x} vs {y}");
    }
    for key in ["ratio.th_over_dis", "ratio.dis_over_dec", "separability.ratio_period", "zero_t.ratio"] {
        let x: f64 = a.get(key).unwrap().parse().unwrap();
        let y: f64 = b.get(key).unwrap().parse().unwrap();
        assert!((x - y).abs() <= 1e-9 * x.abs(), "{key}: {x} vs {y}");
    }
}

#[test]
fn si_simulation_matches_dimensionless() {
    let w = TAU * 5e9;
    let si_text = format!(
        r#"
[system]
units = "si"
omega = {w:?}
[field]
kind = "fock"
n = 1
dim = 2
[bath]
frequencies = [{w1:?}]
couplings = {g:?}
dims = 2
[temperature]
zero = true
[evolution]
t_max = {t:?}
samples = 21
"#,
        w1 = 1.1 * w,
        g = 0.1 * w,
        t = 20.0 / w
    );
    let si = ScenarioConfig::parse(&si_text, &[], "si").unwrap();
    let dl = scenario("rabi", &["bath.frequencies=[1.1]", "evolution.t_max=20.0", "evolution.samples=21"]);
    let a = run("simulate", &si);
    let b = run("simulate", &dl);
    let (ea, eb) = (a.file("exact.csv").unwrap(), b.file("exact.csv").unwrap());
    for (x, y) in csv_column(ea, "t").iter().zip(csv_column(eb, "t")) {
        assert!((x * w - y).abs() <= 1e-9 * y.max(1.0));
    }
    for (x, y) in csv_column(ea, "E1").iter().zip(csv_column(eb, "E1")) {
        assert!((x / w - y).abs() <= 1e-9);
    }
}

#[test]
fn report_ratios_are_quotients_of_its_times() {
    let m = SpectralModel::Ohmic { scale: 3.0, cutoff: 2.0, coupling: 0.05 };
    for n in [0.0, 0.3, 4.0] {
        let mom = FieldMoments::new(1.7, C64::new(0.4, 0.2)).unwrap();
        let r = ratio_report(1.0, beta_for_occupation(n, 1.0), &m, &mom, 100.0).unwrap();
        assert!(r.tau_dis > 0.0 && r.tau_th > 0.0 && r.tau_dec > 0.0 && r.tau_res_dec > 0.0);
        assert!(r.ratios.dis_over_dec == r.tau_dis / r.tau_dec);
        assert!(r.ratios.th_over_dis == r.tau_th / r.tau_dis);
        assert!(r.ratios.th_over_dec == r.tau_th / r.tau_dec);
    }
}

#[test]
fn high_temperature_decoherence_rate_is_linear() {
    let model = SpectralModel::Flat { density: 2.0, coupling: 0.1, band_min: 0.1, band_max: 3.0 };
    let m = 1f64.tanh();
    let mom = FieldMoments::new(m, C64::new(0.0, 0.0)).unwrap();
    let ns: Vec<f64> = (0..10).map(|k| 10.0 + 10.0 * k as f64).collect();
    let rates: Vec<f64> =
        ns.iter().map(|&n| 1.0 / tau_decoherence(1.0, beta_for_occupation(n, 1.0), &model, &mom).unwrap()).collect();
    let fit = linear_fit(&ns, &rates).unwrap();
    let expect = 2.0 * 0.02 * (2.0 * m + 1.0);
    assert!((fit.slope / expect - 1.0).abs() < 1e-9);
    assert!(fit.r_squared > 1.0 - 1e-12);
}

#[test]
fn finite_horizon_thermal_time_approaches_markov() {
    let model = SpectralModel::Lorentzian { center: 1.0, width: 0.2, peak: 5.0, coupling: 0.05 };
    let mom = FieldMoments::new(2.0, C64::new(0.0, 0.0)).unwrap();
    let markov = tau_thermal(Horizon::Markovian, 1.0, 1.5, &model, &mom).unwrap();
    let finite = tau_thermal(Horizon::Finite(1e4), 1.0, 1.5, &model, &mom).unwrap();
    assert!((finite / markov - 1.0).abs() < 1e-6);
    let d = tau_dissipation(Horizon::Finite(1e4), 1.0, &model).unwrap();
    assert!((d * 5.0 * 0.0025 - 1.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_identities_hold(alpha in 0.1f64..4.0, n_bar in 1e-3f64..50.0, scale in 0.1f64..10.0) {
        let model = SpectralModel::Ohmic { scale, cutoff: 3.0, coupling: 0.02 };
        let m = alpha * alpha * (alpha * alpha).tanh();
        let mom = FieldMoments::new(m, C64::new(0.0, 0.0)).unwrap();
        let r = ratio_report(1.0, beta_for_occupation(n_bar, 1.0), &model, &mom, 100.0).unwrap();
        prop_assert!(r.identities_hold());
    }

    #[test]
    fn reservoir_time_scales_inverse_with_rate(s in 0.1f64..10.0, n_bar in 0.0f64..5.0) {
        let a = SpectralModel::Flat { density: 1.0, coupling: 0.1, band_min: 0.5, band_max: 1.5 };
        let b = SpectralModel::Flat { density: s, coupling: 0.1, band_min: 0.5, band_max: 1.5 };
        let mom = FieldMoments::new(2.0, C64::new(0.5, 0.0)).unwrap();
        let beta = beta_for_occupation(n_bar, 1.0);
        let ta = tau_reservoir_decoherence(1.0, beta, &a, &mom).unwrap();
        let tb = tau_reservoir_decoherence(1.0, beta, &b, &mom).unwrap();
        prop_assert!(ta.is_infinite() || (ta / tb / s - 1.0).abs() < 1e-12);
    }
}
