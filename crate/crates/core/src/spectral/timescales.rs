use std::f64::consts::TAU;

use super::model::SpectralModel;
use super::quadrature::{integrate, QuadSettings};
use crate::born::{sinc, FieldMoments};
use crate::error::{Error, Result};
use crate::fock::thermal_occupation;

/// Time horizon at which a windowed rate is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Markovian,
}

/// `t * int_{-1/2t}^{1/2t} g(w + x) F(w + x) dx`, the windowed rate for kernel `F`.
pub fn window_rate<F: Fn(f64) -> f64>(t: f64, omega: f64, model: &SpectralModel, kernel: F) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("window time must be positive, got {t}")));
    }
    let half = 0.5 / t;
    let lo = (omega - half).max(0.0);
    let hi = omega + half;
    let f = |w: f64| model.density(w) * kernel(w);
    let r = integrate(f, lo, hi, &model.breakpoints(), QuadSettings::default())?;
    Ok(t * r.value)
}

/// `g(w) gamma(w)^2`, failing when it vanishes or is not finite.
pub fn markov_rate(omega: f64, model: &SpectralModel) -> Result<f64> {
    let r = model.rate_density(omega);
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::DegenerateModel(format!("g(w) gamma(w)^2 = {r} at w = {omega}")));
    }
    Ok(r)
}

pub fn tau_dissipation(horizon: Horizon, omega: f64, model: &SpectralModel) -> Result<f64> {
    let rate = match horizon {
        Horizon::Markovian => markov_rate(omega, model)?,
        Horizon::Finite(t) => {
            let r = window_rate(t, omega, model, |w| model.coupling(w).powi(2))?;
            if !(r > 0.0) {
                return Err(Error::DegenerateModel(format!("windowed dissipation rate vanishes at t = {t}")));
            }
            r
        }
    };
    Ok(1.0 / rate)
}

/// Thermalisation time. Infinite at zero temperature.
pub fn tau_thermal(horizon: Horizon, omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments) -> Result<f64> {
    check_beta(beta)?;
    if !(moments.mean_n0 > 0.0) {
        return Err(Error::InvalidArgument("thermalisation time needs <a^dag a> > 0".into()));
    }
    markov_rate(omega, model)?;
    if beta.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let rate = match horizon {
        Horizon::Markovian => thermal_occupation(beta, omega) * model.rate_density(omega),
        Horizon::Finite(t) => window_rate(t, omega, model, |w| thermal_occupation(beta, w) * model.coupling(w).powi(2))?,
    };
    Ok(moments.mean_n0 / rate)
}

/// Field purity-loss time in the Markovian limit.
pub fn tau_decoherence(omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments) -> Result<f64> {
    check_beta(beta)?;
    let rate = markov_rate(omega, model)?;
    let n = thermal_occupation(beta, omega);
    let m = moments.mean_n0;
    let braces = n * (m + 1.0) + (n + 1.0) * m;
    Ok(1.0 / (2.0 * rate * braces))
}

/// Signed factor multiplying `g gamma^2` in the reservoir purity-loss rate.
pub fn reservoir_braces(n_bar: f64, moments: &FieldMoments) -> f64 {
    let m = moments.mean_n0;
    let th = 2.0 * n_bar + 1.0;
    (2.0 * m * th - 8.0 * n_bar * (2.0 * m + 1.0) - moments.mean_a0.norm_sqr()) / th
}

/// Reservoir purity-loss time; the absolute value of the signed rate.
pub fn tau_reservoir_decoherence(omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments) -> Result<f64> {
    check_beta(beta)?;
    let rate = markov_rate(omega, model)?;
    let n = thermal_occupation(beta, omega);
    Ok(1.0 / (rate * reservoir_braces(n, moments).abs()))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")))
    }
}

/// Closed-form `tau_th / tau_dis`.
pub fn closed_th_over_dis(n_bar: f64, mean_n0: f64) -> f64 {
    mean_n0 / n_bar
}

/// Closed-form `tau_dis / tau_dec`; reduces to `2 <a^dag a>` at zero temperature.
pub fn closed_dis_over_dec(n_bar: f64, mean_n0: f64) -> f64 {
    2.0 * ((n_bar + 1.0) * mean_n0 + n_bar * (mean_n0 + 1.0))
}

/// Closed-form `tau_th / tau_dec`.
pub fn closed_th_over_dec(n_bar: f64, mean_n0: f64) -> f64 {
    (2.0 * mean_n0 / n_bar) * ((n_bar + 1.0) * mean_n0 + n_bar * (mean_n0 + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    ZeroTemperature,
    FiniteTemperature,
    HighTemperature,
}

impl Regime {
    pub fn classify(beta: f64, omega: f64) -> Self {
        if beta.is_infinite() {
            Regime::ZeroTemperature
        } else if beta * omega < 0.1 {
            Regime::HighTemperature
        } else {
            Regime::FiniteTemperature
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::ZeroTemperature => "T=0",
            Regime::FiniteTemperature => "finite-T",
            Regime::HighTemperature => "high-T",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratios {
    pub th_over_dis: f64,
    pub dis_over_dec: f64,
    pub th_over_dec: f64,
}

/// One ratio evaluated from the timescales and from its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub quotient: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    pub holds: bool,
}

impl IdentityCheck {
    pub const TOLERANCE: f64 = 1e-10;

    fn new(name: &'static str, quotient: f64, closed_form: f64) -> Self {
        let (rel_error, holds) = if quotient.is_infinite() || closed_form.is_infinite() {
            let same = quotient == closed_form;
            (if same { 0.0 } else { f64::INFINITY }, same)
        } else {
            let e = (quotient - closed_form).abs() / closed_form.abs().max(f64::MIN_POSITIVE);
            (e, e <= Self::TOLERANCE)
        };
        Self { name, quotient, closed_form, rel_error, holds }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separability {
    pub tau: f64,
    pub margin: f64,
    /// `1 / w`.
    pub inverse_omega: f64,
    /// `2 pi / w`, the free-evolution period.
    pub period: f64,
    /// `tau * w`.
    pub ratio_inverse_omega: f64,
    /// `tau / (2 pi / w)`.
    pub ratio_period: f64,
    pub passes: bool,
}

pub const DEFAULT_MARGIN: f64 = 100.0;

/// Condition `tau >> 1/w`, judged against the period `2 pi / w` times `margin`.
pub fn separability_check(tau: f64, omega: f64, margin: f64) -> Separability {
    let period = TAU / omega;
    Separability {
        tau,
        margin,
        inverse_omega: 1.0 / omega,
        period,
        ratio_inverse_omega: tau * omega,
        ratio_period: tau / period,
        passes: tau > margin * period,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroTCondition {
    pub ratio: f64,
    pub margin: f64,
    pub passes: bool,
}

/// `g gamma^2 (2 <a^dag a> - |<a>|^2) / w`, required to be below `1/margin`.
pub fn zero_t_condition(omega: f64, model: &SpectralModel, moments: &FieldMoments, margin: f64) -> ZeroTCondition {
    let ratio = model.rate_density(omega) * (2.0 * moments.mean_n0 - moments.mean_a0.norm_sqr()) / omega;
    ZeroTCondition { ratio, margin, passes: ratio < 1.0 / margin }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimescaleReport {
    pub omega: f64,
    pub beta: f64,
    pub n_bar: f64,
    pub moments: FieldMoments,
    /// `g(w) gamma(w)^2`.
    pub rate: f64,
    pub tau_dis: f64,
    pub tau_th: f64,
    pub tau_dec: f64,
    pub tau_res_dec: f64,
    pub reservoir_braces: f64,
    /// Golden-rule rate `2 pi g gamma^2` from the full sinc^2 kernel.
    pub exact_sinc_rate: f64,
    pub ratios: Ratios,
    pub identities: Vec<IdentityCheck>,
    pub separability: Separability,
    pub zero_t: ZeroTCondition,
    pub regime: Regime,
}

impl TimescaleReport {
    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }
}

/// All Markovian timescales, their ratios and the validity checks.
pub fn ratio_report(omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments, margin: f64) -> Result<TimescaleReport> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument("field frequency must be positive".into()));
    }
    let rate = markov_rate(omega, model)?;
    let n_bar = thermal_occupation(beta, omega);
    let tau_dis = tau_dissipation(Horizon::Markovian, omega, model)?;
    let tau_th = tau_thermal(Horizon::Markovian, omega, beta, model, moments)?;
    let tau_dec = tau_decoherence(omega, beta, model, moments)?;
    let tau_res_dec = tau_reservoir_decoherence(omega, beta, model, moments)?;
    let ratios = Ratios { th_over_dis: tau_th / tau_dis, dis_over_dec: tau_dis / tau_dec, th_over_dec: tau_th / tau_dec };
    let m = moments.mean_n0;
    let mut identities = vec![
        IdentityCheck::new("th_over_dis", ratios.th_over_dis, closed_th_over_dis(n_bar, m)),
        IdentityCheck::new("dis_over_dec", ratios.dis_over_dec, closed_dis_over_dec(n_bar, m)),
        IdentityCheck::new("th_over_dec", ratios.th_over_dec, closed_th_over_dec(n_bar, m)),
    ];
    if n_bar == 0.0 {
        identities.push(IdentityCheck::new("dis_over_dec_zero_t", ratios.dis_over_dec, 2.0 * m));
    }
    Ok(TimescaleReport {
        omega,
        beta,
        n_bar,
        moments: *moments,
        rate,
        tau_dis,
        tau_th,
        tau_dec,
        tau_res_dec,
        reservoir_braces: reservoir_braces(n_bar, moments),
        exact_sinc_rate: TAU * rate,
        ratios,
        identities,
        separability: separability_check(tau_res_dec, omega, margin),
        zero_t: zero_t_condition(omega, model, moments, margin),
        regime: Regime::classify(beta, omega),
    })
}

/// Order-2 field energy change for a continuum bath with the full sinc^2 kernel:
/// `w int dW g gamma^2 (sin(D t)/D)^2 (n(W) - <a^dag a>)`, `D = (W - w)/2`.
pub fn continuum_energy_order2(t: f64, omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments) -> Result<f64> {
    check_beta(beta)?;
    let (lo, hi) = model.support();
    let m = moments.mean_n0;
    let f = |w: f64| {
        let d = 0.5 * (w - omega);
        let k = t * t * sinc(d * t).powi(2);
        model.rate_density(w) * k * (thermal_occupation(beta, w) - m)
    };
    let mut cuts = model.breakpoints();
    cuts.push(omega);
    let r = integrate(f, lo.max(1e-12), hi, &cuts, QuadSettings::default())?;
    Ok(omega * r.value)
}

/// The same energy change under the window convention, `w t (rate_th - <a^dag a> rate_dis)`.
pub fn window_energy_order2(t: f64, omega: f64, beta: f64, model: &SpectralModel, moments: &FieldMoments) -> Result<f64> {
    check_beta(beta)?;
    let heat = window_rate(t, omega, model, |w| thermal_occupation(beta, w) * model.coupling(w).powi(2))?;
    let loss = window_rate(t, omega, model, |w| model.coupling(w).powi(2))?;
    Ok(omega * t * (heat - moments.mean_n0 * loss))
}
