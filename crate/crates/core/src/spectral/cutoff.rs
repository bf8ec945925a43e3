use std::f64::consts::TAU;

use super::model::SpectralModel;
use super::timescales::{markov_rate, reservoir_braces};
use crate::born::FieldMoments;
use crate::error::{Error, Result};
use crate::fock::thermal_occupation;

/// Scan range in units of `1/w`.
pub const BETA_OMEGA_RANGE: (f64, f64) = (1e-6, 1e6);
const POINTS_PER_DECADE: usize = 50;
const BISECTION_RTOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub beta: f64,
    pub n_bar: f64,
    /// True if the separability condition holds on the colder (larger beta) side.
    pub passes_colder: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutoffReport {
    pub margin: f64,
    /// Crossings ordered by increasing beta.
    pub crossings: Vec<Crossing>,
}

impl CutoffReport {
    /// The smallest-beta crossing, i.e. the hottest temperature where the verdict flips.
    pub fn beta_star(&self) -> f64 {
        self.crossings[0].beta
    }
}

/// `tau_2,dec(beta) - margin * 2 pi / w`; positive when separability holds.
fn excess(beta: f64, omega: f64, rate: f64, moments: &FieldMoments, threshold: f64) -> f64 {
    let b = reservoir_braces(thermal_occupation(beta, omega), moments).abs() * rate;
    let tau = if b == 0.0 { f64::INFINITY } else { 1.0 / b };
    tau - threshold
}

/// Inverse temperatures at which the reservoir separability condition flips.
///
/// Fails with [`Error::NoCrossing`] when the verdict is the same over the whole scan.
pub fn cutoff_temperature(omega: f64, model: &SpectralModel, moments: &FieldMoments, margin: f64) -> Result<CutoffReport> {
    if !(omega > 0.0) || !(margin >= 1.0) {
        return Err(Error::InvalidArgument(format!("need w > 0 and margin >= 1, got w = {omega}, margin = {margin}")));
    }
    let rate = markov_rate(omega, model)?;
    let threshold = margin * TAU / omega;
    let f = |beta: f64| excess(beta, omega, rate, moments, threshold);

    let (lo, hi) = (BETA_OMEGA_RANGE.0.log10(), BETA_OMEGA_RANGE.1.log10());
    let n = ((hi - lo) as usize) * POINTS_PER_DECADE;
    let grid: Vec<f64> = (0..=n).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / n as f64) / omega).collect();
    let values: Vec<f64> = grid.iter().map(|&b| f(b)).collect();

    let mut crossings = Vec::new();
    for k in 0..n {
        let (fa, fb) = (values[k], values[k + 1]);
        if (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let pos_a = fa > 0.0;
        while (b - a) > BISECTION_RTOL * a {
            let mid = (a * b).sqrt();
            if (f(mid) > 0.0) == pos_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        let beta = (a * b).sqrt();
        crossings.push(Crossing { beta, n_bar: thermal_occupation(beta, omega), passes_colder: fb > 0.0 });
    }
    if crossings.is_empty() {
        return Err(Error::NoCrossing { passes: values[0] > 0.0 });
    }
    Ok(CutoffReport { margin, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::C64;

    fn paris() -> (f64, SpectralModel, FieldMoments) {
        let omega = TAU * 51e3;
        let m = SpectralModel::Flat { density: 1.0 / 160.0, coupling: 1.0, band_min: 0.5 * omega, band_max: 1.5 * omega };
        (omega, m, FieldMoments::new(9.5, C64::new(0.0, 0.0)).unwrap())
    }

    #[test]
    fn paris_margin_100_is_uniform_pass() {
        let (w, m, mom) = paris();
        assert_eq!(cutoff_temperature(w, &m, &mom, 100.0), Err(Error::NoCrossing { passes: true }));
    }

    #[test]
    fn large_margin_gives_a_crossing() {
        let (w, m, mom) = paris();
        let r = cutoff_temperature(w, &m, &mom, 2e5).unwrap();
        let c = r.crossings[0];
        assert!(c.passes_colder);
        // brute-force check either side of the root
        let th = 2e5 * TAU / w;
        let rate = 1.0 / 160.0;
        assert!(excess(c.beta * (1.0 + 1e-5), w, rate, &mom, th) > 0.0);
        assert!(excess(c.beta * (1.0 - 1e-5), w, rate, &mom, th) < 0.0);
        assert!(r.beta_star() == c.beta);
        for pair in r.crossings.windows(2) {
            assert!(pair[0].beta < pair[1].beta);
        }
    }

    #[test]
    fn vacuum_is_uniform_pass() {
        let (w, m, _) = paris();
        // vacuum braces are -8n/(2n+1): tiny at low T, so only huge margins fail
        assert!(matches!(cutoff_temperature(w, &m, &FieldMoments::vacuum(), 100.0), Err(Error::NoCrossing { passes: true })));
    }

    #[test]
    fn huge_margin_fails_everywhere() {
        let (w, m, mom) = paris();
        assert_eq!(cutoff_temperature(w, &m, &mom, 1e12), Err(Error::NoCrossing { passes: false }));
    }
}
