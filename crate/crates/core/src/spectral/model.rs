use crate::error::{Error, Result};

/// Reservoir density of modes `g(W)` with a coupling profile `gamma(W)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralModel {
    /// Constant density `density` on `[band_min, band_max]`, zero outside.
    Flat { density: f64, coupling: f64, band_min: f64, band_max: f64 },
    /// `g(W) = scale * W * exp(-W / cutoff)`.
    Ohmic { scale: f64, cutoff: f64, coupling: f64 },
    /// Lorentzian line of full width `width` and height `peak` at `center`.
    Lorentzian { center: f64, width: f64, peak: f64, coupling: f64 },
}

impl SpectralModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SpectralModel::Flat { density, coupling, band_min, band_max } => {
                density >= 0.0 && coupling >= 0.0 && band_min >= 0.0 && band_max > band_min && band_max.is_finite()
            }
            SpectralModel::Ohmic { scale, cutoff, coupling } => scale >= 0.0 && cutoff > 0.0 && coupling >= 0.0,
            SpectralModel::Lorentzian { center, width, peak, coupling } => {
                center > 0.0 && width > 0.0 && peak >= 0.0 && coupling >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid spectral model parameters: {self:?}")))
        }
    }

    pub fn density(&self, freq: f64) -> f64 {
        if freq <= 0.0 {
            return 0.0;
        }
        match *self {
            SpectralModel::Flat { density, band_min, band_max, .. } => {
                if (band_min..=band_max).contains(&freq) {
                    density
                } else {
                    0.0
                }
            }
            SpectralModel::Ohmic { scale, cutoff, .. } => scale * freq * (-freq / cutoff).exp(),
            SpectralModel::Lorentzian { center, width, peak, .. } => {
                let hw = 0.5 * width;
                peak * hw * hw / ((freq - center).powi(2) + hw * hw)
            }
        }
    }

    pub fn coupling(&self, freq: f64) -> f64 {
        if freq <= 0.0 {
            return 0.0;
        }
        match *self {
            SpectralModel::Flat { coupling, .. }
            | SpectralModel::Ohmic { coupling, .. }
            | SpectralModel::Lorentzian { coupling, .. } => coupling,
        }
    }

    /// `g(W) gamma(W)^2`, the golden-rule rate density.
    pub fn rate_density(&self, freq: f64) -> f64 {
        self.density(freq) * self.coupling(freq).powi(2)
    }

    /// Points where the integrand has kinks or jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            SpectralModel::Flat { band_min, band_max, .. } => vec![band_min, band_max],
            SpectralModel::Ohmic { cutoff, .. } => vec![cutoff],
            SpectralModel::Lorentzian { center, .. } => vec![center],
        }
    }

    /// Frequency range holding all but a negligible part of the density.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            SpectralModel::Flat { band_min, band_max, .. } => (band_min, band_max),
            SpectralModel::Ohmic { cutoff, .. } => (0.0, 60.0 * cutoff),
            SpectralModel::Lorentzian { center, width, .. } => (0.0, center + 1e4 * width),
        }
    }
}
