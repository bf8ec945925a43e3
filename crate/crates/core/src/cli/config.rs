//! Scenario files: TOML with `[system]`, `[field]`, `[bath]` or `[spectral]`,
//! `[temperature]`, `[evolution]`, `[convergence]` and `[timescales]` sections.
//!
//! With `units = "si"` frequencies are angular (rad/s), times are seconds and
//! temperatures may be given in kelvin. Internally everything is rescaled so
//! that the field frequency is 1.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::born::FieldMoments;
use crate::dynamics::{BathMode, DiscreteBath, EvolutionConfig, FieldMode, Method};
use crate::error::{Error, Result};
use crate::fock::{beta_for_occupation, FieldStateSpec, FockSpace, C64};
use crate::spectral::{SpectralModel, DEFAULT_MARGIN};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// Default coupling grid for order fits: five log-spaced points on [1e-3, 1e-2].
pub fn default_gamma_grid() -> Vec<f64> {
    (0..5).map(|k| 10f64.powf(-3.0 + k as f64 / 4.0)).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    system: RawSystem,
    field: RawField,
    bath: Option<RawBath>,
    spectral: Option<RawSpectral>,
    temperature: RawTemperature,
    #[serde(default)]
    evolution: RawEvolution,
    #[serde(default)]
    convergence: RawConvergence,
    #[serde(default)]
    timescales: RawTimescales,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(default = "default_units")]
    units: String,
    omega: Option<f64>,
    /// `omega / 2 pi`.
    frequency: Option<f64>,
}

fn default_units() -> String {
    "dimensionless".into()
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Real(f64),
    Pair([f64; 2]),
}

impl RawComplex {
    fn value(&self) -> C64 {
        match *self {
            RawComplex::Real(x) => C64::new(x, 0.0),
            RawComplex::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    kind: String,
    n: Option<usize>,
    alpha: Option<RawComplex>,
    dim: Option<usize>,
    mean_n: Option<f64>,
    mean_a: Option<RawComplex>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Copy> OneOrMany<T> {
    fn expand(&self, n: usize, what: &str) -> Result<Vec<T>> {
        match self {
            OneOrMany::One(x) => Ok(vec![*x; n]),
            OneOrMany::Many(v) if v.len() == n => Ok(v.clone()),
            OneOrMany::Many(v) => Err(Error::Config(format!("bath.{what} has {} entries, expected {n}", v.len()))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    frequencies: Vec<f64>,
    couplings: OneOrMany<f64>,
    dims: OneOrMany<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectral {
    kind: String,
    density: Option<f64>,
    tau_dis: Option<f64>,
    coupling: f64,
    band: Option<[f64; 2]>,
    scale: Option<f64>,
    cutoff: Option<f64>,
    center: Option<f64>,
    width: Option<f64>,
    peak: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemperature {
    beta: Option<f64>,
    n_bar: Option<f64>,
    kelvin: Option<f64>,
    zero: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvolution {
    t_max: Option<f64>,
    samples: Option<usize>,
    method: Option<String>,
    tolerance: Option<f64>,
    weight_cutoff: Option<f64>,
    max_members: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConvergence {
    gamma: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTimescales {
    margin: Option<f64>,
    horizon: Option<f64>,
    discretize: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    Dimensionless,
    Si,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldConfig {
    State(FieldMode),
    Moments(FieldMoments),
}

impl FieldConfig {
    pub fn moments(&self) -> Result<FieldMoments> {
        match self {
            FieldConfig::State(f) => FieldMoments::from_ket(&f.state.ket(f.space)?),
            FieldConfig::Moments(m) => Ok(*m),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BathConfig {
    Discrete(DiscreteBath),
    Spectral(SpectralModel),
}

/// Validated scenario in internal units.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub units: Units,
    /// Physical angular frequency equal to one internal unit (1 when dimensionless).
    pub scale: f64,
    pub omega: f64,
    pub field: FieldConfig,
    pub bath: BathConfig,
    pub beta: f64,
    pub evolution: EvolutionConfig,
    pub gamma_grid: Vec<f64>,
    pub margin: f64,
    pub horizon: Option<f64>,
    pub discretize: Option<usize>,
    /// SHA-256 of the canonical config text.
    pub hash: String,
}

impl ScenarioConfig {
    pub fn load(path: &std::path::Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(&text, overrides, &default_name)
    }

    pub fn parse(text: &str, overrides: &[String], default_name: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let canonical = toml::to_string(&table).map_err(|e| Error::Config(e.to_string()))?;
        let hash = Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        let raw: RawConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        build(raw, default_name, hash)
    }

    pub fn discrete_bath(&self) -> Result<&DiscreteBath> {
        match &self.bath {
            BathConfig::Discrete(b) => Ok(b),
            BathConfig::Spectral(_) => Err(Error::Config("this command needs a [bath] section".into())),
        }
    }

    pub fn spectral_model(&self) -> Result<&SpectralModel> {
        match &self.bath {
            BathConfig::Spectral(m) => Ok(m),
            BathConfig::Discrete(_) => Err(Error::Config("this command needs a [spectral] section".into())),
        }
    }

    pub fn field_mode(&self) -> Result<&FieldMode> {
        match &self.field {
            FieldConfig::State(f) => Ok(f),
            FieldConfig::Moments(_) => Err(Error::Config("this command needs a field state, not moments".into())),
        }
    }

    /// Internal time to reporting units.
    pub fn time_out(&self, t: f64) -> f64 {
        t / self.scale
    }

    /// Internal frequency (or rate, or energy over hbar) to reporting units.
    pub fn freq_out(&self, w: f64) -> f64 {
        w * self.scale
    }

    pub fn time_unit(&self) -> &'static str {
        match self.units {
            Units::Dimensionless => "1",
            Units::Si => "s",
        }
    }
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (path, value) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{spec}` is not key=value")))?;
    let value = value.trim();
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let keys: Vec<&str> = path.trim().split('.').collect();
    let (last, parents) = keys.split_last().expect("split yields at least one item");
    let mut cur = table;
    for k in parents {
        cur = cur
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override path `{path}`: `{k}` is not a section")))?;
    }
    cur.insert(last.to_string(), parsed);
    Ok(())
}

fn positive(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{what} must be positive and finite, got {x}")))
    }
}

fn build(raw: RawConfig, default_name: &str, hash: String) -> Result<ScenarioConfig> {
    let units = match raw.system.units.as_str() {
        "dimensionless" => Units::Dimensionless,
        "si" | "SI" => Units::Si,
        other => return Err(Error::Config(format!("unknown units `{other}`"))),
    };
    let omega_phys = match (raw.system.omega, raw.system.frequency) {
        (Some(w), None) => positive(w, "system.omega")?,
        (None, Some(f)) => positive(f, "system.frequency")? * std::f64::consts::TAU,
        _ => return Err(Error::Config("give exactly one of system.omega, system.frequency".into())),
    };
    let scale = if units == Units::Si { omega_phys } else { 1.0 };
    let omega = omega_phys / scale;
    let freq_in = |w: f64| w / scale;
    let time_in = |t: f64| t * scale;

    let field = build_field(&raw.field)?;
    let bath = match (&raw.bath, &raw.spectral) {
        (Some(b), None) => {
            let n = b.frequencies.len();
            let couplings = b.couplings.expand(n, "couplings")?;
            let dims = b.dims.expand(n, "dims")?;
            let modes = (0..n)
                .map(|j| BathMode { frequency: freq_in(b.frequencies[j]), coupling: freq_in(couplings[j]), dim: dims[j] })
                .collect();
            BathConfig::Discrete(DiscreteBath::new(modes).map_err(|e| Error::Config(e.to_string()))?)
        }
        (None, Some(s)) => BathConfig::Spectral(build_spectral(s, scale)?),
        _ => return Err(Error::Config("give exactly one of [bath], [spectral]".into())),
    };

    let t = &raw.temperature;
    let given = [t.beta.is_some(), t.n_bar.is_some(), t.kelvin.is_some(), t.zero.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::Config("give exactly one of temperature.beta, n_bar, kelvin, zero".into()));
    }
    let beta = if let Some(b) = t.beta {
        // beta is an inverse energy; in SI it is 1/(k_B T) in 1/J
        let b = positive(b, "temperature.beta")?;
        if units == Units::Si {
            b * HBAR * scale
        } else {
            b
        }
    } else if let Some(n) = t.n_bar {
        if !(n >= 0.0) {
            return Err(Error::Config(format!("temperature.n_bar must be >= 0, got {n}")));
        }
        beta_for_occupation(n, omega)
    } else if let Some(k) = t.kelvin {
        if units != Units::Si {
            return Err(Error::Config("temperature.kelvin needs units = \"si\"".into()));
        }
        HBAR * scale / (K_BOLTZMANN * positive(k, "temperature.kelvin")?)
    } else if t.zero == Some(true) {
        f64::INFINITY
    } else {
        return Err(Error::Config("temperature.zero must be true when given".into()));
    };

    let d = EvolutionConfig::default();
    let e = &raw.evolution;
    let method = match e.method.as_deref() {
        None | Some("auto") => Method::Auto,
        Some("dense") => Method::DensePropagator,
        Some("ode") => Method::AdaptiveOde,
        Some(other) => return Err(Error::Config(format!("unknown evolution.method `{other}`"))),
    };
    let evolution = EvolutionConfig {
        t_max: e.t_max.map(time_in).unwrap_or(d.t_max),
        n_samples: e.samples.unwrap_or(d.n_samples),
        method,
        tolerance: e.tolerance.unwrap_or(d.tolerance),
        weight_cutoff: e.weight_cutoff.unwrap_or(d.weight_cutoff),
        max_members: e.max_members.unwrap_or(d.max_members),
    };
    evolution.validate().map_err(|e| Error::Config(e.to_string()))?;

    let gamma_grid: Vec<f64> = match &raw.convergence.gamma {
        Some(g) => g.iter().map(|&x| freq_in(x)).collect(),
        None => default_gamma_grid().into_iter().map(|x| x * omega).collect(),
    };
    if gamma_grid.len() < 3 {
        return Err(Error::Config(format!("convergence.gamma needs at least 3 points, got {}", gamma_grid.len())));
    }
    if gamma_grid.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
        return Err(Error::Config("convergence.gamma entries must be finite and >= 0".into()));
    }
    let margin = raw.timescales.margin.unwrap_or(DEFAULT_MARGIN);
    if !(margin >= 1.0) {
        return Err(Error::Config(format!("timescales.margin must be >= 1, got {margin}")));
    }
    let horizon = raw.timescales.horizon.map(|h| positive(h, "timescales.horizon").map(time_in)).transpose()?;
    if raw.timescales.discretize.is_some() && horizon.is_none() {
        return Err(Error::Config("timescales.discretize needs timescales.horizon".into()));
    }

    Ok(ScenarioConfig {
        name: raw.name.unwrap_or_else(|| default_name.to_string()),
        units,
        scale,
        omega,
        field,
        bath,
        beta,
        evolution,
        gamma_grid,
        margin,
        horizon,
        discretize: raw.timescales.discretize,
        hash,
    })
}

fn build_field(f: &RawField) -> Result<FieldConfig> {
    let need_dim = || f.dim.ok_or_else(|| Error::Config(format!("field.dim is required for kind `{}`", f.kind)));
    let need_alpha = || f.alpha.as_ref().map(RawComplex::value).ok_or_else(|| Error::Config("field.alpha is required".into()));
    let state = match f.kind.as_str() {
        "fock" => FieldStateSpec::Fock(f.n.ok_or_else(|| Error::Config("field.n is required".into()))?),
        "coherent" => FieldStateSpec::Coherent(need_alpha()?),
        "cat" => FieldStateSpec::EvenCat(need_alpha()?),
        "moments" => {
            let mean_n = f.mean_n.ok_or_else(|| Error::Config("field.mean_n is required".into()))?;
            let mean_a = f.mean_a.as_ref().map(RawComplex::value).unwrap_or(C64::new(0.0, 0.0));
            return FieldMoments::new(mean_n, mean_a).map(FieldConfig::Moments).map_err(|e| Error::Config(e.to_string()));
        }
        other => return Err(Error::Config(format!("unknown field.kind `{other}`"))),
    };
    let space = FockSpace::new(need_dim()?).map_err(|e| Error::Config(e.to_string()))?;
    Ok(FieldConfig::State(FieldMode { state, space }))
}

fn build_spectral(s: &RawSpectral, scale: f64) -> Result<SpectralModel> {
    let req = |v: Option<f64>, what: &str| v.ok_or_else(|| Error::Config(format!("spectral.{what} is required for kind `{}`", s.kind)));
    // g carries 1/frequency, gamma a frequency
    let coupling = s.coupling / scale;
    let model = match s.kind.as_str() {
        "flat" => {
            let [lo, hi] = s.band.ok_or_else(|| Error::Config("spectral.band is required for kind `flat`".into()))?;
            let density = match (s.density, s.tau_dis) {
                (Some(g), None) => g,
                (None, Some(tau)) => 1.0 / (positive(tau, "spectral.tau_dis")? * s.coupling * s.coupling),
                _ => return Err(Error::Config("give exactly one of spectral.density, spectral.tau_dis".into())),
            };
            SpectralModel::Flat { density: density * scale, coupling, band_min: lo / scale, band_max: hi / scale }
        }
        "ohmic" => SpectralModel::Ohmic {
            scale: req(s.scale, "scale")? * scale * scale,
            cutoff: req(s.cutoff, "cutoff")? / scale,
            coupling,
        },
        "lorentzian" => SpectralModel::Lorentzian {
            center: req(s.center, "center")? / scale,
            width: req(s.width, "width")? / scale,
            peak: req(s.peak, "peak")? * scale,
            coupling,
        },
        other => return Err(Error::Config(format!("unknown spectral.kind `{other}`"))),
    };
    model.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAT: &str = r#"
[system]
omega = 1.0
[field]
kind = "cat"
alpha = 1.0
dim = 8
[bath]
frequencies = [0.8, 1.0, 1.2]
couplings = 0.01
dims = 4
[temperature]
zero = true
[evolution]
t_max = 3.0
samples = 31
"#;

    #[test]
    fn parses_cat() {
        let c = ScenarioConfig::parse(CAT, &[], "cat").unwrap();
        assert_eq!(c.name, "cat");
        assert!(c.beta.is_infinite());
        let b = c.discrete_bath().unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.modes()[2].coupling, 0.01);
        assert_eq!(c.evolution.n_samples, 31);
        assert_eq!(c.gamma_grid.len(), 5);
        assert!(c.spectral_model().is_err());
    }

    #[test]
    fn overrides_change_values_and_hash() {
        let a = ScenarioConfig::parse(CAT, &[], "cat").unwrap();
        let b = ScenarioConfig::parse(CAT, &["evolution.t_max=5".into(), "temperature.zero=false".into()], "cat");
        assert!(matches!(b, Err(Error::Config(_))));
        let c = ScenarioConfig::parse(CAT, &["evolution.t_max=5.0".into()], "cat").unwrap();
        assert_eq!(c.evolution.t_max, 5.0);
        assert_ne!(a.hash, c.hash);
        let d = ScenarioConfig::parse(CAT, &[], "other").unwrap();
        assert_eq!(a.hash, d.hash);
    }

    #[test]
    fn schema_errors() {
        let bad = [
            CAT.replace("[temperature]\nzero = true", "[temperature]\nzero = true\nbeta = 1.0"),
            CAT.replace("kind = \"cat\"", "kind = \"squeezed\""),
            CAT.replace("samples = 31", "samples = 31\nbogus = 1"),
            CAT.replace("couplings = 0.01", "couplings = [0.01, 0.02]"),
            "not toml [".to_string(),
        ];
        for text in bad {
            assert!(matches!(ScenarioConfig::parse(&text, &[], "x"), Err(Error::Config(_))), "{text}");
        }
        let one_point = ScenarioConfig::parse(CAT, &["convergence.gamma=[0.01]".into()], "x");
        assert!(matches!(one_point, Err(Error::Config(_))));
    }

    #[test]
    fn si_scaling() {
        let text = r#"
[system]
units = "si"
frequency = 51e9
[field]
kind = "moments"
mean_n = 9.5
[spectral]
kind = "flat"
tau_dis = 160e-6
coupling = 1.0
band = [1e11, 5e11]
[temperature]
n_bar = 0.05
"#;
        let c = ScenarioConfig::parse(text, &[], "paris").unwrap();
        assert_eq!(c.omega, 1.0);
        let m = c.spectral_model().unwrap();
        let rate_phys = c.freq_out(m.rate_density(c.omega));
        assert!((rate_phys * 160e-6 - 1.0).abs() < 1e-12);
        assert!((crate::fock::thermal_occupation(c.beta, c.omega) - 0.05).abs() < 1e-14);
    }
}
