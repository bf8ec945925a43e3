//! C ABI over `decolab`.
//!
//! Every fallible call returns a [`DecolabStatus`]; on failure the message is
//! kept per thread and can be read with [`decolab_last_error`]. Objects are
//! opaque handles released by their matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use decolab::born::FieldMoments;
use decolab::dynamics::{simulate, BathMode, DiscreteBath, EvolutionConfig, FieldMode, Method, Trajectory};
use decolab::fock::{FieldStateSpec, FockSpace, C64};
use decolab::spectral::{cutoff_temperature, ratio_report, SpectralModel};
use decolab::Error;

/// Status codes. Values are stable across releases.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecolabStatus {
    Ok = 0,
    InvalidArgument = 1,
    Config = 2,
    Io = 3,
    Truncation = 4,
    DimensionMismatch = 5,
    Convergence = 6,
    EnsembleExplosion = 7,
    Validity = 8,
    Quadrature = 9,
    DegenerateModel = 10,
    DegenerateFit = 11,
    /// The cutoff scan found no temperature where separability flips.
    NoCrossing = 12,
    NullPointer = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&Error> for DecolabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Self::InvalidArgument,
            Error::Config(_) => Self::Config,
            Error::Io(_) => Self::Io,
            Error::Truncation(_) => Self::Truncation,
            Error::DimensionMismatch(_) => Self::DimensionMismatch,
            Error::Convergence(_) => Self::Convergence,
            Error::EnsembleExplosion { .. } => Self::EnsembleExplosion,
            Error::Validity(_) => Self::Validity,
            Error::Quadrature(_) => Self::Quadrature,
            Error::DegenerateModel(_) => Self::DegenerateModel,
            Error::DegenerateFit(_) => Self::DegenerateFit,
            Error::NoCrossing { .. } => Self::NoCrossing,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn fail(status: DecolabStatus, msg: &str) -> DecolabStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> Result<(), DecolabStatus>>(f: F) -> DecolabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DecolabStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(DecolabStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: decolab::Result<T>) -> Result<T, DecolabStatus> {
    r.map_err(|e| fail(DecolabStatus::from(&e), &e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), DecolabStatus> {
    if p.is_null() {
        Err(fail(DecolabStatus::NullPointer, &format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to fit). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn decolab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn decolab_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    V.as_ptr()
}

/// Process exit code the command-line runner uses for `status`.
#[no_mangle]
pub extern "C" fn decolab_status_exit_code(status: DecolabStatus) -> i32 {
    use DecolabStatus::*;
    match status {
        Ok | NoCrossing => 0,
        InvalidArgument | Config | Io | NullPointer | BufferTooSmall => 2,
        Truncation | DimensionMismatch | Convergence | EnsembleExplosion | Validity | Panic => 3,
        Quadrature | DegenerateModel | DegenerateFit => 4,
    }
}

/// Opaque spectral model.
pub struct DecolabModel(SpectralModel);

unsafe fn put_model(model: SpectralModel, out: *mut *mut DecolabModel) -> Result<(), DecolabStatus> {
    non_null(out, "out")?;
    lift(model.validate())?;
    *out = Box::into_raw(Box::new(DecolabModel(model)));
    Ok(())
}

/// Constant density and coupling on `[band_min, band_max]`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn decolab_model_flat(
    density: f64,
    coupling: f64,
    band_min: f64,
    band_max: f64,
    out: *mut *mut DecolabModel,
) -> DecolabStatus {
    guard(|| put_model(SpectralModel::Flat { density, coupling, band_min, band_max }, out))
}

/// Ohmic density with exponential cutoff.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn decolab_model_ohmic(scale: f64, cutoff: f64, coupling: f64, out: *mut *mut DecolabModel) -> DecolabStatus {
    guard(|| put_model(SpectralModel::Ohmic { scale, cutoff, coupling }, out))
}

/// Lorentzian density; `width` is the full width at half maximum.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn decolab_model_lorentzian(
    center: f64,
    width: f64,
    peak: f64,
    coupling: f64,
    out: *mut *mut DecolabModel,
) -> DecolabStatus {
    guard(|| put_model(SpectralModel::Lorentzian { center, width, peak, coupling }, out))
}

/// # Safety
/// `model` must be null or a handle from a `decolab_model_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn decolab_model_free(model: *mut DecolabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Markovian timescales for one temperature. `beta` may be `INFINITY`;
/// infinite timescales are reported as `INFINITY`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecolabTimescales {
    pub n_bar: f64,
    /// `g(w) gamma(w)^2`.
    pub rate: f64,
    pub tau_dis: f64,
    pub tau_th: f64,
    pub tau_dec: f64,
    pub tau_res_dec: f64,
    /// `tau_res_dec / (2 pi / w)`.
    pub ratio_period: f64,
    /// 1 if `tau_res_dec > margin * 2 pi / w`.
    pub separable: i32,
    /// 1 if every ratio identity holds to 1e-10.
    pub identities_hold: i32,
}

fn moments(mean_n0: f64, mean_a_re: f64, mean_a_im: f64) -> Result<FieldMoments, DecolabStatus> {
    lift(FieldMoments::new(mean_n0, C64::new(mean_a_re, mean_a_im)))
}

/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn decolab_timescales(
    model: *const DecolabModel,
    omega: f64,
    beta: f64,
    mean_n0: f64,
    mean_a_re: f64,
    mean_a_im: f64,
    margin: f64,
    out: *mut DecolabTimescales,
) -> DecolabStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let m = moments(mean_n0, mean_a_re, mean_a_im)?;
        let r = lift(ratio_report(omega, beta, &(*model).0, &m, margin))?;
        *out = DecolabTimescales {
            n_bar: r.n_bar,
            rate: r.rate,
            tau_dis: r.tau_dis,
            tau_th: r.tau_th,
            tau_dec: r.tau_dec,
            tau_res_dec: r.tau_res_dec,
            ratio_period: r.separability.ratio_period,
            separable: r.separability.passes as i32,
            identities_hold: r.identities_hold() as i32,
        };
        Ok(())
    })
}

/// Inverse temperatures where reservoir separability flips, ascending.
/// Writes up to `cap` values to `betas` and the total count to `count`.
/// Returns `BufferTooSmall` (with `count` set) when `cap` is short, and
/// `NoCrossing` when the verdict never flips.
///
/// # Safety
/// `model` must be a live handle, `betas` valid for `cap` writes (or null
/// with `cap == 0`), `count` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn decolab_cutoff_betas(
    model: *const DecolabModel,
    omega: f64,
    mean_n0: f64,
    mean_a_re: f64,
    mean_a_im: f64,
    margin: f64,
    betas: *mut f64,
    cap: usize,
    count: *mut usize,
) -> DecolabStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(count, "count")?;
        let m = moments(mean_n0, mean_a_re, mean_a_im)?;
        let r = lift(cutoff_temperature(omega, &(*model).0, &m, margin))?;
        *count = r.crossings.len();
        if r.crossings.len() > cap {
            return Err(fail(DecolabStatus::BufferTooSmall, &format!("need {} slots", r.crossings.len())));
        }
        if cap > 0 {
            non_null(betas, "betas")?;
        }
        for (k, c) in r.crossings.iter().enumerate() {
            *betas.add(k) = c.beta;
        }
        Ok(())
    })
}

/// Opaque, growable discrete bath.
pub struct DecolabBath(Vec<BathMode>);

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn decolab_bath_new(out: *mut *mut DecolabBath) -> DecolabStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = Box::into_raw(Box::new(DecolabBath(Vec::new())));
        Ok(())
    })
}

/// Append one oscillator with real coupling and Fock cutoff `dim`.
///
/// # Safety
/// `bath` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn decolab_bath_add_mode(bath: *mut DecolabBath, frequency: f64, coupling: f64, dim: usize) -> DecolabStatus {
    guard(|| {
        non_null(bath, "bath")?;
        let mode = BathMode { frequency, coupling, dim };
        lift(DiscreteBath::new(vec![mode]))?;
        (*bath).0.push(mode);
        Ok(())
    })
}

/// # Safety
/// `bath` must be null or a handle from [`decolab_bath_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn decolab_bath_free(bath: *mut DecolabBath) {
    if !bath.is_null() {
        drop(Box::from_raw(bath));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecolabFieldKind {
    /// `param_re` holds the photon number.
    Fock = 0,
    Coherent = 1,
    EvenCat = 2,
}

/// Exact-evolution settings. `method`: 0 auto, 1 dense, 2 adaptive ODE.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecolabEvolution {
    pub t_max: f64,
    pub samples: usize,
    pub method: i32,
    pub tolerance: f64,
    pub weight_cutoff: f64,
    pub max_members: usize,
}

/// Defaults matching the library.
#[no_mangle]
pub extern "C" fn decolab_evolution_default() -> DecolabEvolution {
    let d = EvolutionConfig::default();
    DecolabEvolution {
        t_max: d.t_max,
        samples: d.n_samples,
        method: 0,
        tolerance: d.tolerance,
        weight_cutoff: d.weight_cutoff,
        max_members: d.max_members,
    }
}

/// Opaque simulation result.
pub struct DecolabTrajectory(Trajectory);

fn field_spec(kind: DecolabFieldKind, re: f64, im: f64) -> Result<FieldStateSpec, DecolabStatus> {
    Ok(match kind {
        DecolabFieldKind::Fock => {
            if !(re >= 0.0 && re.fract() == 0.0 && re < 1e6) {
                return Err(fail(DecolabStatus::InvalidArgument, "Fock photon number must be a non-negative integer"));
            }
            FieldStateSpec::Fock(re as usize)
        }
        DecolabFieldKind::Coherent => FieldStateSpec::Coherent(C64::new(re, im)),
        DecolabFieldKind::EvenCat => FieldStateSpec::EvenCat(C64::new(re, im)),
    })
}

/// Exact evolution of the field plus `bath`. `beta` may be `INFINITY`.
///
/// # Safety
/// `bath` must be a live handle, `evolution` valid for one read and `out`
/// valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn decolab_simulate(
    bath: *const DecolabBath,
    field_kind: DecolabFieldKind,
    param_re: f64,
    param_im: f64,
    field_dim: usize,
    omega: f64,
    beta: f64,
    evolution: *const DecolabEvolution,
    out: *mut *mut DecolabTrajectory,
) -> DecolabStatus {
    guard(|| {
        non_null(bath, "bath")?;
        non_null(evolution, "evolution")?;
        non_null(out, "out")?;
        let e = &*evolution;
        let method = match e.method {
            0 => Method::Auto,
            1 => Method::DensePropagator,
            2 => Method::AdaptiveOde,
            m => return Err(fail(DecolabStatus::InvalidArgument, &format!("unknown method {m}"))),
        };
        let cfg = EvolutionConfig {
            t_max: e.t_max,
            n_samples: e.samples,
            method,
            tolerance: e.tolerance,
            weight_cutoff: e.weight_cutoff,
            max_members: e.max_members,
        };
        let field = FieldMode { state: field_spec(field_kind, param_re, param_im)?, space: lift(FockSpace::new(field_dim))? };
        let b = lift(DiscreteBath::new((*bath).0.clone()))?;
        let traj = lift(simulate(&field, omega, &b, beta, &cfg))?;
        *out = Box::into_raw(Box::new(DecolabTrajectory(traj)));
        Ok(())
    })
}

/// # Safety
/// `traj` must be null or a handle from [`decolab_simulate`], freed once.
#[no_mangle]
pub unsafe extern "C" fn decolab_trajectory_free(traj: *mut DecolabTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of time samples, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn decolab_trajectory_len(traj: *const DecolabTrajectory) -> usize {
    if traj.is_null() {
        0
    } else {
        (*traj).0.times.len()
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecolabColumn {
    Time = 0,
    /// Field energy `w <a^dag a>`.
    Energy = 1,
    /// Field linear entropy.
    Delta1 = 2,
    /// Reservoir linear entropy.
    Delta2 = 3,
    MeanARe = 4,
    MeanAIm = 5,
    Norm = 6,
    TotalExcitation = 7,
}

/// Copy one column into `buf`, which must hold `decolab_trajectory_len` values.
///
/// # Safety
/// `traj` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn decolab_trajectory_column(
    traj: *const DecolabTrajectory,
    column: DecolabColumn,
    buf: *mut f64,
    cap: usize,
) -> DecolabStatus {
    guard(|| {
        non_null(traj, "trajectory")?;
        non_null(buf, "buf")?;
        let t = &(*traj).0;
        let values: Vec<f64> = match column {
            DecolabColumn::Time => t.times.clone(),
            DecolabColumn::Energy => t.e1.clone(),
            DecolabColumn::Delta1 => t.delta1.clone(),
            DecolabColumn::Delta2 => t.delta2.clone(),
            DecolabColumn::MeanARe => t.mean_a.iter().map(|z| z.re).collect(),
            DecolabColumn::MeanAIm => t.mean_a.iter().map(|z| z.im).collect(),
            DecolabColumn::Norm => t.norm.clone(),
            DecolabColumn::TotalExcitation => t.total_excitation.clone(),
        };
        if values.len() > cap {
            return Err(fail(DecolabStatus::BufferTooSmall, &format!("need {} slots", values.len())));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}
