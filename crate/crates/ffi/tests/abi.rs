use std::ffi::CStr;
use std::ptr;

use decolab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe { decolab_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn flat(density: f64, coupling: f64) -> *mut DecolabModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { decolab_model_flat(density, coupling, 0.5, 1.5, &mut m) }, DecolabStatus::Ok);
    m
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(decolab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn timescales_match_library() {
    let m = flat(2.0, 0.01);
    let mut out = DecolabTimescales::default();
    let s = unsafe { decolab_timescales(m, 1.0, 2.0, 1.5, 0.0, 0.0, 100.0, &mut out) };
    assert_eq!(s, DecolabStatus::Ok);
    let rate = 2.0 * 1e-4;
    assert!((out.rate - rate).abs() < 1e-18);
    assert!((out.tau_dis - 1.0 / rate).abs() < 1e-8);
    let n = 1.0 / (2f64.exp() - 1.0);
    assert!((out.n_bar - n).abs() < 1e-15);
    assert!((out.tau_th - 1.5 / (n * rate)).abs() / out.tau_th < 1e-12);
    assert_eq!(out.identities_hold, 1);
    unsafe { decolab_model_free(m) };
}

#[test]
fn zero_temperature_thermal_time_is_infinite() {
    let m = flat(1.0, 0.1);
    let mut out = DecolabTimescales::default();
    let s = unsafe { decolab_timescales(m, 1.0, f64::INFINITY, 2.0, 0.0, 0.0, 100.0, &mut out) };
    assert_eq!(s, DecolabStatus::Ok);
    assert!(out.tau_th.is_infinite());
    unsafe { decolab_model_free(m) };
}

#[test]
fn invalid_model_reports_status_and_message() {
    let mut m = ptr::null_mut();
    let s = unsafe { decolab_model_flat(1.0, 0.1, 2.0, 1.0, &mut m) };
    assert_ne!(s, DecolabStatus::Ok);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(decolab_status_exit_code(s), 2);
}

#[test]
fn degenerate_model_maps_to_exit_code_4() {
    let m = flat(1.0, 0.1);
    let mut out = DecolabTimescales::default();
    // w = 3 lies outside the band, so the rate vanishes
    let s = unsafe { decolab_timescales(m, 3.0, 1.0, 1.0, 0.0, 0.0, 100.0, &mut out) };
    assert_eq!(s, DecolabStatus::DegenerateModel);
    assert_eq!(decolab_status_exit_code(s), 4);
    assert!(last_error().contains("degenerate"));
    unsafe { decolab_model_free(m) };
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = DecolabTimescales::default();
    let s = unsafe { decolab_timescales(ptr::null(), 1.0, 1.0, 1.0, 0.0, 0.0, 100.0, &mut out) };
    assert_eq!(s, DecolabStatus::NullPointer);
    assert_eq!(decolab_status_exit_code(s), 2);
    unsafe {
        decolab_model_free(ptr::null_mut());
        decolab_bath_free(ptr::null_mut());
        decolab_trajectory_free(ptr::null_mut());
        assert_eq!(decolab_trajectory_len(ptr::null()), 0);
    }
}

#[test]
fn cutoff_betas_buffer_protocol() {
    let m = flat(1.0, 0.05);
    let mut count = 0usize;
    // large margin forces a hot-side failure, so at least one crossing exists
    let s = unsafe { decolab_cutoff_betas(m, 1.0, 2.0, 0.0, 0.0, 1e4, ptr::null_mut(), 0, &mut count) };
    match s {
        DecolabStatus::BufferTooSmall => {
            assert!(count > 0);
            let mut betas = vec![0.0; count];
            let s = unsafe { decolab_cutoff_betas(m, 1.0, 2.0, 0.0, 0.0, 1e4, betas.as_mut_ptr(), count, &mut count) };
            assert_eq!(s, DecolabStatus::Ok);
            assert!(betas.windows(2).all(|w| w[0] < w[1]));
            assert!(betas.iter().all(|b| b.is_finite() && *b > 0.0));
        }
        DecolabStatus::NoCrossing => assert_eq!(decolab_status_exit_code(s), 0),
        other => panic!("unexpected status {other:?}: {}", last_error()),
    }
    unsafe { decolab_model_free(m) };
}

#[test]
fn single_mode_rabi_through_the_abi() {
    let mut bath = ptr::null_mut();
    unsafe {
        assert_eq!(decolab_bath_new(&mut bath), DecolabStatus::Ok);
        assert_eq!(decolab_bath_add_mode(bath, 1.0, 0.1, 2), DecolabStatus::Ok);
        assert_eq!(decolab_bath_add_mode(bath, -1.0, 0.1, 2), DecolabStatus::InvalidArgument);
    }
    let mut evo = decolab_evolution_default();
    evo.t_max = 10.0;
    evo.samples = 11;
    let mut traj = ptr::null_mut();
    let s = unsafe { decolab_simulate(bath, DecolabFieldKind::Fock, 1.0, 0.0, 2, 1.0, f64::INFINITY, &evo, &mut traj) };
    assert_eq!(s, DecolabStatus::Ok, "{}", last_error());
    let n = unsafe { decolab_trajectory_len(traj) };
    assert_eq!(n, 11);
    let mut t = vec![0.0; n];
    let mut e = vec![0.0; n];
    unsafe {
        assert_eq!(decolab_trajectory_column(traj, DecolabColumn::Time, t.as_mut_ptr(), n), DecolabStatus::Ok);
        assert_eq!(decolab_trajectory_column(traj, DecolabColumn::Energy, e.as_mut_ptr(), n), DecolabStatus::Ok);
        assert_eq!(decolab_trajectory_column(traj, DecolabColumn::Energy, e.as_mut_ptr(), n - 1), DecolabStatus::BufferTooSmall);
    }
    for (ti, ei) in t.iter().zip(&e) {
        let oracle = (0.1 * ti).cos().powi(2);
        assert!((ei - oracle).abs() < 1e-9, "t = {ti}: {ei} vs {oracle}");
    }
    unsafe {
        decolab_trajectory_free(traj);
        decolab_bath_free(bath);
    }
}

#[test]
fn bad_fock_number_is_invalid_argument() {
    let mut bath = ptr::null_mut();
    unsafe { decolab_bath_new(&mut bath) };
    let evo = decolab_evolution_default();
    let mut traj = ptr::null_mut();
    let s = unsafe { decolab_simulate(bath, DecolabFieldKind::Fock, 1.5, 0.0, 4, 1.0, f64::INFINITY, &evo, &mut traj) };
    assert_eq!(s, DecolabStatus::InvalidArgument);
    assert!(traj.is_null());
    unsafe { decolab_bath_free(bath) };
}
