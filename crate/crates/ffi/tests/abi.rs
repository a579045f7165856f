use std::ffi::{c_char, CStr, CString};
use std::f64::consts::PI;
use std::process::Command;
use std::ptr;

use oscphase_ffi::*;

fn last_error() -> String {
    let len = osc_last_error_length();
    let mut buf = vec![0 as c_char; len + 1];
    assert_eq!(unsafe { osc_last_error_message(buf.as_mut_ptr(), buf.len()) }, OscStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn undriven_phase_matches_closed_form() {
    let mut rep = ptr::null_mut();
    let s = unsafe { osc_representation_new(1.0, 1.0, 1.0, 2.0, 0.0, 0.0, 0.0, &mut rep) };
    assert_eq!(s, OscStatus::Ok);
    let mut g = OscGeometricPhase::default();
    assert_eq!(unsafe { osc_geometric_phase(rep, 0, &mut g) }, OscStatus::Ok);
    assert!((g.closed_form - PI / 4.0).abs() < 1e-12);
    assert!((g.quadrature - g.closed_form).abs() < 1e-8);
    assert!((g.period - 2.0 * PI).abs() < 1e-12);

    let mut half = 0.0;
    assert_eq!(unsafe { osc_half_period_phase(rep, 0, &mut half) }, OscStatus::Ok);
    assert!((half - PI / 8.0).abs() < 1e-12);

    let mut dynamical = 0.0;
    assert_eq!(unsafe { osc_dynamical_phase(rep, 0, 2.0 * PI, &mut dynamical) }, OscStatus::Ok);
    assert!((dynamical + 1.25 * PI).abs() < 1e-8);
    unsafe { osc_representation_free(rep) };
}

#[test]
fn driven_stationary_basis_uses_drive_period() {
    let (re, im) = ([0.0, 0.5], [0.0, 0.0]);
    let mut rep = ptr::null_mut();
    let s = unsafe {
        osc_representation_new_driven(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0, re.as_ptr(), im.as_ptr(), 2, &mut rep)
    };
    assert_eq!(s, OscStatus::Ok);
    let mut g = OscGeometricPhase::default();
    assert_eq!(unsafe { osc_geometric_phase(rep, 0, &mut g) }, OscStatus::Ok);
    assert!((g.closed_form - 2.0 * PI / 9.0).abs() < 1e-12);
    assert!((g.period - PI).abs() < 1e-12);
    unsafe { osc_representation_free(rep) };
}

#[test]
fn incommensurate_drive_reports_undefined_phase() {
    let (re, im) = ([0.0, 0.5], [0.0, 0.0]);
    let mut rep = ptr::null_mut();
    let s = unsafe {
        osc_representation_new_driven(1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 2f64.sqrt(), re.as_ptr(), im.as_ptr(), 2, &mut rep)
    };
    assert_eq!(s, OscStatus::Ok);
    let mut g = OscGeometricPhase::default();
    assert_eq!(unsafe { osc_geometric_phase(rep, 0, &mut g) }, OscStatus::PhaseUndefined);
    assert!(last_error().contains("incommensurate"));
    unsafe { osc_representation_free(rep) };
}

#[test]
fn invalid_inputs_set_status_and_message() {
    let mut rep = ptr::null_mut();
    let s = unsafe { osc_representation_new(1.0, 1.0, 1.0, 1.0, PI / 2.0, 0.0, 0.0, &mut rep) };
    assert_eq!(s, OscStatus::InvalidParameter);
    assert!(rep.is_null());
    assert!(last_error().contains("degenerate"));

    let s = unsafe { osc_representation_new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, ptr::null_mut()) };
    assert_eq!(s, OscStatus::NullPointer);

    let mut g = OscGeometricPhase::default();
    assert_eq!(unsafe { osc_geometric_phase(ptr::null(), 0, &mut g) }, OscStatus::NullPointer);

    let mut tiny = [0 as c_char; 2];
    assert_eq!(unsafe { osc_last_error_message(tiny.as_mut_ptr(), tiny.len()) }, OscStatus::BufferTooSmall);
}

#[test]
fn success_clears_last_error() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { osc_mathieu_new(-1.0, 0.0, 1.0, 1.0, &mut m) }, OscStatus::InvalidParameter);
    assert!(osc_last_error_length() > 0);
    assert_eq!(unsafe { osc_mathieu_new(2.0, 0.01, 1.0, 1.0, &mut m) }, OscStatus::Ok);
    assert_eq!(osc_last_error_length(), 0);
    unsafe { osc_mathieu_free(m) };
}

#[test]
fn mathieu_handle_round_trip() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { osc_mathieu_new(2.0, 0.01, 1.0, 1.0, &mut m) }, OscStatus::Ok);
    let mut floquet = OscFloquet { trace: 0.0, det: 0.0, classification: OscStability::Marginal };
    assert_eq!(unsafe { osc_mathieu_stability(m, &mut floquet) }, OscStatus::Ok);
    assert_eq!(floquet.classification, OscStability::Stable);
    assert!((floquet.det - 1.0).abs() < 1e-8);

    let (mut pert, mut series, mut numeric) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { osc_mathieu_phase_perturbative(m, 0, &mut pert) }, OscStatus::Ok);
    assert_eq!(unsafe { osc_mathieu_phase_series(m, 0, &mut series) }, OscStatus::Ok);
    assert_eq!(unsafe { osc_mathieu_phase_numeric(m, 0, &mut numeric) }, OscStatus::Ok);
    // 8 pi (n + 1/2) eps^2 / (sqrt(a) (a - 1)^2) at n = 0, a = 2.
    let leading = 4.0 * PI * 0.01f64.powi(2) / 2f64.sqrt();
    assert!((pert - leading).abs() < 1e-15);
    assert!((numeric - series).abs() < 1e-6 * numeric);
    unsafe { osc_mathieu_free(m) };

    let mut unstable = ptr::null_mut();
    assert_eq!(unsafe { osc_mathieu_new(1.0, 0.05, 1.0, 1.0, &mut unstable) }, OscStatus::Ok);
    assert_eq!(unsafe { osc_mathieu_phase_numeric(unstable, 0, &mut numeric) }, OscStatus::NoPeriodicEnvelope);
    unsafe { osc_mathieu_free(unstable) };
}

#[test]
fn run_json_returns_records() {
    let config = CString::new(r#"{"mode": "sho", "C": 2.0}"#).unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { osc_run_json(config.as_ptr(), &mut out) }, OscStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { osc_string_free(out) };
    let records: serde_json::Value = serde_json::from_str(&text).unwrap();
    let g = records[0]["geometric"].as_f64().unwrap();
    assert!((g - PI / 4.0).abs() < 1e-11);

    let bad = CString::new(r#"{"mode": "mathieu"}"#).unwrap();
    assert_eq!(unsafe { osc_run_json(bad.as_ptr(), &mut out) }, OscStatus::InvalidParameter);
    assert!(last_error().contains("--a and --eps"));
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(osc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/oscphase.h");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ OscRepresentation *r = 0; OscGeometricPhase g; \
             return osc_geometric_phase(r, 0, &g) == OSC_STATUS_NULL_POINTER ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    let status = match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => s,
        Err(_) => {
            eprintln!("cc not available; skipping header check");
            return;
        }
    };
    assert!(status.success());
}
