//! C ABI for `oscphase`.
//!
//! Every function returns an [`OscStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be read with
//! [`osc_last_error_message`]. Handles are opaque and must be released with
//! the matching `_free` function. Strings returned by the library must be
//! released with [`osc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oscphase::cli::{run_point, run_sweep, write_records, Format, Mode, RunConfig};
use oscphase::mathieu::{
    mathieu_phase_numeric, mathieu_phase_perturbative, mathieu_phase_series, stability_probe, MathieuParams, Stability,
    MAX_ORDER,
};
use num_complex::Complex64;
use oscphase::phase::{dynamical_phase_quadrature, geometric_phase, half_period_phase};
use oscphase::verify::{verify, VerifyOptions};
use oscphase::{Error, ForceSpectrum, HomogeneousBasis, OscillatorParams, ParticularSolution, Representation};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    PhaseUndefined = 3,
    Resonance = 4,
    NoPeriodicEnvelope = 5,
    NumericalFailure = 6,
    InvalidUtf8 = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Floquet classification of the Mathieu oscillator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscStability {
    Stable = 0,
    Unstable = 1,
    Marginal = 2,
}

/// Geometric phase of an eigenstate by closed form and by quadrature.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OscGeometricPhase {
    pub period: f64,
    pub closed_form: f64,
    pub quadrature: f64,
}

/// Monodromy summary over one period `pi`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscFloquet {
    pub trace: f64,
    pub det: f64,
    pub classification: OscStability,
}

/// Eigenfunction set of a (possibly driven) harmonic oscillator.
pub struct OscRepresentation {
    inner: Representation,
}

/// Mathieu oscillator parameters.
pub struct OscMathieu {
    inner: MathieuParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> OscStatus {
    match err {
        Error::PhaseUndefined(_) => OscStatus::PhaseUndefined,
        Error::Resonance { .. } | Error::ResonantDenominator { .. } => OscStatus::Resonance,
        Error::NoPeriodicEnvelope(_) | Error::NonPositive { .. } => OscStatus::NoPeriodicEnvelope,
        Error::InvalidParameter(_)
        | Error::DegenerateBasis { .. }
        | Error::ReversedOrientation { .. }
        | Error::FictitiousSolutionPresent
        | Error::RepresentationMismatch => OscStatus::InvalidParameter,
        _ => OscStatus::NumericalFailure,
    }
}

struct Failure(OscStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OscStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error message and converts panics into [`OscStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OscStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OscStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            OscStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn rep_ref<'a>(rep: *const OscRepresentation) -> Result<&'a Representation, Failure> {
    rep.as_ref().map(|r| &r.inner).ok_or_else(|| null("representation"))
}

unsafe fn mathieu_ref<'a>(m: *const OscMathieu) -> Result<&'a MathieuParams, Failure> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("mathieu handle"))
}

/// Length in bytes of the last error message on this thread, excluding the
/// terminating nul; 0 when the last call succeeded.
#[no_mangle]
pub extern "C" fn osc_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message into `buf` (nul-terminated).
///
/// Returns `OSC_STATUS_BUFFER_TOO_SMALL` if `len` is not larger than
/// [`osc_last_error_length`].
///
/// # Safety
/// `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn osc_last_error_message(buf: *mut c_char, len: usize) -> OscStatus {
    if buf.is_null() {
        return OscStatus::NullPointer;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[0u8][..], |c| c.as_bytes_with_nul());
        if bytes.len() > len {
            return OscStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, bytes.len());
        OscStatus::Ok
    })
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn osc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Undriven oscillator with basis `(C, beta)` and fictitious
/// `x_p = D cos(wt + phi)`.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn osc_representation_new(
    mass: f64,
    freq: f64,
    hbar: f64,
    c: f64,
    beta: f64,
    d: f64,
    phi: f64,
    out: *mut *mut OscRepresentation,
) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let params = OscillatorParams::new(mass, freq, hbar)?;
        let inner = Representation::fictitious(params, c, beta, d, phi)?;
        write_out(out, Box::into_raw(Box::new(OscRepresentation { inner })))
    })
}

/// Driven oscillator. `re[k], im[k]` is the Fourier coefficient `f_k` of the
/// force at `k w_f`, for `k = 0..len`; `f_{-k}` is the conjugate.
///
/// # Safety
/// `re` and `im` must each point to `len` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn osc_representation_new_driven(
    mass: f64,
    freq: f64,
    hbar: f64,
    c: f64,
    beta: f64,
    d: f64,
    phi: f64,
    w_f: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut OscRepresentation,
) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if len > 0 && (re.is_null() || im.is_null()) {
            return Err(null("coefficient array"));
        }
        let coefficients: Vec<Complex64> = if len == 0 {
            Vec::new()
        } else {
            let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let params = OscillatorParams::new(mass, freq, hbar)?;
        let spectrum = ForceSpectrum::new(w_f, coefficients)?;
        let xp = ParticularSolution::new(params, Some(spectrum), d, phi)?;
        let inner = Representation::new(HomogeneousBasis::new(params, c, beta)?, xp)?;
        write_out(out, Box::into_raw(Box::new(OscRepresentation { inner })))
    })
}

/// Releases a representation. Null is ignored.
///
/// # Safety
/// `rep` must come from a `osc_representation_new*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn osc_representation_free(rep: *mut OscRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Geometric phase of eigenstate `n` over the representation's natural period.
///
/// # Safety
/// `rep` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_geometric_phase(
    rep: *const OscRepresentation,
    n: usize,
    out: *mut OscGeometricPhase,
) -> OscStatus {
    guard(|| {
        let rep = rep_ref(rep)?;
        let g = geometric_phase(&rep.eigenstate(n))?;
        write_out(out, OscGeometricPhase { period: g.choice.period, closed_form: g.closed_form, quadrature: g.quadrature })
    })
}

/// Dynamical phase `-(1/hbar) int_0^period <H> dt` of eigenstate `n`, by quadrature.
///
/// # Safety
/// `rep` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_dynamical_phase(
    rep: *const OscRepresentation,
    n: usize,
    period: f64,
    out: *mut f64,
) -> OscStatus {
    guard(|| {
        let rep = rep_ref(rep)?;
        let v = dynamical_phase_quadrature(&rep.eigenstate(n), period)?;
        write_out(out, v)
    })
}

/// Geometric phase over half an oscillator period; requires `D = 0`.
///
/// # Safety
/// `rep` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_half_period_phase(rep: *const OscRepresentation, n: usize, out: *mut f64) -> OscStatus {
    guard(|| {
        let rep = rep_ref(rep)?;
        write_out(out, half_period_phase(rep, n)?)
    })
}

/// Mathieu oscillator `x'' + (a + 16 eps cos 2t) x = 0`.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_new(a: f64, eps: f64, mass: f64, hbar: f64, out: *mut *mut OscMathieu) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let inner = MathieuParams::new(a, eps, mass, hbar)?;
        write_out(out, Box::into_raw(Box::new(OscMathieu { inner })))
    })
}

/// Releases a Mathieu handle. Null is ignored.
///
/// # Safety
/// `m` must come from [`osc_mathieu_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_free(m: *mut OscMathieu) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Monodromy trace, determinant and stability class.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_stability(m: *const OscMathieu, out: *mut OscFloquet) -> OscStatus {
    guard(|| {
        let data = stability_probe(mathieu_ref(m)?)?;
        let classification = match data.classification {
            Stability::Stable => OscStability::Stable,
            Stability::Unstable => OscStability::Unstable,
            Stability::Marginal => OscStability::Marginal,
        };
        write_out(out, OscFloquet { trace: data.trace, det: data.det, classification })
    })
}

/// Leading-order law `8 pi (n + 1/2) eps^2 / (sqrt(a) (a - 1)^2)`.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_phase_perturbative(m: *const OscMathieu, n: usize, out: *mut f64) -> OscStatus {
    guard(|| write_out(out, mathieu_phase_perturbative(mathieu_ref(m)?, n)?))
}

/// Phase of the third-order series envelope, integrated exactly.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_phase_series(m: *const OscMathieu, n: usize, out: *mut f64) -> OscStatus {
    guard(|| write_out(out, mathieu_phase_series(mathieu_ref(m)?, n, MAX_ORDER)?))
}

/// Phase along the numerically shot periodic envelope.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osc_mathieu_phase_numeric(m: *const OscMathieu, n: usize, out: *mut f64) -> OscStatus {
    guard(|| write_out(out, mathieu_phase_numeric(mathieu_ref(m)?, n)?))
}

fn run_json(config: &str) -> Result<String, Failure> {
    let invalid = |e: &dyn std::fmt::Display| Failure(OscStatus::InvalidParameter, e.to_string());
    let mut config: RunConfig = serde_json::from_str(config).map_err(|e| invalid(&e))?;
    config.format = Format::Json;
    config.out = None;
    config.validate().map_err(|e| invalid(&e))?;
    if config.spectrum.is_none() && config.force_spec.is_some() {
        config.spectrum = Some(config.load_spectrum().map_err(|e| invalid(&e))?);
        config.force_spec = None;
    }
    let mut buf = Vec::new();
    match config.mode {
        Mode::Verify => {
            let report = verify(config.suite, VerifyOptions { fault: config.fault });
            serde_json::to_writer(&mut buf, &report).map_err(|e| invalid(&e))?;
        }
        Mode::Sweep => {
            run_sweep(&config, &mut buf).map_err(|e| invalid(&e))?;
        }
        Mode::Sho | Mode::Driven | Mode::Mathieu => {
            let record = run_point(&config).map_err(|e| invalid(&e))?;
            write_records(&mut buf, &[record], Format::Json).map_err(|e| invalid(&e))?;
        }
    }
    String::from_utf8(buf).map_err(|e| Failure(OscStatus::InvalidUtf8, e.to_string()))
}

/// Runs a JSON run configuration (the same format as `oscphase run --config`)
/// and returns the JSON output in `*out`: an array of result records, or a
/// verification report.
///
/// Domain outcomes such as an undefined phase are reported inside the records
/// with `OSC_STATUS_OK`.
///
/// # Safety
/// `config` must be a nul-terminated string; `out` must be a valid pointer.
/// Release `*out` with [`osc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn osc_run_json(config: *const c_char, out: *mut *mut c_char) -> OscStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = CStr::from_ptr(config).to_str().map_err(|e| Failure(OscStatus::InvalidUtf8, e.to_string()))?;
        let json = run_json(text)?;
        let c = CString::new(json).map_err(|e| Failure(OscStatus::InvalidUtf8, e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn osc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
