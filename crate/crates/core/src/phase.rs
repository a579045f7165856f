//! Geometric and dynamical phases of oscillator eigenfunctions.
//!
//! The geometric phase of `psi_n` over a period `T` on which both `rho` and
//! `x_p` are periodic is
//!
//! ```text
//! gamma_n(T) = M int_0^T [ (n + 1/2) rho'^2 / Omega + x_p'^2 / hbar ] dt
//! ```
//!
//! Every closed form in this module is a special case of that integral.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{
    commensurability, sample_times, Commensurability, ForceSpectrum, HomogeneousBasis, OscillatorParams,
    ParticularSolution, DEFAULT_COMMENSURABILITY_TOL,
};
use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, integrate_1d_points, Tolerance};
use crate::wavefunction::{energy_expectation, EigenState, Representation, Superposition, WaveFunction};

/// Tolerance of the periodicity precondition in [`geometric_phase_integral`].
pub const PERIODICITY_TOL: f64 = 1e-8;

/// Reduces an angle to `(-pi, pi]`.
pub fn reduce_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    reduce_angle(a - b).abs()
}

/// What a phase was computed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSubject {
    Eigenstate { n: usize },
    Superposition { weights: Vec<f64> },
}

/// Geometric, dynamical and total phase over one evolution period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub geometric: f64,
    pub dynamical: f64,
    pub total: f64,
    pub period_used: f64,
    pub subject: PhaseSubject,
}

impl PhaseResult {
    pub fn new(geometric: f64, dynamical: f64, period_used: f64, subject: PhaseSubject) -> Self {
        Self { geometric, dynamical, total: geometric + dynamical, period_used, subject }
    }

    /// Total phase reduced to `(-pi, pi]`.
    pub fn total_reduced(&self) -> f64 {
        reduce_angle(self.total)
    }
}

fn quadrature_tol() -> Tolerance {
    Tolerance::quadrature()
}

/// Breakpoints splitting `[0, period]` into pieces no longer than half an
/// oscillator period, so the integrator sees every oscillation.
fn breakpoints(params: &OscillatorParams, period: f64) -> Vec<f64> {
    let pieces = ((2.0 * period / params.period()).ceil() as usize).clamp(1, 4096);
    (0..=pieces).map(|i| period * i as f64 / pieces as f64).collect()
}

fn envelope_is_periodic(basis: &HomogeneousBasis, period: f64, tol: f64) -> bool {
    let scale = 1.0 + basis.envelope_rho(0.0).abs() + basis.c.abs();
    sample_times(basis.params.period()).all(|t| {
        (basis.envelope_rho(t + period) - basis.envelope_rho(t)).abs() <= tol * scale
            && (basis.envelope_rho_dot(t + period) - basis.envelope_rho_dot(t)).abs() <= tol * scale * basis.params.freq
    })
}

/// Quadrature of the defining integral over `[0, tau_prime]`.
///
/// Fails with [`Error::PhaseUndefined`] unless both `rho` and `x_p` are
/// periodic with period `tau_prime`.
pub fn geometric_phase_integral(state: &EigenState<'_>, tau_prime: f64) -> Result<f64> {
    if !(tau_prime.is_finite() && tau_prime > 0.0) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {tau_prime}")));
    }
    let rep = state.rep;
    let basis = rep.basis();
    let xp = rep.particular();
    if !envelope_is_periodic(basis, tau_prime, PERIODICITY_TOL) {
        return Err(Error::PhaseUndefined(format!("rho(t) is not periodic with period {tau_prime}")));
    }
    if !xp.is_periodic(tau_prime, PERIODICITY_TOL) {
        return Err(Error::PhaseUndefined(format!("x_p(t) is not periodic with period {tau_prime}")));
    }
    let p = basis.params;
    let omega = basis.wronskian_omega();
    let weight = state.n as f64 + 0.5;
    let integrand = |t: f64| {
        let rho_dot = basis.envelope_rho_dot(t);
        let xp_dot = xp.x_dot(t);
        p.mass * (weight * rho_dot * rho_dot / omega + xp_dot * xp_dot / p.hbar)
    };
    Ok(integrate_1d_points(integrand, &breakpoints(&p, tau_prime), &quadrature_tol())?)
}

/// Width-pulsation phase over `tau_0` for `x_p = 0`:
/// `pi (n + 1/2) (1 - 2 C cos(beta) + C^2) / (C cos(beta))`.
pub fn closed_form_undriven(basis: &HomogeneousBasis, n: usize) -> f64 {
    let ccb = basis.c_cos_beta();
    PI * (n as f64 + 0.5) * (1.0 - 2.0 * ccb + basis.c * basis.c) / ccb
}

/// Geometric phase over the joint period `N tau_0` of a driven oscillator
/// with homogeneous admixture `D cos(wt + phi)`.
pub fn closed_form_full(basis: &HomogeneousBasis, xp: &ParticularSolution, comm: Commensurability, n: usize) -> Result<f64> {
    let params = basis.params;
    if params != *xp.params() {
        return Err(Error::InvalidParameter("basis and particular solution use different parameters".into()));
    }
    let big_n = comm.n_periods as f64;
    let p = comm.p as f64;
    let (m, w, hbar) = (params.mass, params.freq, params.hbar);

    let mut drive = 0.0;
    if let Some(spec) = xp.spectrum() {
        for k in 1..=spec.n_max() {
            let f2 = spec.coefficient(k as i64).norm_sqr();
            if f2 == 0.0 {
                continue;
            }
            let kf = k as f64;
            let denom = p * p * kf * kf - big_n * big_n;
            if denom.abs() <= 1e-12 * big_n * big_n {
                return Err(Error::Resonance { mode: k as i64 });
            }
            // Modes k and -k contribute equally.
            drive += 2.0 * kf * kf * f2 / (denom * denom);
        }
    }
    let width = big_n * closed_form_undriven(basis, n);
    let drive = 2.0 * PI * big_n.powi(3) * p * p / (hbar * m * w.powi(3)) * drive;
    let centre = PI * m * big_n * w * xp.d() * xp.d() / hbar;
    Ok(width + drive + centre)
}

/// Geometric phase over `tau_f` in the representation `C = 1, beta = 0, D = 0`:
/// `(2 pi w_f / (hbar M)) sum_n n^2 |f_n|^2 / (n^2 w_f^2 - w^2)^2`.
pub fn closed_form_special_rep(spectrum: &ForceSpectrum, params: &OscillatorParams) -> Result<f64> {
    let w_f = spectrum.w_f();
    let w = params.freq;
    let mut sum = 0.0;
    for k in 1..=spectrum.n_max() {
        let f2 = spectrum.coefficient(k as i64).norm_sqr();
        if f2 == 0.0 {
            continue;
        }
        let kf = k as f64;
        let denom = kf * kf * w_f * w_f - w * w;
        if denom.abs() <= 1e-12 * w * w {
            return Err(Error::Resonance { mode: k as i64 });
        }
        sum += 2.0 * kf * kf * f2 / (denom * denom);
    }
    Ok(2.0 * PI * w_f / (params.hbar * params.mass) * sum)
}

/// The representation `C = 1, beta = 0, D = 0` for a driven oscillator, in
/// which the geometric phase is defined over `tau_f` for any drive frequency.
pub fn special_representation(params: OscillatorParams, spectrum: ForceSpectrum) -> Result<Representation> {
    Representation::new(HomogeneousBasis::stationary(params), ParticularSolution::new(params, Some(spectrum), 0.0, 0.0)?)
}

/// Width-pulsation and centre-oscillation parts of the `tau_0` phase for an
/// undriven oscillator with fictitious `x_p = D cos(wt + phi)`.
pub fn decomposition(basis: &HomogeneousBasis, d: f64, params: &OscillatorParams, n: usize) -> (f64, f64) {
    let width = closed_form_undriven(basis, n);
    let centre = PI * params.mass * params.freq * d * d / params.hbar;
    (width, centre)
}

/// `-(i/2) int_0^{tau_0} alpha' / (alpha + alpha*) dt` with
/// `alpha = (Omega / rho^2 - i M rho' / rho) / (2 hbar)`, as a complex number.
///
/// The real part is the ground-state width phase; the imaginary part is
/// `int rho'/(2 rho) dt`, which vanishes over a period.
pub fn ge_child_integral_complex(basis: &HomogeneousBasis, params: &OscillatorParams) -> Result<Complex64> {
    let omega = basis.wronskian_omega();
    let (m, hbar) = (params.mass, params.hbar);
    let integrand = |t: f64| -> Complex64 {
        let rho = basis.envelope_rho(t);
        let rho_dot = basis.envelope_rho_dot(t);
        let rho_ddot = basis.envelope_rho_ddot(t);
        let alpha_sum = omega / (hbar * rho * rho);
        let alpha_dot = Complex64::new(
            -2.0 * omega * rho_dot / rho.powi(3),
            -m * (rho_ddot / rho - rho_dot * rho_dot / (rho * rho)),
        ) / (2.0 * hbar);
        Complex64::new(0.0, -0.5) * alpha_dot / alpha_sum
    };
    let points = breakpoints(params, params.period());
    let tol = quadrature_tol();
    let re = integrate_1d_points(|t| integrand(t).re, &points, &tol)?;
    let im = integrate_1d_points(|t| integrand(t).im, &points, &tol)?;
    Ok(Complex64::new(re, im))
}

/// Real part of [`ge_child_integral_complex`]; equals
/// `(1 - 2 C cos(beta) + C^2) pi / (2 C cos(beta))`.
pub fn ge_child_integral(basis: &HomogeneousBasis, params: &OscillatorParams) -> Result<f64> {
    Ok(ge_child_integral_complex(basis, params)?.re)
}

/// How [`dynamical_phase`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicalMethod {
    ClosedForm,
    Quadrature,
}

/// `-(1/hbar) int_0^T <H>(t) dt` by nested quadrature, for any wavefunction.
pub fn dynamical_phase_quadrature<W: WaveFunction + ?Sized>(wf: &W, period: f64) -> Result<f64> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
    }
    let params = *wf.representation().params();
    let failure = std::cell::Cell::new(None);
    let value = integrate_1d_points(
        |t| match energy_expectation(wf, t) {
            Ok(e) => e,
            Err(err) => {
                failure.set(Some(err));
                f64::NAN
            }
        },
        &breakpoints(&params, period),
        &Tolerance::quadrature().with_rel_tol(1e-9),
    );
    if let Some(err) = failure.take() {
        return Err(err);
    }
    Ok(-value? / params.hbar)
}

fn require_fictitious(rep: &Representation) -> Result<()> {
    if rep.particular().is_driven() {
        return Err(Error::InvalidParameter(
            "closed form requires an undriven oscillator with x_p = D cos(wt + phi)".into(),
        ));
    }
    Ok(())
}

/// Dynamical phase of `psi_n` over `period`.
///
/// The closed form `-(n + 1/2) pi (1 + C^2)/(C cos(beta)) - pi alpha_0^2 D^2`
/// needs an undriven representation and `period = tau_0`.
pub fn dynamical_phase(state: &EigenState<'_>, period: f64, method: DynamicalMethod) -> Result<f64> {
    match method {
        DynamicalMethod::Quadrature => dynamical_phase_quadrature(state, period),
        DynamicalMethod::ClosedForm => {
            let rep = state.rep;
            require_fictitious(rep)?;
            let params = rep.params();
            if (period - params.period()).abs() > 1e-12 * params.period() {
                return Err(Error::InvalidParameter(format!(
                    "closed-form dynamical phase is for tau_0 = {}, got {period}",
                    params.period()
                )));
            }
            let basis = rep.basis();
            let ccb = basis.c_cos_beta();
            let a0 = params.alpha0();
            let d = rep.particular().d();
            Ok(-(state.n as f64 + 0.5) * PI * (1.0 + basis.c * basis.c) / ccb - PI * a0 * a0 * d * d)
        }
    }
}

/// Geometric phase of a superposition over `tau_0`, raw and reduced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionPhase {
    pub raw: f64,
    pub reduced: f64,
}

/// `pi [1 + alpha_0^2 D^2 + sum |B_n|^2 (n + 1/2)(1 + C^2)/(C cos(beta))]`.
pub fn superposition_phase(sup: &Superposition<'_>, params: &OscillatorParams) -> Result<SuperpositionPhase> {
    let rep = sup.representation();
    require_fictitious(rep)?;
    if rep.params() != params {
        return Err(Error::InvalidParameter("superposition uses different oscillator parameters".into()));
    }
    let basis = rep.basis();
    let ratio = (1.0 + basis.c * basis.c) / basis.c_cos_beta();
    let a0 = params.alpha0();
    let d = rep.particular().d();
    let occupation: f64 = sup.weights().enumerate().map(|(n, w)| w * (n as f64 + 0.5)).sum();
    let raw = PI * (1.0 + a0 * a0 * d * d + occupation * ratio);
    Ok(SuperpositionPhase { raw, reduced: reduce_angle(raw) })
}

/// Geometric phase over `tau_0 / 2`, where the eigenfunctions with `x_p = 0`
/// are already quasi-periodic: `(n + 1/2) pi [-1 + (1 + C^2)/(2 C cos(beta))]`.
pub fn half_period_phase(rep: &Representation, n: usize) -> Result<f64> {
    if !rep.particular().is_zero() {
        return Err(Error::FictitiousSolutionPresent);
    }
    let basis = rep.basis();
    let ccb = basis.c_cos_beta();
    Ok((n as f64 + 0.5) * PI * (-1.0 + (1.0 + basis.c * basis.c) / (2.0 * ccb)))
}

/// Which closed form a [`PeriodChoice`] corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// Undriven, over `tau_0`.
    Undriven,
    /// Driven, over the joint period `N tau_0`.
    Full(Commensurability),
    /// Driven in the stationary basis with `D = 0`, over `tau_f`.
    SpecialRepresentation,
}

/// Evolution period on which a representation's eigenfunctions are quasi-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodChoice {
    pub period: f64,
    pub form: ClosedForm,
}

/// Chooses the evolution period for a representation.
///
/// A drive incommensurate with `w` leaves no common period unless the basis
/// is stationary and `D = 0`; otherwise the phase is undefined.
pub fn choose_period(rep: &Representation) -> Result<PeriodChoice> {
    let params = *rep.params();
    let xp = rep.particular();
    let Some(spec) = xp.spectrum().filter(|s| !s.is_zero()) else {
        return Ok(PeriodChoice { period: params.period(), form: ClosedForm::Undriven });
    };
    if rep.basis().is_stationary() && xp.d() == 0.0 {
        return Ok(PeriodChoice { period: spec.tau_f(), form: ClosedForm::SpecialRepresentation });
    }
    match commensurability(&params, spec.w_f(), DEFAULT_COMMENSURABILITY_TOL) {
        Some(comm) => Ok(PeriodChoice { period: comm.joint_period(&params), form: ClosedForm::Full(comm) }),
        None if xp.d() != 0.0 => Err(Error::PhaseUndefined(format!(
            "drive period {} is incommensurate with tau_0 = {} and D != 0",
            spec.tau_f(),
            params.period()
        ))),
        None => Err(Error::PhaseUndefined(format!(
            "drive period {} is incommensurate with tau_0 = {} and rho(t) is not constant",
            spec.tau_f(),
            params.period()
        ))),
    }
}

/// Geometric phase of `psi_n` by the applicable closed form and by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricEvaluation {
    pub choice: PeriodChoice,
    pub closed_form: f64,
    pub quadrature: f64,
}

impl GeometricEvaluation {
    pub fn discrepancy(&self) -> f64 {
        (self.closed_form - self.quadrature).abs()
    }
}

/// Picks the period with [`choose_period`] and evaluates both the closed form
/// and the defining integral there.
pub fn geometric_phase(state: &EigenState<'_>) -> Result<GeometricEvaluation> {
    let rep = state.rep;
    let choice = choose_period(rep)?;
    let closed_form = match choice.form {
        ClosedForm::Undriven => {
            let (width, centre) = decomposition(rep.basis(), rep.particular().d(), rep.params(), state.n);
            width + centre
        }
        ClosedForm::Full(comm) => closed_form_full(rep.basis(), rep.particular(), comm, state.n)?,
        ClosedForm::SpecialRepresentation => {
            let spec = rep.particular().spectrum().expect("special representation is driven");
            closed_form_special_rep(spec, rep.params())?
        }
    };
    let quadrature = geometric_phase_integral(state, choice.period)?;
    Ok(GeometricEvaluation { choice, closed_form, quadrature })
}

/// `(M/hbar) int_0^T x_p'^2 dt`, the centre-oscillation part of the phase.
pub fn centre_phase_integral(xp: &ParticularSolution, period: f64) -> Result<f64> {
    let p = *xp.params();
    let v = integrate_1d(|t| xp.x_dot(t).powi(2), 0.0, period, &quadrature_tol())?;
    Ok(p.mass * v / p.hbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_3;

    fn unit() -> OscillatorParams {
        OscillatorParams::unit()
    }

    fn basis(c: f64, beta: f64) -> HomogeneousBasis {
        HomogeneousBasis::new(unit(), c, beta).unwrap()
    }

    #[test]
    fn reduce_angle_range() {
        assert_eq!(reduce_angle(PI), PI);
        assert_eq!(reduce_angle(-PI), PI);
        assert_relative_eq!(reduce_angle(3.0 * PI), PI, epsilon = 1e-15);
        assert_relative_eq!(reduce_angle(-0.5), -0.5);
        assert_relative_eq!(reduce_angle(TAU + 0.25), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn undriven_closed_form_examples() {
        assert_eq!(closed_form_undriven(&basis(1.0, 0.0), 3), 0.0);
        assert_relative_eq!(closed_form_undriven(&basis(2.0, 0.0), 0), PI / 4.0, epsilon = 1e-15);
        assert_relative_eq!(closed_form_undriven(&basis(1.0, FRAC_PI_3), 1), 3.0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn integral_examples() {
        let stationary = Representation::stationary(unit());
        assert_eq!(geometric_phase_integral(&stationary.eigenstate(4), TAU).unwrap(), 0.0);

        let rep = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(geometric_phase_integral(&rep.eigenstate(0), TAU).unwrap(), PI / 4.0, epsilon = 1e-10);

        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(geometric_phase_integral(&rep.eigenstate(0), TAU).unwrap(), PI, epsilon = 1e-10);
    }

    #[test]
    fn wrong_period_is_undefined() {
        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        let err = geometric_phase_integral(&rep.eigenstate(0), PI).unwrap_err();
        assert!(matches!(err, Error::PhaseUndefined(_)));
        // The envelope alone has period tau_0 / 2.
        let rep = Representation::fictitious(unit(), 2.0, 0.3, 0.0, 0.0).unwrap();
        let half = geometric_phase_integral(&rep.eigenstate(1), PI).unwrap();
        assert_relative_eq!(2.0 * half, closed_form_undriven(rep.basis(), 1), epsilon = 1e-9);
    }

    #[test]
    fn full_closed_form_examples() {
        let spec = ForceSpectrum::cosine(2.0, 1, 1.0).unwrap();
        let xp = ParticularSolution::new(unit(), Some(spec.clone()), 0.0, 0.0).unwrap();
        let comm = Commensurability::new(1, 2).unwrap();
        let value = closed_form_full(&basis(1.0, 0.0), &xp, comm, 0).unwrap();
        assert_relative_eq!(value, 4.0 * PI / 9.0, epsilon = 1e-14);
        assert_relative_eq!(centre_phase_integral(&xp, TAU).unwrap(), 4.0 * PI / 9.0, epsilon = 1e-9);

        let xp = ParticularSolution::fictitious(unit(), 2.0, 0.0).unwrap();
        let value = closed_form_full(&basis(1.0, 0.0), &xp, Commensurability::new(1, 1).unwrap(), 0).unwrap();
        assert_relative_eq!(value, 4.0 * PI, epsilon = 1e-14);

        let xp = ParticularSolution::none(unit());
        let value = closed_form_full(&basis(2.0, 0.3), &xp, Commensurability::new(3, 1).unwrap(), 2).unwrap();
        assert_relative_eq!(value, 3.0 * closed_form_undriven(&basis(2.0, 0.3), 2), epsilon = 1e-13);
    }

    #[test]
    fn special_rep_examples() {
        let spec = ForceSpectrum::cosine(2.0, 1, 1.0).unwrap();
        assert_relative_eq!(closed_form_special_rep(&spec, &unit()).unwrap(), 2.0 * PI / 9.0, epsilon = 1e-14);
        let spec = ForceSpectrum::cosine(3.0, 2, 2.0).unwrap();
        assert_relative_eq!(closed_form_special_rep(&spec, &unit()).unwrap(), 48.0 * PI / 1225.0, epsilon = 1e-14);
        let zero = ForceSpectrum::new(2.0, vec![Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(closed_form_special_rep(&zero, &unit()).unwrap(), 0.0);

        let rep = special_representation(unit(), ForceSpectrum::cosine(3.0, 2, 2.0).unwrap()).unwrap();
        let eval = geometric_phase(&rep.eigenstate(0)).unwrap();
        assert_eq!(eval.choice.form, ClosedForm::SpecialRepresentation);
        assert!(eval.discrepancy() < 1e-9, "{eval:?}");
    }

    #[test]
    fn decomposition_examples() {
        let p = unit();
        let (w, c) = decomposition(&basis(1.0, 0.0), 1.0, &p, 0);
        assert_eq!(w, 0.0);
        assert_relative_eq!(c, PI);
        let (w, c) = decomposition(&basis(2.0, 0.0), 1.0, &p, 0);
        assert_relative_eq!(w, PI / 4.0);
        assert_relative_eq!(c, PI);
        let rep = Representation::fictitious(p, 2.0, 0.0, 1.0, 0.0).unwrap();
        let quad = geometric_phase_integral(&rep.eigenstate(0), TAU).unwrap();
        assert_relative_eq!(quad, w + c, epsilon = 1e-9);
    }

    #[test]
    fn ge_child_examples() {
        let p = unit();
        assert!(ge_child_integral(&basis(1.0, 0.0), &p).unwrap().abs() < 1e-14);
        assert_relative_eq!(ge_child_integral(&basis(2.0, 0.0), &p).unwrap(), PI / 4.0, epsilon = 1e-9);
        let z = ge_child_integral_complex(&basis(1.0, FRAC_PI_3), &p).unwrap();
        assert_relative_eq!(z.re, PI, epsilon = 1e-9);
        assert!(z.im.abs() < 1e-9);
    }

    #[test]
    fn dynamical_examples() {
        let stationary = Representation::stationary(unit());
        let d = dynamical_phase(&stationary.eigenstate(0), TAU, DynamicalMethod::ClosedForm).unwrap();
        assert_relative_eq!(d, -PI, epsilon = 1e-15);
        let rep = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        let closed = dynamical_phase(&rep.eigenstate(0), TAU, DynamicalMethod::ClosedForm).unwrap();
        assert_relative_eq!(closed, -5.0 * PI / 4.0, epsilon = 1e-14);
        let quad = dynamical_phase(&rep.eigenstate(0), TAU, DynamicalMethod::Quadrature).unwrap();
        assert!((quad - closed).abs() < 1e-7, "{quad} vs {closed}");
    }

    #[test]
    fn dynamical_closed_form_rejects_other_periods() {
        let rep = Representation::stationary(unit());
        assert!(dynamical_phase(&rep.eigenstate(0), PI, DynamicalMethod::ClosedForm).is_err());
    }

    #[test]
    fn superposition_examples() {
        let rep = Representation::stationary(unit());
        let b = std::f64::consts::FRAC_1_SQRT_2;
        let sup = Superposition::new(&rep, vec![Complex64::new(b, 0.0), Complex64::new(0.0, b)]).unwrap();
        assert_relative_eq!(superposition_phase(&sup, &unit()).unwrap().raw, 3.0 * PI, epsilon = 1e-14);

        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        let sup = Superposition::new(&rep, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let phase = superposition_phase(&sup, &unit()).unwrap();
        assert_relative_eq!(phase.raw, 3.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(phase.reduced, PI, epsilon = 1e-12);
    }

    #[test]
    fn half_period_examples() {
        let rep = Representation::stationary(unit());
        assert_eq!(half_period_phase(&rep, 3).unwrap(), 0.0);
        let rep = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(half_period_phase(&rep, 0).unwrap(), PI / 8.0, epsilon = 1e-15);
        let rep = Representation::fictitious(unit(), 1.0, FRAC_PI_3, 0.0, 0.0).unwrap();
        assert_relative_eq!(half_period_phase(&rep, 1).unwrap(), 1.5 * PI, epsilon = 1e-14);
        let rep = Representation::fictitious(unit(), 1.0, 0.0, 0.5, 0.0).unwrap();
        assert_eq!(half_period_phase(&rep, 0).unwrap_err(), Error::FictitiousSolutionPresent);
    }

    #[test]
    fn incommensurate_drive_with_admixture_is_undefined() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let spec = ForceSpectrum::cosine(golden, 1, 0.3).unwrap();
        let xp = ParticularSolution::new(unit(), Some(spec.clone()), 0.5, 0.0).unwrap();
        let rep = Representation::new(HomogeneousBasis::stationary(unit()), xp).unwrap();
        assert!(matches!(geometric_phase(&rep.eigenstate(0)), Err(Error::PhaseUndefined(_))));

        // Without the admixture the stationary basis still has period tau_f.
        let rep = special_representation(unit(), spec).unwrap();
        let eval = geometric_phase(&rep.eigenstate(0)).unwrap();
        assert!(eval.discrepancy() < 1e-9);
    }

    #[test]
    fn driven_general_basis_matches_quadrature() {
        let spec = ForceSpectrum::new(
            1.5,
            vec![Complex64::new(0.1, 0.0), Complex64::new(0.3, -0.2), Complex64::new(0.0, 0.15)],
        )
        .unwrap();
        let xp = ParticularSolution::new(unit(), Some(spec), 0.7, 0.4).unwrap();
        let rep = Representation::new(HomogeneousBasis::new(unit(), 1.7, -0.4).unwrap(), xp).unwrap();
        let eval = geometric_phase(&rep.eigenstate(2)).unwrap();
        assert_eq!(eval.choice.form, ClosedForm::Full(Commensurability::new(2, 3).unwrap()));
        assert!(eval.discrepancy() < 1e-8, "{eval:?}");
    }
}
