//! Eigenfunctions of the (driven) harmonic oscillator built from classical
//! solutions, and quadrature-level checks on them.
//!
//! For a representation `(u, v, x_p)` the eigenfunction with quantum number `n` is
//!
//! ```text
//! psi_n = (Omega/(pi hbar))^{1/4} / sqrt(2^n n! rho) * e^{-i (n + 1/2) theta}
//!         * exp[i (M x_p' x + delta) / hbar]
//!         * exp[(x - x_p)^2 / (2 hbar) * (-Omega/rho^2 + i M rho'/rho)]
//!         * H_n(sqrt(Omega/hbar) (x - x_p) / rho)
//! ```
//!
//! where `theta` is the continuous argument of `u + i v`, so that
//! `[(u - i v)/rho]^{n+1/2} = e^{-i (n + 1/2) theta}` is single valued in time.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::classical::{DeltaVariant, HomogeneousBasis, OscillatorParams, ParticularSolution};
use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, Tolerance};

/// Half-width of the x-quadrature window, in units of
/// `sqrt(hbar rho^2 / (2 Omega)) * sqrt(2n + 1)`.
pub const WINDOW_WIDTHS: f64 = 12.0;
/// Largest ratio spread accepted by [`quasi_periodicity_check`].
pub const QUASI_PERIODIC_SPREAD: f64 = 1e-6;

fn x_tolerance() -> Tolerance {
    Tolerance { abs_tol: 1e-13, rel_tol: 1e-12, max_iterations: 4000 }
}

/// Physicists' Hermite polynomial `H_n(xi)` by the three-term recurrence.
pub fn hermite(n: usize, xi: f64) -> Result<f64> {
    let mut h_prev = 1.0;
    if n == 0 {
        return Ok(h_prev);
    }
    let mut h = 2.0 * xi;
    for k in 1..n {
        let next = 2.0 * xi * h - 2.0 * k as f64 * h_prev;
        h_prev = h;
        h = next;
    }
    if h.is_finite() {
        Ok(h)
    } else {
        Err(Error::Overflow { order: n, argument: xi })
    }
}

/// Normalized Hermite functions `h_n` and `h_{n-1}` (the latter is 0 for `n = 0`),
/// `h_n(xi) = H_n(xi) e^{-xi^2/2} / sqrt(2^n n! sqrt(pi))`.
fn hermite_functions(n: usize, xi: f64) -> (f64, f64) {
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * h - (kf / (kf + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = next;
    }
    (h, h_prev)
}

/// A complete eigenfunction set, fixed by the homogeneous basis `(C, beta)`
/// and the particular solution `x_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    basis: HomogeneousBasis,
    xp: ParticularSolution,
    delta_variant: DeltaVariant,
}

impl Representation {
    pub fn new(basis: HomogeneousBasis, xp: ParticularSolution) -> Result<Self> {
        if basis.params != *xp.params() {
            return Err(Error::InvalidParameter(
                "basis and particular solution use different oscillator parameters".into(),
            ));
        }
        Ok(Self { basis, xp, delta_variant: DeltaVariant::Lagrangian })
    }

    /// `C = 1, beta = 0, x_p = 0`: static probability densities.
    pub fn stationary(params: OscillatorParams) -> Self {
        Self {
            basis: HomogeneousBasis::stationary(params),
            xp: ParticularSolution::none(params),
            delta_variant: DeltaVariant::Lagrangian,
        }
    }

    /// Undriven oscillator with basis `(C, beta)` and fictitious `x_p = D cos(wt + phi)`.
    pub fn fictitious(params: OscillatorParams, c: f64, beta: f64, d: f64, phi: f64) -> Result<Self> {
        Self::new(HomogeneousBasis::new(params, c, beta)?, ParticularSolution::fictitious(params, d, phi)?)
    }

    /// Same representation with a different `delta` convention. Only the
    /// default [`DeltaVariant::Lagrangian`] yields Schrodinger solutions.
    pub fn with_delta_variant(mut self, variant: DeltaVariant) -> Self {
        self.delta_variant = variant;
        self
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.basis.params
    }

    pub fn basis(&self) -> &HomogeneousBasis {
        &self.basis
    }

    pub fn particular(&self) -> &ParticularSolution {
        &self.xp
    }

    pub fn delta_variant(&self) -> DeltaVariant {
        self.delta_variant
    }

    /// Gaussian width `sqrt(hbar rho^2 / (2 Omega))` of the ground state at `t`.
    pub fn width(&self, t: f64) -> f64 {
        let rho = self.basis.envelope_rho(t);
        (self.params().hbar * rho * rho / (2.0 * self.basis.wronskian_omega())).sqrt()
    }

    pub fn eigenstate(&self, n: usize) -> EigenState<'_> {
        EigenState { rep: self, n }
    }

    /// `(psi_n, d psi_n / dx)` at `(x, t)`.
    fn eval(&self, n: usize, x: f64, t: f64) -> Result<(Complex64, Complex64)> {
        let p = self.params();
        let omega = self.basis.wronskian_omega();
        let rho = self.basis.envelope_rho(t);
        let rho_dot = self.basis.envelope_rho_dot(t);
        let theta = self.basis.winding_angle(t);
        let xp = self.xp.x(t);
        let xp_dot = self.xp.x_dot(t);
        let delta = self.xp.delta_with(t, self.delta_variant);

        let y = x - xp;
        let k = (omega / p.hbar).sqrt() / rho;
        let xi = k * y;
        let (h_n, h_prev) = hermite_functions(n, xi);
        let amp = (omega / p.hbar).powf(0.25) / rho.sqrt();

        let nf = n as f64;
        let phase = -(nf + 0.5) * theta
            + (p.mass * xp_dot * x + delta) / p.hbar
            + p.mass * rho_dot * y * y / (2.0 * p.hbar * rho);
        let carrier = Complex64::from_polar(amp, phase);
        let psi = carrier * h_n;
        let h_n_prime = (2.0 * nf).sqrt() * h_prev - xi * h_n;
        let wave_number = p.mass * (xp_dot + rho_dot * y / rho) / p.hbar;
        let dpsi = carrier * Complex64::new(k * h_n_prime, wave_number * h_n);

        if psi.is_finite() && dpsi.is_finite() {
            Ok((psi, dpsi))
        } else {
            Err(Error::Overflow { order: n, argument: xi })
        }
    }
}

/// Anything that can be evaluated as a wavefunction on a representation.
pub trait WaveFunction {
    fn representation(&self) -> &Representation;

    /// `(psi, d psi / dx)` at `(x, t)`.
    fn value_and_gradient(&self, x: f64, t: f64) -> Result<(Complex64, Complex64)>;

    /// Highest quantum number present; sizes the quadrature window.
    fn max_quantum(&self) -> usize;

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        Ok(self.value_and_gradient(x, t)?.0)
    }
}

/// Eigenfunction `psi_n` of a representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState<'r> {
    pub rep: &'r Representation,
    pub n: usize,
}

impl EigenState<'_> {
    /// Complex amplitude `psi_n(x, t)`.
    pub fn eval_eigenfunction(&self, x: f64, t: f64) -> Result<Complex64> {
        self.value(x, t)
    }
}

impl WaveFunction for EigenState<'_> {
    fn representation(&self) -> &Representation {
        self.rep
    }

    fn value_and_gradient(&self, x: f64, t: f64) -> Result<(Complex64, Complex64)> {
        self.rep.eval(self.n, x, t)
    }

    fn max_quantum(&self) -> usize {
        self.n
    }
}

/// `Psi = sum_n B_n psi_n` over a fixed representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition<'r> {
    rep: &'r Representation,
    coefficients: Vec<Complex64>,
}

impl<'r> Superposition<'r> {
    /// `coefficients[n]` is `B_n`; `sum |B_n|^2` must be 1 within 1e-12.
    pub fn new(rep: &'r Representation, coefficients: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|b| b.norm_sqr()).sum();
        if coefficients.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("sum |B_n|^2 must equal 1, got {norm}")));
        }
        Ok(Self { rep, coefficients })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Occupation probabilities `|B_n|^2`.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.coefficients.iter().map(|b| b.norm_sqr())
    }
}

impl WaveFunction for Superposition<'_> {
    fn representation(&self) -> &Representation {
        self.rep
    }

    fn value_and_gradient(&self, x: f64, t: f64) -> Result<(Complex64, Complex64)> {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dpsi = Complex64::new(0.0, 0.0);
        for (n, b) in self.coefficients.iter().enumerate() {
            if b.norm_sqr() == 0.0 {
                continue;
            }
            let (v, d) = self.rep.eval(n, x, t)?;
            psi += b * v;
            dpsi += b * d;
        }
        Ok((psi, dpsi))
    }

    fn max_quantum(&self) -> usize {
        self.coefficients.iter().rposition(|b| b.norm_sqr() > 0.0).unwrap_or(0)
    }
}

/// Quadrature window `x_p(t) +- 12 width sqrt(2n + 1)`.
fn window<W: WaveFunction + ?Sized>(wf: &W, t: f64) -> (f64, f64) {
    let rep = wf.representation();
    let centre = rep.xp.x(t);
    let half = WINDOW_WIDTHS * rep.width(t) * ((2 * wf.max_quantum() + 1) as f64).sqrt();
    (centre - half, centre + half)
}

/// `int g(x, psi, psi_x) dx` over the quadrature window at time `t`.
pub fn integrate_over_x<W, G>(wf: &W, t: f64, g: G) -> Result<f64>
where
    W: WaveFunction + ?Sized,
    G: Fn(f64, Complex64, Complex64) -> f64,
{
    let (lo, hi) = window(wf, t);
    let failure = std::cell::Cell::new(None);
    let value = integrate_1d(
        |x| match wf.value_and_gradient(x, t) {
            Ok((psi, dpsi)) => g(x, psi, dpsi),
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        },
        lo,
        hi,
        &x_tolerance(),
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(value?)
}

/// `int |psi|^2 dx` at time `t`.
pub fn normalization_check<W: WaveFunction + ?Sized>(wf: &W, t: f64) -> Result<f64> {
    integrate_over_x(wf, t, |_, psi, _| psi.norm_sqr())
}

/// `<a|b>` at time `t`. Both states must share a representation.
pub fn overlap(a: &EigenState<'_>, b: &EigenState<'_>, t: f64) -> Result<Complex64> {
    if !std::ptr::eq(a.rep, b.rep) && a.rep != b.rep {
        return Err(Error::RepresentationMismatch);
    }
    let wide = if a.n >= b.n { a } else { b };
    let product = |x: f64| -> Result<Complex64> { Ok(a.value(x, t)?.conj() * b.value(x, t)?) };
    let re = integrate_over_x(wide, t, |x, _, _| product(x).map_or(f64::NAN, |z| z.re))?;
    let im = integrate_over_x(wide, t, |x, _, _| product(x).map_or(f64::NAN, |z| z.im))?;
    Ok(Complex64::new(re, im))
}

/// `<x>` at time `t`.
pub fn position_expectation<W: WaveFunction + ?Sized>(wf: &W, t: f64) -> Result<f64> {
    integrate_over_x(wf, t, |x, psi, _| x * psi.norm_sqr())
}

/// Variance of `|psi|^2` about `x_p(t)`.
pub fn second_central_moment<W: WaveFunction + ?Sized>(wf: &W, t: f64) -> Result<f64> {
    let centre = wf.representation().xp.x(t);
    integrate_over_x(wf, t, |x, psi, _| (x - centre).powi(2) * psi.norm_sqr())
}

/// `<H>(t) = int [hbar^2/(2M) |psi_x|^2 + (M w^2 x^2 / 2 - F(t) x) |psi|^2] dx`.
pub fn energy_expectation<W: WaveFunction + ?Sized>(wf: &W, t: f64) -> Result<f64> {
    let rep = wf.representation();
    let p = *rep.params();
    let force = rep.xp.force(t);
    integrate_over_x(wf, t, |x, psi, dpsi| {
        p.hbar * p.hbar / (2.0 * p.mass) * dpsi.norm_sqr()
            + (0.5 * p.mass * p.freq * p.freq * x * x - force * x) * psi.norm_sqr()
    })
}

/// Measured overall factor `psi(x, t0 + period) / psi(x, t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiPeriodicity {
    pub factor: Complex64,
    /// Largest deviation of a single-point ratio from `factor`.
    pub spread: f64,
}

/// Ratio of the wavefunction after `period` to the wavefunction at `t0`,
/// sampled on a grid of `x` around the centre. Points where `|psi|` is tiny
/// (Hermite nodes, tails) are skipped.
pub fn quasi_periodicity_check<W: WaveFunction + ?Sized>(wf: &W, t0: f64, period: f64) -> Result<QuasiPeriodicity> {
    let rep = wf.representation();
    let centre = rep.xp.x(t0);
    let half = 2.5 * rep.width(t0) * ((2 * wf.max_quantum() + 1) as f64).sqrt();
    let points = 41;
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let x = centre - half + 2.0 * half * i as f64 / (points - 1) as f64;
        samples.push((x, wf.value(x, t0)?));
    }
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let mut ratios = Vec::new();
    for (x, before) in samples {
        if before.norm() < 1e-3 * peak {
            continue;
        }
        ratios.push(wf.value(x, t0 + period)? / before);
    }
    if ratios.is_empty() {
        return Err(Error::NotQuasiPeriodic { spread: f64::INFINITY });
    }
    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let factor = Complex64::new(
        median(ratios.iter().map(|r| r.re).collect()),
        median(ratios.iter().map(|r| r.im).collect()),
    );
    let spread = ratios.iter().map(|r| (r - factor).norm()).fold(0.0, f64::max);
    if spread > QUASI_PERIODIC_SPREAD {
        return Err(Error::NotQuasiPeriodic { spread });
    }
    Ok(QuasiPeriodicity { factor, spread })
}

/// `|i hbar psi_t - H psi|` at `(x, t)` by central finite differences,
/// with `dx = 1e-4` ground-state widths and `dt = 1e-6 tau_0`.
pub fn schrodinger_residual<W: WaveFunction + ?Sized>(wf: &W, x: f64, t: f64) -> Result<f64> {
    let rep = wf.representation();
    let p = *rep.params();
    let dx = 1e-4 * rep.width(t);
    let dt = 1e-6 * p.period();

    let psi = wf.value(x, t)?;
    let psi_t = (wf.value(x, t + dt)? - wf.value(x, t - dt)?) / (2.0 * dt);
    let psi_xx = (wf.value(x + dx, t)? - psi * 2.0 + wf.value(x - dx, t)?) / (dx * dx);

    let potential = 0.5 * p.mass * p.freq * p.freq * x * x - rep.xp.force(t) * x;
    let lhs = Complex64::new(0.0, p.hbar) * psi_t;
    let rhs = -psi_xx * (p.hbar * p.hbar / (2.0 * p.mass)) + psi * potential;
    Ok((lhs - rhs).norm())
}

/// Residual divided by the local scale `hbar w |psi|`.
pub fn relative_schrodinger_residual<W: WaveFunction + ?Sized>(wf: &W, x: f64, t: f64) -> Result<f64> {
    let p = *wf.representation().params();
    let scale = p.hbar * p.freq * wf.value(x, t)?.norm();
    Ok(schrodinger_residual(wf, x, t)? / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ForceSpectrum;
    use approx::assert_relative_eq;

    fn unit() -> OscillatorParams {
        OscillatorParams::unit()
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(1, 2.5).unwrap(), 5.0);
        assert_eq!(hermite(3, 1.0).unwrap(), -4.0);
        assert_eq!(hermite(4, 0.5).unwrap(), 16.0 * 0.0625 - 48.0 * 0.25 + 12.0);
    }

    #[test]
    fn hermite_overflow_reported() {
        assert!(matches!(hermite(400, 1e3), Err(Error::Overflow { order: 400, .. })));
    }

    #[test]
    fn hermite_functions_agree_with_polynomials() {
        for n in 0..12usize {
            for xi in [-2.3, -0.4, 0.0, 0.9, 3.1] {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                let expected = hermite(n, xi).unwrap() * (-0.5 * xi * xi).exp()
                    / (2f64.powi(n as i32) * fact * PI.sqrt()).sqrt();
                assert!((hermite_functions(n, xi).0 - expected).abs() < 1e-13, "n={n} xi={xi}");
            }
        }
    }

    #[test]
    fn ground_state_peak() {
        let rep = Representation::stationary(unit());
        let psi = rep.eigenstate(0).eval_eigenfunction(0.0, 0.0).unwrap();
        assert_relative_eq!(psi.norm(), (1.0 / PI).powf(0.25), epsilon = 1e-15);
        let p = OscillatorParams::new(2.0, 1.5, 0.5).unwrap();
        let rep = Representation::stationary(p);
        let psi = rep.eigenstate(0).eval_eigenfunction(0.0, 0.0).unwrap();
        assert_relative_eq!(psi.norm(), (p.alpha0().powi(2) / PI).powf(0.25), epsilon = 1e-14);
    }

    #[test]
    fn displaced_ground_state_density_peaks_at_centre() {
        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        let psi = rep.eigenstate(0).eval_eigenfunction(1.0, 0.0).unwrap();
        assert_relative_eq!(psi.norm_sqr(), 1.0 / PI.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn normalization_examples() {
        let rep = Representation::stationary(unit());
        assert!((normalization_check(&rep.eigenstate(0), 0.0).unwrap() - 1.0).abs() < 1e-10);

        let rep = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        assert!((normalization_check(&rep.eigenstate(3), 0.7).unwrap() - 1.0).abs() < 1e-8);

        let xp = ParticularSolution::new(unit(), Some(ForceSpectrum::cosine(2.0, 1, 1.0).unwrap()), 0.0, 0.0).unwrap();
        let rep = Representation::new(HomogeneousBasis::stationary(unit()), xp).unwrap();
        assert!((normalization_check(&rep.eigenstate(1), 1.3).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn overlap_examples() {
        let rep = Representation::stationary(unit());
        let o = overlap(&rep.eigenstate(2), &rep.eigenstate(2), 0.4).unwrap();
        assert!((o - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(overlap(&rep.eigenstate(0), &rep.eigenstate(1), 1.9).unwrap().norm() < 1e-10);

        let rep = Representation::fictitious(unit(), 2.0, 0.3, 0.0, 0.0).unwrap();
        assert!(overlap(&rep.eigenstate(1), &rep.eigenstate(3), 0.4).unwrap().norm() < 1e-8);
    }

    #[test]
    fn overlap_rejects_mixed_representations() {
        let a = Representation::stationary(unit());
        let b = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(overlap(&a.eigenstate(0), &b.eigenstate(0), 0.0), Err(Error::RepresentationMismatch));
    }

    #[test]
    fn position_expectation_examples() {
        let rep = Representation::fictitious(unit(), 2.0, 0.2, 0.0, 0.0).unwrap();
        assert!(position_expectation(&rep.eigenstate(2), 0.8).unwrap().abs() < 1e-10);

        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        for n in 0..4 {
            assert!((position_expectation(&rep.eigenstate(n), 0.0).unwrap() - 1.0).abs() < 1e-8);
        }

        let xp = ParticularSolution::new(unit(), Some(ForceSpectrum::cosine(2.0, 1, 1.0).unwrap()), 0.0, 0.0).unwrap();
        let rep = Representation::new(HomogeneousBasis::stationary(unit()), xp).unwrap();
        assert!(position_expectation(&rep.eigenstate(2), PI / 4.0).unwrap().abs() < 1e-8);
        let t: f64 = 1.1;
        let expected = -(2.0 * t).cos() / 3.0;
        assert!((position_expectation(&rep.eigenstate(2), t).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn quasi_periodicity_examples() {
        let tau = unit().period();
        let rep = Representation::stationary(unit());
        let q = quasi_periodicity_check(&rep.eigenstate(0), 0.3, tau).unwrap();
        assert!((q.factor + 1.0).norm() < 1e-10);
        let q = quasi_periodicity_check(&rep.eigenstate(1), 0.3, 0.5 * tau).unwrap();
        assert!((q.factor - Complex64::new(0.0, 1.0)).norm() < 1e-10);

        let rep = Representation::fictitious(unit(), 1.5, 0.2, 0.7, 0.4).unwrap();
        let q = quasi_periodicity_check(&rep.eigenstate(2), 0.9, tau).unwrap();
        assert!((q.factor.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn non_quasi_periodic_detected() {
        let rep = Representation::fictitious(unit(), 2.0, 0.0, 0.0, 0.0).unwrap();
        let err = quasi_periodicity_check(&rep.eigenstate(0), 0.2, 0.3).unwrap_err();
        assert!(matches!(err, Error::NotQuasiPeriodic { .. }));
    }

    #[test]
    fn schrodinger_residual_examples() {
        let rep = Representation::stationary(unit());
        assert!(relative_schrodinger_residual(&rep.eigenstate(0), 0.5, 0.3).unwrap() < 1e-5);

        let rep = Representation::fictitious(unit(), 1.0, 0.0, 1.0, 0.0).unwrap();
        let good = relative_schrodinger_residual(&rep.eigenstate(0), 0.2, 1.1).unwrap();
        assert!(good < 1e-5, "{good:e}");

        let corrupted = rep.clone().with_delta_variant(DeltaVariant::KineticDropped);
        let bad = relative_schrodinger_residual(&corrupted.eigenstate(0), 0.2, 1.1).unwrap();
        assert!(bad >= 1e3 * good, "good {good:e} bad {bad:e}");
    }

    #[test]
    fn driven_eigenfunction_solves_schrodinger() {
        let params = OscillatorParams::new(1.2, 0.8, 0.9).unwrap();
        let spec = ForceSpectrum::new(1.7, vec![Complex64::new(0.1, 0.0), Complex64::new(0.3, 0.2)]).unwrap();
        let xp = ParticularSolution::new(params, Some(spec), 0.5, 1.0).unwrap();
        let rep = Representation::new(HomogeneousBasis::new(params, 1.8, -0.4).unwrap(), xp).unwrap();
        for (n, x, t) in [(0, 0.1, 0.4), (2, -0.6, 2.3), (3, 1.2, 5.0)] {
            let r = relative_schrodinger_residual(&rep.eigenstate(n), x, t).unwrap();
            assert!(r < 1e-5, "n={n} x={x} t={t}: {r:e}");
        }
    }

    #[test]
    fn width_pulsation_matches_envelope() {
        let rep = Representation::fictitious(unit(), 2.0, 0.5, 0.0, 0.0).unwrap();
        for t in [0.0, 0.6, 2.2] {
            let m2 = second_central_moment(&rep.eigenstate(0), t).unwrap();
            let rho = rep.basis().envelope_rho(t);
            let expected = unit().hbar * rho * rho / (2.0 * rep.basis().wronskian_omega());
            assert!((m2 - expected).abs() < 1e-8);
        }
    }

    #[test]
    fn parity_without_particular_solution() {
        let rep = Representation::fictitious(unit(), 1.7, -0.6, 0.0, 0.0).unwrap();
        for n in 0..6 {
            let s = rep.eigenstate(n);
            for (x, t) in [(0.3, 0.1), (1.4, 2.0), (0.05, -3.0)] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(s.value(-x, t).unwrap(), s.value(x, t).unwrap() * sign);
            }
        }
    }

    #[test]
    fn superposition_parity() {
        let rep = Representation::fictitious(unit(), 1.3, 0.4, 0.0, 0.0).unwrap();
        let b = Complex64::new(0.6, 0.0);
        let c = Complex64::new(0.0, 0.8);
        let even = Superposition::new(&rep, vec![b, Complex64::default(), c]).unwrap();
        let odd = Superposition::new(&rep, vec![Complex64::default(), b, Complex64::default(), c]).unwrap();
        for (x, t) in [(0.4, 0.2), (1.1, 1.7)] {
            assert_eq!(even.value(-x, t).unwrap(), even.value(x, t).unwrap());
            assert_eq!(odd.value(-x, t).unwrap(), -odd.value(x, t).unwrap());
        }
    }

    #[test]
    fn superposition_requires_unit_norm() {
        let rep = Representation::stationary(unit());
        assert!(Superposition::new(&rep, vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)]).is_err());
        assert!(Superposition::new(&rep, vec![]).is_err());
    }

    #[test]
    fn phase_is_continuous_in_time() {
        // Configurations without Hermite nodes crossing the probe point.
        let displaced = Representation::fictitious(unit(), 3.0, 0.9, 0.4, 0.2).unwrap();
        let centred = Representation::fictitious(unit(), 3.0, 0.9, 0.0, 0.0).unwrap();
        let tau = unit().period();
        let steps = 10_000;
        for (s, x) in [(displaced.eigenstate(0), 0.35), (centred.eigenstate(1), 0.35), (centred.eigenstate(2), 0.0)] {
            let mut prev = s.value(x, 0.0).unwrap();
            for i in 1..=steps {
                let t = tau * i as f64 / steps as f64;
                let cur = s.value(x, t).unwrap();
                // Adjacent samples differ by a small rotation, never a branch jump.
                assert!((cur / prev).arg().abs() < 0.05, "n = {} jump at t = {t}", s.n);
                prev = cur;
            }
        }
    }
}
