//! Classical-solution data for the (driven) simple harmonic oscillator.
//!
//! The quantum eigenfunctions and every phase formula are built from
//! two homogeneous solutions `u = cos wt`, `v = C sin(wt + beta)` of
//! `x'' + w^2 x = F(t)/M`, their envelope `rho = sqrt(u^2 + v^2)`, the
//! Wronskian `Omega = M (u v' - v u')` and a particular solution `x_p`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, Tolerance};

/// Relative tolerance for the exact-resonance test `|n| w_f = w`.
pub const RESONANCE_REL_TOL: f64 = 1e-12;
/// Largest period multiple `N` accepted by [`commensurability`].
pub const MAX_COMMENSURATE_DENOMINATOR: u64 = 1_000_000;
/// Default matching tolerance for [`commensurability`].
pub const DEFAULT_COMMENSURABILITY_TOL: f64 = 1e-9;

/// Mass, angular frequency and action scale of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub freq: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, freq: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("M", mass), ("w", freq), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { mass, freq, hbar })
    }

    /// `M = w = hbar = 1`.
    pub fn unit() -> Self {
        Self { mass: 1.0, freq: 1.0, hbar: 1.0 }
    }

    /// Classical period `tau_0 = 2 pi / w`.
    pub fn period(&self) -> f64 {
        TAU / self.freq
    }

    /// Inverse length scale `alpha_0 = sqrt(M w / hbar)`.
    pub fn alpha0(&self) -> f64 {
        (self.mass * self.freq / self.hbar).sqrt()
    }
}

/// Homogeneous solutions `u = cos wt`, `v = C sin(wt + beta)`.
///
/// Only bases with positive Wronskian are accepted: with `Omega < 0` the
/// Gaussian factor of the eigenfunctions grows instead of decaying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousBasis {
    pub params: OscillatorParams,
    pub c: f64,
    pub beta: f64,
}

impl HomogeneousBasis {
    pub fn new(params: OscillatorParams, c: f64, beta: f64) -> Result<Self> {
        if !(c.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("C and beta must be finite, got C = {c}, beta = {beta}")));
        }
        let basis = Self { params, c, beta };
        let omega = basis.wronskian_omega();
        // cos(pi/2) evaluates to ~6e-17, so compare against a scaled epsilon.
        if c == 0.0 || beta.cos().abs() < 8.0 * f64::EPSILON {
            return Err(Error::DegenerateBasis { omega });
        }
        if omega < 0.0 {
            return Err(Error::ReversedOrientation { omega });
        }
        Ok(basis)
    }

    /// The stationary choice `C = 1, beta = 0`, for which `rho = 1`.
    pub fn stationary(params: OscillatorParams) -> Self {
        Self { params, c: 1.0, beta: 0.0 }
    }

    pub fn is_stationary(&self) -> bool {
        self.c == 1.0 && self.beta == 0.0
    }

    /// `C cos(beta)`, the combination every closed form depends on.
    pub fn c_cos_beta(&self) -> f64 {
        self.c * self.beta.cos()
    }

    pub fn u(&self, t: f64) -> f64 {
        (self.params.freq * t).cos()
    }

    pub fn v(&self, t: f64) -> f64 {
        self.c * (self.params.freq * t + self.beta).sin()
    }

    pub fn u_dot(&self, t: f64) -> f64 {
        -self.params.freq * (self.params.freq * t).sin()
    }

    pub fn v_dot(&self, t: f64) -> f64 {
        self.c * self.params.freq * (self.params.freq * t + self.beta).cos()
    }

    /// `Omega = M w C cos(beta)`.
    pub fn wronskian_omega(&self) -> f64 {
        self.params.mass * self.params.freq * self.c_cos_beta()
    }

    /// `M (u v' - v u')` evaluated from the solutions at time `t`.
    pub fn wronskian_at(&self, t: f64) -> f64 {
        self.params.mass * (self.u(t) * self.v_dot(t) - self.v(t) * self.u_dot(t))
    }

    /// Envelope `rho(t) = sqrt(u^2 + v^2)`.
    pub fn envelope_rho(&self, t: f64) -> f64 {
        self.u(t).hypot(self.v(t))
    }

    pub fn envelope_rho_dot(&self, t: f64) -> f64 {
        (self.u(t) * self.u_dot(t) + self.v(t) * self.v_dot(t)) / self.envelope_rho(t)
    }

    pub fn envelope_rho_ddot(&self, t: f64) -> f64 {
        let rho = self.envelope_rho(t);
        let rho_dot = self.envelope_rho_dot(t);
        let w2 = self.params.freq * self.params.freq;
        let kinetic = self.u_dot(t).powi(2) + self.v_dot(t).powi(2);
        (kinetic - w2 * rho * rho - rho_dot * rho_dot) / rho
    }

    /// Continuous argument `theta(t)` of `u + i v`, with
    /// `theta(0) = atan2(C sin beta, 1)`.
    ///
    /// `theta` increases monotonically (its rate is `Omega / (M rho^2) > 0`)
    /// by exactly `2 pi` per period, which fixes the unwrapping.
    pub fn winding_angle(&self, t: f64) -> f64 {
        let tau = self.params.period();
        let cycles = (t / tau).floor();
        let t_red = t - cycles * tau;
        let theta0 = self.v(0.0).atan2(self.u(0.0));
        let raw = self.v(t_red).atan2(self.u(t_red));
        let mut offset = (raw - theta0).rem_euclid(TAU);
        // Right at the end of a period the reduction can round to 2 pi.
        if t_red < 0.5 * tau && offset > PI {
            offset -= TAU;
        }
        theta0 + offset + cycles * TAU
    }
}

/// Fourier spectrum of a real periodic force, `F(t) = sum_n f_n e^{i n w_f t}`.
///
/// Only `n >= 0` is stored; `f_{-n} = conj(f_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumFile", into = "SpectrumFile")]
pub struct ForceSpectrum {
    w_f: f64,
    coefficients: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpectrumEntry {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpectrumFile {
    w_f: f64,
    coefficients: Vec<SpectrumEntry>,
}

impl TryFrom<SpectrumFile> for ForceSpectrum {
    type Error = Error;

    fn try_from(file: SpectrumFile) -> Result<Self> {
        let n_max = file.coefficients.iter().map(|e| e.n).max().unwrap_or(0);
        if let Some(bad) = file.coefficients.iter().find(|e| e.n < 0) {
            return Err(Error::InvalidParameter(format!(
                "negative mode n = {} in force spectrum; only n >= 0 is stored",
                bad.n
            )));
        }
        let mut coefficients = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
        let mut seen = vec![false; coefficients.len()];
        for e in &file.coefficients {
            let i = e.n as usize;
            if seen[i] {
                return Err(Error::InvalidParameter(format!("mode n = {} listed twice", e.n)));
            }
            seen[i] = true;
            coefficients[i] = Complex64::new(e.re, e.im);
        }
        ForceSpectrum::new(file.w_f, coefficients)
    }
}

impl From<ForceSpectrum> for SpectrumFile {
    fn from(s: ForceSpectrum) -> Self {
        SpectrumFile {
            w_f: s.w_f,
            coefficients: s
                .coefficients
                .iter()
                .enumerate()
                .map(|(n, c)| SpectrumEntry { n: n as i64, re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl ForceSpectrum {
    /// `coefficients[n]` is `f_n` for `n = 0..=n_max`. `f_0` must be real.
    pub fn new(w_f: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        if !(w_f.is_finite() && w_f > 0.0) {
            return Err(Error::InvalidParameter(format!("w_f must be positive, got {w_f}")));
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidParameter("force coefficients must be finite".into()));
        }
        if let Some(f0) = coefficients.first() {
            if f0.im.abs() > 1e-12 * f0.norm().max(1.0) {
                return Err(Error::InvalidParameter(format!("f_0 must be real for a real force, got {f0}")));
            }
        }
        let mut coefficients = coefficients;
        if let Some(f0) = coefficients.first_mut() {
            f0.im = 0.0;
        }
        Ok(Self { w_f, coefficients })
    }

    /// Single cosine `amplitude * cos(n w_f t)`, i.e. `f_{+-n} = amplitude / 2`.
    pub fn cosine(w_f: f64, n: usize, amplitude: f64) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); n + 1];
        coefficients[n] += if n == 0 { amplitude } else { 0.5 * amplitude };
        Self::new(w_f, coefficients)
    }

    pub fn w_f(&self) -> f64 {
        self.w_f
    }

    pub fn tau_f(&self) -> f64 {
        TAU / self.w_f
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// `f_n` for any integer `n`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        match self.coefficients.get(n.unsigned_abs() as usize) {
            Some(c) if n >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Non-negative-mode coefficients, index = mode number.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm() == 0.0)
    }

    /// Reconstructed force `F(t)`.
    pub fn force(&self, t: f64) -> f64 {
        let mut sum = self.coefficients.first().map_or(0.0, |c| c.re);
        for (n, c) in self.coefficients.iter().enumerate().skip(1) {
            let phase = n as f64 * self.w_f * t;
            sum += 2.0 * (c.re * phase.cos() - c.im * phase.sin());
        }
        sum
    }
}

/// `f_n = (1/tau_f) int_0^tau_f F(t) e^{-i n w_f t} dt` for `n = 0..=n_max`.
pub fn fourier_coefficients<F>(force: F, tau_f: f64, n_max: usize, tol: &Tolerance) -> Result<ForceSpectrum>
where
    F: Fn(f64) -> f64,
{
    if !(tau_f.is_finite() && tau_f > 0.0) {
        return Err(Error::InvalidParameter(format!("tau_f must be positive, got {tau_f}")));
    }
    let w_f = TAU / tau_f;
    let mut coefficients = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = n as f64 * w_f;
        let re = integrate_1d(|t| force(t) * (k * t).cos(), 0.0, tau_f, tol)? / tau_f;
        let im = if n == 0 { 0.0 } else { -integrate_1d(|t| force(t) * (k * t).sin(), 0.0, tau_f, tol)? / tau_f };
        coefficients.push(Complex64::new(re, im));
    }
    ForceSpectrum::new(w_f, coefficients)
}

/// Coprime `(N, p)` with `tau_0 / tau_f = p / N`; the joint period is `N tau_0 = p tau_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commensurability {
    pub n_periods: u64,
    pub p: u64,
}

impl Commensurability {
    pub fn new(n_periods: u64, p: u64) -> Result<Self> {
        if n_periods == 0 || p == 0 {
            return Err(Error::InvalidParameter("N and p must be positive".into()));
        }
        if gcd(n_periods, p) != 1 {
            return Err(Error::InvalidParameter(format!("N = {n_periods} and p = {p} are not coprime")));
        }
        Ok(Self { n_periods, p })
    }

    /// Joint period `N tau_0`.
    pub fn joint_period(&self, params: &OscillatorParams) -> f64 {
        self.n_periods as f64 * params.period()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Searches the continued-fraction convergents `p/N` of `tau_0 / tau_f = w_f / w`
/// for one with `|N (tau_0/tau_f) - p| < tol` and `N <= 10^6`.
///
/// The mismatch is measured after `N` periods, i.e. as the drive phase slip
/// (in cycles) accumulated over the candidate joint period. `None` means
/// incommensurate at this tolerance.
pub fn commensurability(params: &OscillatorParams, w_f: f64, tol: f64) -> Option<Commensurability> {
    if !(w_f.is_finite() && w_f > 0.0) {
        return None;
    }
    let ratio = w_f / params.freq;
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut x = ratio;
    for _ in 0..64 {
        let a = x.floor();
        if a >= 1e15 {
            break;
        }
        let a_int = a as u64;
        let h_next = a_int.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a_int.checked_mul(k)?.checked_add(k_prev)?;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if k > MAX_COMMENSURATE_DENOMINATOR {
            return None;
        }
        if h >= 1 && (k as f64 * ratio - h as f64).abs() < tol {
            return Some(Commensurability { n_periods: k, p: h });
        }
        let frac = x - a;
        if frac <= f64::EPSILON * x.max(1.0) {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

/// Integrand convention for `delta(t)`.
///
/// `Lagrangian` is `d(delta)/dt = M w^2 x_p^2 / 2 - M x_p'^2 / 2`, the form that
/// makes the eigenfunctions solve the Schrodinger equation. `KineticDropped`
/// omits the second term and exists for negative-control tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DeltaVariant {
    #[default]
    Lagrangian,
    KineticDropped,
}

/// One term `Re(amp e^{i freq t})` of the real particular solution.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    amp: Complex64,
    freq: f64,
}

/// Particular solution `x_p(t)`: the driven response to a periodic force plus
/// an optional homogeneous admixture `D cos(wt + phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticularSolution {
    params: OscillatorParams,
    spectrum: Option<ForceSpectrum>,
    d: f64,
    phi: f64,
    modes: Vec<Mode>,
}

impl ParticularSolution {
    pub fn new(params: OscillatorParams, spectrum: Option<ForceSpectrum>, d: f64, phi: f64) -> Result<Self> {
        if !(d.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidParameter(format!("D and phi must be finite, got D = {d}, phi = {phi}")));
        }
        let w = params.freq;
        let mut modes = Vec::new();
        if let Some(spec) = &spectrum {
            for (n, f) in spec.coefficients().iter().enumerate() {
                if f.norm() == 0.0 {
                    continue;
                }
                let nu = n as f64 * spec.w_f();
                if (nu - w).abs() <= RESONANCE_REL_TOL * w {
                    return Err(Error::Resonance { mode: n as i64 });
                }
                let denom = params.mass * (w * w - nu * nu);
                let weight = if n == 0 { 1.0 } else { 2.0 };
                modes.push(Mode { amp: *f * (weight / denom), freq: nu });
            }
        }
        if d != 0.0 {
            modes.push(Mode { amp: Complex64::from_polar(d, phi), freq: w });
        }
        Ok(Self { params, spectrum, d, phi, modes })
    }

    /// `x_p = 0`.
    pub fn none(params: OscillatorParams) -> Self {
        Self { params, spectrum: None, d: 0.0, phi: 0.0, modes: Vec::new() }
    }

    /// Undriven oscillator with the fictitious solution `x_p = D cos(wt + phi)`.
    pub fn fictitious(params: OscillatorParams, d: f64, phi: f64) -> Result<Self> {
        Self::new(params, None, d, phi)
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn spectrum(&self) -> Option<&ForceSpectrum> {
        self.spectrum.as_ref()
    }

    /// True when a nonzero external force is present.
    pub fn is_driven(&self) -> bool {
        self.spectrum.as_ref().is_some_and(|s| !s.is_zero())
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    fn sum_modes(&self, t: f64, factor: impl Fn(f64) -> Complex64) -> f64 {
        self.modes
            .iter()
            .map(|m| (m.amp * factor(m.freq) * Complex64::from_polar(1.0, m.freq * t)).re)
            .sum()
    }

    pub fn x(&self, t: f64) -> f64 {
        self.sum_modes(t, |_| Complex64::new(1.0, 0.0))
    }

    pub fn x_dot(&self, t: f64) -> f64 {
        self.sum_modes(t, |nu| Complex64::new(0.0, nu))
    }

    pub fn x_ddot(&self, t: f64) -> f64 {
        self.sum_modes(t, |nu| Complex64::new(-nu * nu, 0.0))
    }

    /// External force driving this solution (zero when undriven).
    pub fn force(&self, t: f64) -> f64 {
        self.spectrum.as_ref().map_or(0.0, |s| s.force(t))
    }

    /// Closed-form `delta(t) = int_0^t (M w^2 x_p^2 / 2 - M x_p'^2 / 2) ds`.
    pub fn delta(&self, t: f64) -> f64 {
        self.delta_with(t, DeltaVariant::Lagrangian)
    }

    pub fn delta_with(&self, t: f64, variant: DeltaVariant) -> f64 {
        if self.modes.is_empty() {
            return 0.0;
        }
        let w2 = self.params.freq * self.params.freq;
        let half_m = 0.5 * self.params.mass;
        let potential = self.square_integral(t, |m| m.amp);
        match variant {
            DeltaVariant::Lagrangian => {
                let kinetic = self.square_integral(t, |m| m.amp * Complex64::new(0.0, m.freq));
                half_m * (w2 * potential - kinetic)
            }
            DeltaVariant::KineticDropped => half_m * w2 * potential,
        }
    }

    /// `int_0^t (Re sum_k a_k e^{i nu_k s})^2 ds`, exact.
    fn square_integral(&self, t: f64, amp: impl Fn(&Mode) -> Complex64) -> f64 {
        let mut total = 0.0;
        for mj in &self.modes {
            let aj = amp(mj);
            for mk in &self.modes {
                let ak = amp(mk);
                total += 0.5
                    * ((aj * ak * exp_integral(mj.freq + mk.freq, t)).re
                        + (aj * ak.conj() * exp_integral(mj.freq - mk.freq, t)).re);
            }
        }
        total
    }

    /// Checks `x_p(t + period) = x_p(t)` (and the velocity) at a few sample times.
    pub fn is_periodic(&self, period: f64, tol: f64) -> bool {
        let scale = 1.0 + self.modes.iter().map(|m| m.amp.norm() * (1.0 + m.freq)).sum::<f64>();
        sample_times(self.params.period()).all(|t| {
            (self.x(t + period) - self.x(t)).abs() <= tol * scale
                && (self.x_dot(t + period) - self.x_dot(t)).abs() <= tol * scale
        })
    }
}

/// `int_0^t e^{i lambda s} ds` without cancellation for small `lambda t`.
fn exp_integral(lambda: f64, t: f64) -> Complex64 {
    if lambda == 0.0 {
        return Complex64::new(t, 0.0);
    }
    let half = 0.5 * lambda * t;
    Complex64::new((lambda * t).sin() / lambda, 2.0 * half.sin().powi(2) / lambda)
}

/// Deterministic, irregular sample times spread over one period.
pub(crate) fn sample_times(period: f64) -> impl Iterator<Item = f64> {
    [0.0, 0.113, 0.271, 0.389, 0.502, 0.647, 0.781, 0.934].into_iter().map(move |s| s * period)
}

/// `delta(t)` by quadrature of its defining integrand.
pub fn delta_phase(xp: &ParticularSolution, t: f64, tol: &Tolerance) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
    }
    let m = xp.params.mass;
    let w2 = xp.params.freq * xp.params.freq;
    let integrand = |s: f64| 0.5 * m * w2 * xp.x(s).powi(2) - 0.5 * m * xp.x_dot(s).powi(2);
    if t >= 0.0 {
        Ok(integrate_1d(integrand, 0.0, t, tol)?)
    } else {
        Ok(-integrate_1d(integrand, t, 0.0, tol)?)
    }
}
