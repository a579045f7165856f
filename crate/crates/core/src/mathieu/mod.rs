//! The Mathieu oscillator `H = P^2/(2M) + (M/2)(a + 16 eps cos 2t) x^2`.
//!
//! With `rho = sqrt(Omega/M) rho~` the envelope obeys the Ermakov-Pinney
//! equation
//!
//! ```text
//! rho~'' + (a + 16 eps cos 2t) rho~ - 1/rho~^3 = 0
//! ```
//!
//! and, when `rho~` is pi-periodic, the geometric phase over one period is
//! `(n + 1/2) int_0^pi rho~'^2 dt`. `M` and `hbar` drop out of both, so they
//! are carried only for interface uniformity.

mod series;

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use series::{ce1_characteristic, ce1_series, ce1_series_derivatives, CosineSeries, RhoExpansion, MAX_ORDER};

use crate::error::{Error, Result};
use crate::numerics::{
    find_root, integrate_1d_points, solve_ivp, solve_ivp_with_output, NumericsError, RootSeed, Tolerance, Trajectory,
};

/// Period of the Mathieu coefficient `a + 16 eps cos 2t`.
pub const PERIOD: f64 = PI;
/// Default shooting seeds are only trusted this far from `a = 1, 4, 9`.
pub const RESONANCE_EXCLUSION: f64 = 0.05;
/// Half-width of the marginal band `||trace| - 2|` in [`stability_probe`].
pub const MARGINAL_BAND: f64 = 1e-6;
/// Periodicity required of a shot envelope, `|rho~(pi) - rho~(0)|` and `|rho~'(pi)|`.
pub const ENVELOPE_PERIODICITY_TOL: f64 = 1e-9;
/// Number of equal pieces the envelope trajectory is forced to land on.
const ENVELOPE_GRID: usize = 1024;
/// Sample count for sup-norm residuals over `[0, pi]`.
const RESIDUAL_SAMPLES: usize = 2001;

/// Parameters of the Mathieu oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuParams {
    pub a: f64,
    pub eps: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl MathieuParams {
    pub fn new(a: f64, eps: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
        }
        if !eps.is_finite() {
            return Err(Error::InvalidParameter(format!("eps must be finite, got {eps}")));
        }
        if !(mass.is_finite() && mass > 0.0 && hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("M and hbar must be positive, got M = {mass}, hbar = {hbar}")));
        }
        Ok(Self { a, eps, mass, hbar })
    }

    /// `M = hbar = 1`.
    pub fn unit(a: f64, eps: f64) -> Result<Self> {
        Self::new(a, eps, 1.0, 1.0)
    }

    /// `a + 16 eps cos 2t`.
    pub fn coefficient(&self, t: f64) -> f64 {
        self.a + 16.0 * self.eps * (2.0 * t).cos()
    }

    /// Distance from `a` to the nearest of `1, 4, 9`.
    pub fn resonance_distance(&self) -> f64 {
        [1.0, 4.0, 9.0].iter().map(|r| (self.a - r).abs()).fold(f64::INFINITY, f64::min)
    }
}

fn tight_tolerance() -> Tolerance {
    Tolerance { abs_tol: 1e-14, rel_tol: 1e-12, max_iterations: 1_000_000 }
}

/// Solves `x'' + (a + 16 eps cos 2t) x = 0` from `(x0, v0)` at `t = 0`.
pub fn integrate_mathieu(mp: &MathieuParams, x0: f64, v0: f64, t_end: f64) -> Result<Trajectory> {
    let rhs = |t: f64, y: &[f64]| vec![y[1], -mp.coefficient(t) * y[0]];
    Ok(solve_ivp(rhs, 0.0, &[x0, v0], t_end, &tight_tolerance())?)
}

/// Floquet classification by the monodromy trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

/// Monodromy of the Mathieu equation over one period `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetData {
    /// Columns are the images of `(1, 0)` and `(0, 1)`.
    pub monodromy: [[f64; 2]; 2],
    pub trace: f64,
    pub det: f64,
    pub classification: Stability,
}

/// Integrates the two unit initial conditions over `[0, pi]` and classifies
/// the monodromy by `|trace|` against 2.
pub fn stability_probe(mp: &MathieuParams) -> Result<FloquetData> {
    let first = integrate_mathieu(mp, 1.0, 0.0, PERIOD)?;
    let second = integrate_mathieu(mp, 0.0, 1.0, PERIOD)?;
    let (c1, c2) = (first.final_state(), second.final_state());
    let monodromy = [[c1[0], c2[0]], [c1[1], c2[1]]];
    let trace = c1[0] + c2[1];
    let det = c1[0] * c2[1] - c2[0] * c1[1];
    let classification = if (trace.abs() - 2.0).abs() < MARGINAL_BAND {
        Stability::Marginal
    } else if trace.abs() < 2.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Ok(FloquetData { monodromy, trace, det, classification })
}

/// `sum_{j <= order} eps^j rho~_j(t)`.
pub fn perturbative_rho(mp: &MathieuParams, order: usize, t: f64) -> Result<f64> {
    Ok(RhoExpansion::new(mp.a, order)?.truncated(mp.eps, order).eval(t))
}

/// Which Ermakov-Pinney equation a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PinneyForm {
    /// `rho'' + (a + 16 eps cos 2t) rho - 1/rho^3`.
    #[default]
    Standard,
    /// Same with `+ 1/rho^3`; a negative control for the residual checks.
    SignFault,
}

/// Residual of the envelope equation for a cosine-series envelope at `t`.
pub fn ermakov_residual(mp: &MathieuParams, rho: &CosineSeries, form: PinneyForm, t: f64) -> f64 {
    let r = rho.eval(t);
    let sign = match form {
        PinneyForm::Standard => -1.0,
        PinneyForm::SignFault => 1.0,
    };
    rho.eval_ddot(t) + mp.coefficient(t) * r + sign / r.powi(3)
}

/// Sup-norm over `[0, pi]` of the residual of the order-`order` series.
pub fn perturbative_residual(mp: &MathieuParams, order: usize, form: PinneyForm) -> Result<f64> {
    let rho = RhoExpansion::new(mp.a, order)?.truncated(mp.eps, order);
    Ok((0..RESIDUAL_SAMPLES)
        .map(|i| {
            let t = PERIOD * i as f64 / (RESIDUAL_SAMPLES - 1) as f64;
            ermakov_residual(mp, &rho, form, t).abs()
        })
        .fold(0.0, f64::max))
}

fn pinney_rhs(mp: MathieuParams) -> impl Fn(f64, &[f64]) -> Vec<f64> {
    move |t, y| {
        if y[0] <= 0.0 {
            return vec![f64::NAN, f64::NAN];
        }
        vec![y[1], -mp.coefficient(t) * y[0] + y[0].powi(-3)]
    }
}

fn pinney_trajectory(mp: &MathieuParams, rho0: f64, t_end: f64, output: &[f64]) -> Result<Trajectory> {
    if !(rho0.is_finite() && rho0 > 0.0) {
        return Err(Error::InvalidParameter(format!("rho~(0) must be positive, got {rho0}")));
    }
    solve_ivp_with_output(pinney_rhs(*mp), 0.0, &[rho0, 0.0], t_end, &tight_tolerance(), output).map_err(|e| match e {
        NumericsError::NonFinite { t } => Error::NonPositive { t },
        other => other.into(),
    })
}

/// Solves the Ermakov-Pinney equation from `rho~(0) = rho0`, `rho~'(0) = 0`.
pub fn ermakov_pinney_numeric(mp: &MathieuParams, rho0: f64, t_end: f64) -> Result<Trajectory> {
    pinney_trajectory(mp, rho0, t_end, &[])
}

/// A pi-periodic solution of the Ermakov-Pinney equation.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicEnvelope {
    pub rho0: f64,
    /// The envelope over `[0, pi]`.
    pub trajectory: Trajectory,
}

impl PeriodicEnvelope {
    /// `(rho~, rho~')` at any `t`, using periodicity.
    pub fn sample(&self, t: f64) -> (f64, f64) {
        let reduced = t.rem_euclid(PERIOD).min(self.trajectory.final_time());
        let (y, _) = self.trajectory.sample(reduced).expect("reduced time lies in [0, pi]");
        (y[0], y[1])
    }

    /// `int_0^pi rho~'^2 dt`. The stored trajectory is interpolated by cubic
    /// Hermite pieces, so integrating piece by piece is exact for the interpolant.
    pub fn derivative_square_integral(&self) -> Result<f64> {
        let tol = Tolerance { abs_tol: 1e-16, rel_tol: 1e-13, max_iterations: 100_000 };
        Ok(integrate_1d_points(|t| self.sample(t).1.powi(2), &self.trajectory.times, &tol)?)
    }
}

/// Default shooting seed: the first-order series at `t = 0`, or `a^{-1/4}`
/// within [`RESONANCE_EXCLUSION`] of `a = 1, 4, 9`.
pub fn default_seed(mp: &MathieuParams) -> f64 {
    if mp.resonance_distance() < RESONANCE_EXCLUSION {
        mp.a.powf(-0.25)
    } else {
        perturbative_rho(mp, 1, 0.0).unwrap_or_else(|_| mp.a.powf(-0.25))
    }
}

/// [`shoot_periodic_envelope_from`] with [`default_seed`].
pub fn shoot_periodic_envelope(mp: &MathieuParams) -> Result<PeriodicEnvelope> {
    shoot_periodic_envelope_from(mp, default_seed(mp))
}

/// Finds the even pi-periodic envelope.
///
/// The envelope equation is symmetric under `t -> -t` and `t -> pi - t`, so an
/// even solution with `rho~'(pi/2) = 0` is pi-periodic. The search is a 1-D
/// root find on `rho~(0)` for that condition; periodicity at `pi` is then
/// checked directly. Parameters inside an instability tongue are refused up
/// front: no positive periodic envelope exists there.
pub fn shoot_periodic_envelope_from(mp: &MathieuParams, seed: f64) -> Result<PeriodicEnvelope> {
    let floquet = stability_probe(mp)?;
    if floquet.classification == Stability::Unstable {
        return Err(Error::NoPeriodicEnvelope(format!(
            "(a, eps) = ({}, {}) is Floquet-unstable, |trace| = {}",
            mp.a,
            mp.eps,
            floquet.trace.abs()
        )));
    }
    if !(seed.is_finite() && seed > 0.0) {
        return Err(Error::InvalidParameter(format!("shooting seed must be positive, got {seed}")));
    }
    let rho0 = if mp.eps == 0.0 { mp.a.powf(-0.25) } else { shoot_rho0(mp, seed)? };

    let grid: Vec<f64> = (1..ENVELOPE_GRID).map(|i| PERIOD * i as f64 / ENVELOPE_GRID as f64).collect();
    let trajectory = pinney_trajectory(mp, rho0, PERIOD, &grid)?;
    let end = trajectory.final_state();
    let mismatch = (end[0] - rho0).abs().max(end[1].abs());
    if mismatch > ENVELOPE_PERIODICITY_TOL * rho0.max(1.0) {
        return Err(Error::NoPeriodicEnvelope(format!("shot envelope misses periodicity by {mismatch:.3e}")));
    }
    Ok(PeriodicEnvelope { rho0, trajectory })
}

fn shoot_rho0(mp: &MathieuParams, seed: f64) -> Result<f64> {
    let miss = |r: f64| match pinney_trajectory(mp, r, FRAC_PI_2, &[]) {
        Ok(traj) => traj.final_state()[1],
        Err(_) => f64::NAN,
    };
    let mut bracket = None;
    for spread in [0.01, 0.03, 0.1, 0.3, 1.0, 3.0] {
        let (lo, hi) = (seed / (1.0 + spread), seed * (1.0 + spread));
        let (g_lo, g_hi) = (miss(lo), miss(hi));
        if g_lo.is_finite() && g_hi.is_finite() && g_lo.signum() != g_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::NoPeriodicEnvelope(format!("no sign change of rho~'(pi/2) around seed {seed}")));
    };
    let tol = Tolerance { abs_tol: 1e-15, rel_tol: 1e-15, max_iterations: 200 };
    find_root(miss, RootSeed::Bracket(lo, hi), &tol)
        .map_err(|e| Error::NoPeriodicEnvelope(format!("shooting did not converge: {e}")))
}

/// `eps^2 8 (n + 1/2) pi / (sqrt(a) (a - 1)^2)`, the leading-order law
/// for the Mathieu geometric phase.
///
/// Integrating `(eps rho~_1')^2` over `[0, pi]` gives four times this value;
/// see [`mathieu_phase_series`].
pub fn mathieu_phase_perturbative(mp: &MathieuParams, n: usize) -> Result<f64> {
    if (mp.a - 1.0).abs() <= 1e-12 {
        return Err(Error::ResonantDenominator { a: mp.a, order: 1 });
    }
    Ok(mp.eps * mp.eps * 8.0 * (n as f64 + 0.5) * PI / (mp.a.sqrt() * (mp.a - 1.0).powi(2)))
}

/// `(n + 1/2) int_0^pi rho'^2 dt` for the series envelope truncated at `order`,
/// integrated exactly mode by mode.
pub fn mathieu_phase_series(mp: &MathieuParams, n: usize, order: usize) -> Result<f64> {
    let rho = RhoExpansion::new(mp.a, order)?.truncated(mp.eps, order);
    Ok((n as f64 + 0.5) * rho.derivative_square_integral())
}

/// `(n + 1/2) int_0^pi rho~'^2 dt` along the shot periodic envelope.
pub fn mathieu_phase_numeric(mp: &MathieuParams, n: usize) -> Result<f64> {
    let envelope = shoot_periodic_envelope(mp)?;
    Ok((n as f64 + 0.5) * envelope.derivative_square_integral()?)
}

/// Least-squares coefficients `c` of `values ~ sum_i c_i eps^{powers_i}`.
///
/// Columns are normalised before the SVD solve so that small `eps` does not
/// make the design matrix look rank deficient.
pub fn power_law_fit(eps: &[f64], values: &[f64], powers: &[i32]) -> Result<Vec<f64>> {
    let (m, k) = (eps.len(), powers.len());
    if m != values.len() || m < k || k == 0 {
        return Err(Error::InvalidParameter(format!("need at least {k} matching samples, got {m}")));
    }
    let mut design = DMatrix::from_fn(m, k, |i, j| eps[i].powi(powers[j]));
    let scales: Vec<f64> = design.column_iter().map(|c| c.norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        design.column_mut(j).unscale_mut(*s);
    }
    let rhs = DVector::from_column_slice(values);
    let solution = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidParameter(format!("least-squares fit failed: {e}")))?;
    Ok(solution.iter().zip(&scales).map(|(c, s)| c / s).collect())
}
