//! Numerical kernel: adaptive quadrature, embedded Runge-Kutta integration
//! and bracketed root finding.
//!
//! Everything downstream uses these routines as the independent oracle for
//! the closed-form phase expressions, so they are kept free of any physics.

mod ode;
mod quadrature;
mod roots;

pub use ode::{solve_ivp, solve_ivp_with_output, Trajectory, BLOW_UP_THRESHOLD};
pub use quadrature::{integrate_1d, integrate_1d_points};
pub use roots::{find_root, RootSeed};

use thiserror::Error;

/// Error controls shared by the quadrature, ODE and root-finding routines.
///
/// `max_iterations` is the subdivision budget for quadrature, the step budget
/// for the ODE solver and the iteration budget for root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iterations: usize) -> Result<Self, NumericsError> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(NumericsError::InvalidInput(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(NumericsError::InvalidInput(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_iterations == 0 {
            return Err(NumericsError::InvalidInput("iteration budget must be at least 1".into()));
        }
        Ok(Self { abs_tol, rel_tol, max_iterations })
    }

    /// Defaults for 1-D quadrature.
    pub const fn quadrature() -> Self {
        Self { abs_tol: 1e-11, rel_tol: 1e-10, max_iterations: 2000 }
    }

    /// Defaults for initial-value integration.
    pub const fn ode() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_iterations: 1_000_000 }
    }

    /// Defaults for root finding.
    pub const fn root() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-14, max_iterations: 200 }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("no convergence within {budget} iterations (estimated error {estimate:.3e})")]
    NonConvergence { budget: usize, estimate: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("bracket [{lo}, {hi}] does not change sign")]
    NoBracket { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
