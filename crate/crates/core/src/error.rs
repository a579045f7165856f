use thiserror::Error;

use crate::numerics::NumericsError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate homogeneous basis (Omega = M w C cos(beta) = {omega})")]
    DegenerateBasis { omega: f64 },
    #[error("homogeneous basis has negative Wronskian (Omega = {omega}); eigenfunctions are not normalizable")]
    ReversedOrientation { omega: f64 },
    #[error("resonant drive: mode {mode} has |n| w_f = w with nonzero coefficient")]
    Resonance { mode: i64 },
    #[error("geometric phase undefined: {0}")]
    PhaseUndefined(String),
    #[error("states belong to different representations")]
    RepresentationMismatch,
    #[error("floating-point overflow evaluating order {order} at {argument}")]
    Overflow { order: usize, argument: f64 },
    #[error("wavefunction is not quasi-periodic over the requested period (ratio spread {spread:.3e})")]
    NotQuasiPeriodic { spread: f64 },
    #[error("half-period phase requires x_p = 0, but a fictitious particular solution is present")]
    FictitiousSolutionPresent,
    #[error("no pi-periodic envelope: {0}")]
    NoPeriodicEnvelope(String),
    #[error("envelope reached non-positive value near t = {t}")]
    NonPositive { t: f64 },
    #[error("resonant denominator in order-{order} expansion at a = {a}")]
    ResonantDenominator { a: f64, order: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
