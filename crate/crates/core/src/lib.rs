//! Geometric and dynamical phases of the simple harmonic oscillator, the
//! periodically driven oscillator and the perturbative Mathieu oscillator.
//!
//! Closed-form phase expressions live next to independent numerical routes
//! (quadrature of the defining integrals, ODE integration, wavefunction-level
//! checks) so that each formula can be cross-checked at run time.

pub mod classical;
pub mod cli;
mod error;
pub mod mathieu;
pub mod numerics;
pub mod phase;
pub mod verify;
pub mod wavefunction;

pub use classical::{
    commensurability, delta_phase, fourier_coefficients, Commensurability, DeltaVariant, ForceSpectrum,
    HomogeneousBasis, OscillatorParams, ParticularSolution,
};
pub use error::{Error, Result};
pub use phase::{reduce_angle, PhaseResult};
pub use wavefunction::{hermite, EigenState, Representation, Superposition, WaveFunction};
