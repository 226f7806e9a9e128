//! Fourier-pseudospectral machinery for solitary waves of the
//! rotation-modified Benjamin equation
//!
//! ```text
//! (u_t + alpha u_x + f(u)_x - beta H u_xx - delta u_xxx)_x = gamma u
//! ```
//!
//! and its limiting cases (Ostrovsky for `beta = 0`, Benjamin for
//! `gamma = 0`, KdV for `beta = gamma = 0`, RMBO for `delta = 0`).
//!
//! The crate provides:
//!
//! - [`model`]: coefficients, dispersion symbols and closed-form bounds;
//! - [`spectral`]: the periodic grid and Fourier-multiplier operators;
//! - [`petviashvili`]: the fixed-point solver for solitary-wave profiles;
//! - [`invariants`]: discrete conserved quantities and the variational
//!   functionals;
//! - [`evolve`]: the exact linear propagator and an integrating-factor
//!   RK4 integrator;
//! - [`analysis`]: existence classification, parameter sweeps, tail-decay
//!   fits and Ostrovsky comparisons.

pub mod analysis;
pub mod error;
pub mod evolve;
pub mod invariants;
pub mod model;
pub mod petviashvili;
pub mod spectral;

pub use analysis::{
    beta_sweep, classify_existence, compare_ostrovsky, phase_portrait, speed_sweep,
    tail_decay_fit, tail_decay_fit_with, DecayFit, DecayFitOptions, ExistenceCase,
    ExistenceVerdict, OstrovskyComparison, SweepResult, SweepRow,
};
pub use error::{Error, Result};
pub use evolve::{evolve, linear_propagate, nonlinear_step, EvolutionConfig, Trajectory};
pub use invariants::{
    energy, functional_i, functional_k, h_norm, mass, momentum, InvariantSet,
};
pub use model::{ModelParams, WaveSpeed};
pub use petviashvili::{
    iterate_once, residual_norm, solve, stabilizing_factor, InitialGuess, SolverConfig,
    SolverReport, TerminationReason, WaveProfile,
};
pub use spectral::{Grid, RealField, SpectralField, DEFAULT_ZERO_MASS_TOL};
