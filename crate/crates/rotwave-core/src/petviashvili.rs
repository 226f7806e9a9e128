//! Petviashvili fixed-point iteration for solitary-wave profiles.
//!
//! A traveling wave `u = phi(x - c_s t)` of the model equation satisfies
//!
//! ```text
//! L phi = (c_s - alpha) phi + beta H phi' + delta phi'' + gamma dx^-2 phi
//!       = f(phi) = N(phi).
//! ```
//!
//! Multiplying the Fourier transform of both sides by `kappa^2` turns the
//! linear operator into the polynomial multiplier
//! `P(kappa) = kappa^2 (c_s - alpha) + beta |kappa|^3 - delta kappa^4 - gamma`
//! and the discrete system into `P(kappa) phi_hat = kappa^2 N_hat(phi)`.
//! The iteration rescales each update by a power of the stabilizing factor
//!
//! ```text
//! m = sum_k P(k) |phi_hat(k)|^2 / sum_k k^2 N_hat(phi)(k) conj(phi_hat(k)),
//! phi_hat <- m^q (kappa^2 / P(kappa)) N_hat(phi)(kappa),
//! ```
//!
//! with `q = p / (p - 1)` so that exact solutions are neutral fixed points
//! (`m = 1` there). For `gamma > 0` the zero mode is pinned to zero (the
//! zero-mass condition); for `gamma = 0` it is updated with the continuous
//! limit `kappa^2 / P(kappa) -> 1 / (c_s - alpha)`.

use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{ModelParams, WaveSpeed};
use crate::spectral::{Grid, RealField, SpectralField};

pub const DEFAULT_TOL_RESIDUAL: f64 = 1e-10;
pub const DEFAULT_TOL_STAB: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;

/// Modes where `|P(kappa)|` falls below this are treated as resonant.
pub const SYMBOL_FLOOR: f64 = 1e-12;

/// A residual beyond this aborts the iteration as divergent.
const DIVERGENCE_RESIDUAL: f64 = 1e6;

/// Starting profile for the iteration.
#[derive(Debug, Clone)]
pub enum InitialGuess {
    /// `amplitude * sech^2(width * x)`; `width` is the reciprocal length
    /// scale (the KdV soliton for `c_s - alpha = -1`, `delta = 1` is
    /// amplitude `-3`, width `1/2`).
    SechSquared { amplitude: f64, width: f64 },
    /// `-amplitude * sech(width * x)`, the negative single-bump data that
    /// steers the iteration towards multi-pulse profiles for `beta < 0`.
    NegativeSech { amplitude: f64, width: f64 },
    /// `amplitude * exp(-(width * x)^2)`.
    Gaussian { amplitude: f64, width: f64 },
    /// Arbitrary starting data on the solve grid.
    Custom(RealField),
}

impl InitialGuess {
    /// Default seed: a sech-squared bump with the KdV-soliton scaling
    /// `amplitude = 3 |c_s - alpha|`, `width = sqrt(|c_s - alpha| / delta) / 2`.
    pub fn default_for(params: &ModelParams, speed: WaveSpeed) -> InitialGuess {
        let c = (speed.value() - params.alpha).abs();
        let width = if params.delta > 0.0 {
            (c / params.delta).sqrt() / 2.0
        } else {
            c.sqrt() / 2.0
        };
        InitialGuess::SechSquared {
            amplitude: 3.0 * c,
            width,
        }
    }

    pub fn materialize(&self, grid: &Arc<Grid>) -> Result<RealField> {
        let field = match self {
            InitialGuess::SechSquared { amplitude, width } => {
                RealField::from_fn(grid, |x| amplitude / (width * x).cosh().powi(2))
            }
            InitialGuess::NegativeSech { amplitude, width } => {
                RealField::from_fn(grid, |x| -amplitude / (width * x).cosh())
            }
            InitialGuess::Gaussian { amplitude, width } => {
                RealField::from_fn(grid, |x| amplitude * (-(width * x) * (width * x)).exp())
            }
            InitialGuess::Custom(f) => {
                if !f.grid().same_grid(grid) {
                    return Err(Error::GridMismatch {
                        expected: grid.len(),
                        actual: f.grid().len(),
                    });
                }
                f.clone()
            }
        };
        if !field.is_finite() {
            return Err(Error::NonFinite {
                context: "initial guess",
            });
        }
        Ok(field)
    }
}

/// Iteration controls.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Stop when the profile-equation residual falls below this.
    pub tol_residual: f64,
    /// Stop when `|m - 1|` falls below this.
    pub tol_stab: f64,
    pub max_iter: usize,
    /// Starting data; `None` selects [`InitialGuess::default_for`].
    pub initial_guess: Option<InitialGuess>,
    /// Apply the 2/3 rule to the transformed nonlinearity.
    pub dealias: bool,
    /// Project the mean out of the initial guess when `gamma > 0`.
    pub zero_mass_projection: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_residual: DEFAULT_TOL_RESIDUAL,
            tol_stab: DEFAULT_TOL_STAB,
            max_iter: DEFAULT_MAX_ITER,
            initial_guess: None,
            dealias: true,
            zero_mass_projection: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual.is_finite() && self.tol_residual > 0.0) {
            return Err(Error::invalid("tol_residual", "must be > 0"));
        }
        if !(self.tol_stab.is_finite() && self.tol_stab > 0.0) {
            return Err(Error::invalid("tol_stab", "must be > 0"));
        }
        if self.max_iter < 1 {
            return Err(Error::invalid("max_iter", "must be >= 1"));
        }
        Ok(())
    }
}

/// A solitary-wave profile together with the data that produced it.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    field: RealField,
    params: ModelParams,
    speed: WaveSpeed,
    residual: f64,
}

impl WaveProfile {
    /// Wrap a field, computing its profile-equation residual. For
    /// `gamma > 0` the field must satisfy the zero-mass condition.
    pub fn new(field: RealField, params: ModelParams, speed: WaveSpeed) -> Result<Self> {
        params.validate()?;
        if !field.is_finite() {
            return Err(Error::NonFinite {
                context: "wave profile",
            });
        }
        let residual = residual_norm(&field, &params, speed)?;
        Ok(WaveProfile {
            field,
            params,
            speed,
            residual,
        })
    }

    pub fn field(&self) -> &RealField {
        &self.field
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn speed(&self) -> WaveSpeed {
        self.speed
    }

    /// Discrete `L^2` norm of `L phi - N(phi)` at construction time.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn into_field(self) -> RealField {
        self.field
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TerminationReason {
    ResidualMet,
    StabFactorMet,
    MaxIter,
    Diverged,
    SymbolSingular,
}

/// Run record of one [`solve`] call.
#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    pub converged: bool,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub stab_factor_history: Vec<f64>,
    pub termination_reason: TerminationReason,
}

/// Residual of the profile equation by direct operator application,
/// `|| (c_s - alpha) phi + beta H phi' + delta phi'' + gamma dx^-2 phi
///    - f(phi) ||`.
///
/// This path never touches `P(kappa)` and therefore cross-checks the
/// symbol used by the iteration. For `gamma > 0` the zero-mass constraint
/// replaces the zero-mode equation, and on a periodic domain the profile
/// equation holds up to the additive constant `mean(f(phi))` (the
/// evolution equation only sees `f(u)` through its derivative); the
/// residual therefore measures the zero-mean part.
pub fn residual_norm(field: &RealField, params: &ModelParams, speed: WaveSpeed) -> Result<f64> {
    let c = speed.value() - params.alpha;
    let mut lin = field.scaled(c);
    if params.beta != 0.0 {
        lin = &lin + &field.derivative(1).hilbert().scaled(params.beta);
    }
    if params.delta != 0.0 {
        lin = &lin + &field.derivative(2).scaled(params.delta);
    }
    if params.gamma != 0.0 {
        let second_antiderivative = field.antiderivative()?.antiderivative()?;
        lin = &lin + &second_antiderivative.scaled(params.gamma);
    }
    let nonlinear = field.map(|u| params.nonlinearity(u));
    let mut residual = &lin - &nonlinear;
    if params.gamma > 0.0 {
        residual = residual.remove_mean();
    }
    Ok(residual.l2_norm())
}

/// The stabilizing factor
/// `m = sum P(k) |phi_hat|^2 / Re sum k^2 N_hat(phi)(k) conj(phi_hat(k))`.
///
/// Homogeneous of degree `1 - p` in the profile; equals 1 at any solution
/// of the discrete system.
pub fn stabilizing_factor(phi: &RealField, params: &ModelParams, speed: WaveSpeed) -> Result<f64> {
    let phi_hat = phi.forward_transform();
    let nl_hat = phi.map(|u| params.nonlinearity(u)).forward_transform();
    factor_from_spectra(&phi_hat, &nl_hat, params, speed)
}

fn factor_from_spectra(
    phi_hat: &SpectralField,
    nl_hat: &SpectralField,
    params: &ModelParams,
    speed: WaveSpeed,
) -> Result<f64> {
    let grid = phi_hat.grid();
    let mut numerator = 0.0;
    let mut denominator = Complex64::new(0.0, 0.0);
    for (i, &kappa) in grid.wavenumbers().iter().enumerate() {
        numerator += params.profile_symbol(speed, kappa) * phi_hat.coeffs()[i].norm_sqr();
        denominator += kappa * kappa * nl_hat.coeffs()[i] * phi_hat.coeffs()[i].conj();
    }
    if denominator.norm() <= 1e-14 * (numerator.abs() + 1.0) {
        return Err(Error::DegenerateProfile);
    }
    // The denominator is real up to round-off for Hermitian spectra.
    debug_assert!(
        denominator.im.abs() <= 1e-10 * denominator.norm(),
        "stabilizing-factor denominator has imaginary part {}",
        denominator.im
    );
    Ok(numerator / denominator.re)
}

/// Check that no grid mode resonates with the linear symbol.
fn check_profile_symbol(params: &ModelParams, speed: WaveSpeed, grid: &Grid) -> Result<()> {
    if params.gamma == 0.0 {
        let c = speed.value() - params.alpha;
        if c.abs() <= SYMBOL_FLOOR {
            return Err(Error::SymbolSingular {
                kappa: 0.0,
                value: c.abs(),
            });
        }
    }
    for &kappa in grid.wavenumbers() {
        if kappa == 0.0 {
            continue;
        }
        let value = params.profile_symbol(speed, kappa).abs();
        if value <= SYMBOL_FLOOR {
            return Err(Error::SymbolSingular { kappa, value });
        }
    }
    Ok(())
}

fn petviashvili_step(
    phi: &RealField,
    params: &ModelParams,
    speed: WaveSpeed,
    config: &SolverConfig,
) -> Result<(f64, RealField)> {
    check_profile_symbol(params, speed, phi.grid())?;
    let phi_hat = phi.forward_transform();
    let mut nl_hat = phi.map(|u| params.nonlinearity(u)).forward_transform();
    if config.dealias {
        nl_hat = nl_hat.dealias();
    }
    let m = factor_from_spectra(&phi_hat, &nl_hat, params, speed)?;
    let p = f64::from(params.p);
    let m_pow = m.powf(p / (p - 1.0));
    let c = speed.value() - params.alpha;
    let wavenumbers: Vec<f64> = phi.grid().wavenumbers().to_vec();
    for (i, coeff) in nl_hat.coeffs_mut().iter_mut().enumerate() {
        let kappa = wavenumbers[i];
        if i == 0 {
            *coeff = if params.gamma > 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                m_pow / c * *coeff
            };
        } else {
            let symbol = params.profile_symbol(speed, kappa);
            *coeff *= m_pow * kappa * kappa / symbol;
        }
    }
    Ok((m, nl_hat.inverse_transform()))
}

/// One Petviashvili update of the profile.
pub fn iterate_once(
    phi: &RealField,
    params: &ModelParams,
    speed: WaveSpeed,
    config: &SolverConfig,
) -> Result<RealField> {
    config.validate()?;
    params.validate()?;
    petviashvili_step(phi, params, speed, config).map(|(_, next)| next)
}

/// Iterate from the configured initial guess until the residual or the
/// stabilizing-factor criterion is met.
///
/// Non-convergence is reported, not raised: the returned report carries the
/// termination reason and the profile holds the last finite iterate.
pub fn solve(
    params: &ModelParams,
    speed: WaveSpeed,
    grid: &Arc<Grid>,
    config: &SolverConfig,
) -> Result<(WaveProfile, SolverReport)> {
    config.validate()?;
    params.validate()?;
    let guess = match &config.initial_guess {
        Some(g) => g.materialize(grid)?,
        None => InitialGuess::default_for(params, speed).materialize(grid)?,
    };
    let mut phi = if params.gamma > 0.0 && config.zero_mass_projection {
        guess.remove_mean()
    } else {
        guess
    };

    let mut residual_history = Vec::new();
    let mut stab_factor_history = Vec::new();

    if check_profile_symbol(params, speed, grid).is_err() {
        let profile = WaveProfile::new(phi, *params, speed)?;
        return Ok((
            profile,
            SolverReport {
                converged: false,
                iterations: 0,
                residual_history,
                stab_factor_history,
                termination_reason: TerminationReason::SymbolSingular,
            },
        ));
    }

    let mut reason = TerminationReason::MaxIter;
    let mut converged = false;
    for _ in 0..config.max_iter {
        let (m, next) = match petviashvili_step(&phi, params, speed, config) {
            Ok(step) => step,
            Err(Error::DegenerateProfile) => {
                reason = TerminationReason::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        if !m.is_finite() || !next.is_finite() {
            reason = TerminationReason::Diverged;
            break;
        }
        let residual = residual_norm(&next, params, speed)?;
        if !residual.is_finite() {
            reason = TerminationReason::Diverged;
            break;
        }
        stab_factor_history.push(m);
        residual_history.push(residual);
        if residual > DIVERGENCE_RESIDUAL {
            reason = TerminationReason::Diverged;
            break;
        }
        phi = next;
        if residual <= config.tol_residual {
            reason = TerminationReason::ResidualMet;
            converged = true;
            break;
        }
        if (m - 1.0).abs() <= config.tol_stab {
            reason = TerminationReason::StabFactorMet;
            converged = true;
            break;
        }
    }

    let iterations = residual_history.len();
    let profile = WaveProfile::new(phi, *params, speed)?;
    Ok((
        profile,
        SolverReport {
            converged,
            iterations,
            residual_history,
            stab_factor_history,
            termination_reason: reason,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kdv_params() -> ModelParams {
        ModelParams::new(0.0, 0.0, 0.0, 1.0, 2).unwrap()
    }

    /// `-3 sech^2(x/2)` solves `-phi + phi'' = phi^2 / 2`.
    fn kdv_soliton(grid: &Arc<Grid>) -> RealField {
        RealField::from_fn(grid, |x| -3.0 / (x / 2.0).cosh().powi(2))
    }

    #[test]
    fn config_validation() {
        let mut config = SolverConfig::default();
        assert!(config.validate().is_ok());
        config.max_iter = 0;
        assert!(config.validate().is_err());
        config = SolverConfig {
            tol_residual: -1.0,
            ..SolverConfig::default()
        };
        assert!(config.validate().is_err());
    }

    #[test]
    fn guess_shapes() {
        let grid = Grid::new(10.0, 64).unwrap();
        let sech2 = InitialGuess::SechSquared {
            amplitude: 2.0,
            width: 0.5,
        }
        .materialize(&grid)
        .unwrap();
        assert!(sech2.max() > 1.9 && sech2.min() >= 0.0);
        let nsech = InitialGuess::NegativeSech {
            amplitude: 2.0,
            width: 0.5,
        }
        .materialize(&grid)
        .unwrap();
        assert!(nsech.min() < -1.9 && nsech.max() <= 0.0);
        let other_grid = Grid::new(10.0, 128).unwrap();
        let custom = InitialGuess::Custom(RealField::zeros(&other_grid));
        assert!(custom.materialize(&grid).is_err());
    }

    #[test]
    fn zero_profile_is_degenerate() {
        let grid = Grid::new(50.0, 256).unwrap();
        let zero = RealField::zeros(&grid);
        let speed = WaveSpeed::new(-1.0).unwrap();
        assert!(matches!(
            stabilizing_factor(&zero, &kdv_params(), speed),
            Err(Error::DegenerateProfile)
        ));
        assert!(iterate_once(&zero, &kdv_params(), speed, &SolverConfig::default()).is_err());
        assert_eq!(residual_norm(&zero, &kdv_params(), speed).unwrap(), 0.0);
    }

    #[test]
    fn stabilizing_factor_scaling_homogeneity() {
        // Degree p = 2: numerator quadratic, denominator cubic, so
        // m(s phi) = m(phi) / s.
        let grid = Grid::new(50.0, 512).unwrap();
        let phi = RealField::from_fn(&grid, |x| 1.5 / (x / 3.0).cosh().powi(2));
        let params = ModelParams::new(0.0, 1.0, 1.0, 1.0, 2).unwrap();
        let speed = WaveSpeed::new(0.5).unwrap();
        let m1 = stabilizing_factor(&phi, &params, speed).unwrap();
        let m2 = stabilizing_factor(&phi.scaled(2.0), &params, speed).unwrap();
        assert!((m2 - m1 / 2.0).abs() <= 1e-12 * m1.abs());
    }

    #[test]
    fn exact_soliton_is_fixed_point() {
        let grid = Grid::new(100.0, 2048).unwrap();
        let params = kdv_params();
        let speed = WaveSpeed::new(-1.0).unwrap();
        let soliton = kdv_soliton(&grid);

        let m = stabilizing_factor(&soliton, &params, speed).unwrap();
        assert!((m - 1.0).abs() <= 1e-8, "m = {m}");

        let next = iterate_once(&soliton, &params, speed, &SolverConfig::default()).unwrap();
        assert!((&next - &soliton).max_abs() <= 1e-8);

        assert!(residual_norm(&soliton, &params, speed).unwrap() <= 1e-8);
    }

    #[test]
    fn symbol_singularity_is_reported() {
        // gamma = 0 and c_s = alpha makes the zero-mode rule singular.
        let grid = Grid::new(50.0, 256).unwrap();
        let params = ModelParams::new(1.0, 0.0, 0.0, 1.0, 2).unwrap();
        let speed = WaveSpeed::new(1.0).unwrap();
        let (_, report) = solve(&params, speed, &grid, &SolverConfig::default()).unwrap();
        assert!(!report.converged);
        assert_eq!(report.termination_reason, TerminationReason::SymbolSingular);
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn histories_match_iteration_count() {
        let grid = Grid::new(100.0, 1024).unwrap();
        let params = kdv_params();
        let speed = WaveSpeed::new(-1.0).unwrap();
        let (profile, report) = solve(&params, speed, &grid, &SolverConfig::default()).unwrap();
        assert!(report.converged);
        assert_eq!(report.residual_history.len(), report.iterations);
        assert_eq!(report.stab_factor_history.len(), report.iterations);
        assert!(profile.residual() <= DEFAULT_TOL_RESIDUAL);
        assert_eq!(
            profile.residual(),
            *report.residual_history.last().unwrap()
        );
    }
}
