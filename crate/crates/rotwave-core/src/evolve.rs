//! Time evolution: the exact linear propagator and an integrating-factor
//! RK4 integrator for the full equation.
//!
//! In Fourier variables the equation reads
//!
//! ```text
//! d/dt u_hat(kappa) = -i m(kappa) u_hat(kappa) - i kappa N_hat(u)(kappa),
//! ```
//!
//! with the dispersion symbol `m` and `N(u) = f(u)`. The linear part is
//! diagonal and stiff (`delta kappa^3`, `gamma / kappa`), so it is solved
//! exactly by the factor `exp(-i m(kappa) t)` while the nonlinear term is
//! advanced with classical four-stage Runge-Kutta.

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::invariants::InvariantSet;
use crate::model::{ModelParams, WaveSpeed};
use crate::spectral::{Grid, RealField, SpectralField};

/// Time-stepping controls.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub final_time: f64,
    /// Snapshot stride in steps.
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt", "must be finite and > 0"));
        }
        if !(self.final_time.is_finite() && self.final_time >= 0.0) {
            return Err(Error::invalid("T", "must be finite and >= 0"));
        }
        if self.final_time > 0.0 {
            if self.dt > self.final_time {
                return Err(Error::invalid("dt", "must not exceed T"));
            }
            let steps = self.final_time / self.dt;
            if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
                return Err(Error::invalid(
                    "dt",
                    format!("T/dt = {steps} is not an integer step count"),
                ));
            }
        }
        if self.record_every < 1 {
            return Err(Error::invalid("record_every", "must be >= 1"));
        }
        Ok(())
    }

    /// Number of steps, rounding away the `T/dt` round-off.
    pub fn step_count(&self) -> usize {
        (self.final_time / self.dt).round() as usize
    }

    /// Stability-guided default step `0.1 h / max(1, |c_s - alpha|)`.
    pub fn default_dt(grid: &Grid, params: &ModelParams, speed: WaveSpeed) -> f64 {
        0.1 * grid.spacing() / (speed.value() - params.alpha).abs().max(1.0)
    }
}

/// Snapshots and invariant series of one evolution run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<RealField>,
    pub invariant_series: Vec<InvariantSet>,
    /// Index of the step at which the solution stopped being finite, when
    /// the run blew up; the recorded series covers the part before it.
    pub failed_step: Option<usize>,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.failed_step.is_none()
    }
}

/// Exact solution of the linearized equation: multiplies each coefficient
/// by `exp(-i m(kappa) t)`. Requires zero-mass input when `gamma > 0`.
pub fn linear_propagate(f: &RealField, params: &ModelParams, t: f64) -> Result<RealField> {
    if params.gamma > 0.0 {
        f.check_zero_mass(crate::spectral::DEFAULT_ZERO_MASS_TOL)?;
    }
    let mut spec = f.forward_transform();
    let wavenumbers: Vec<f64> = f.grid().wavenumbers().to_vec();
    for (i, c) in spec.coeffs_mut().iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -params.dispersion(wavenumbers[i]) * t);
    }
    // m is odd: drop the unpaired Nyquist mode.
    let nyquist = f.grid().nyquist_index();
    spec.coeffs_mut()[nyquist] = Complex64::new(0.0, 0.0);
    Ok(spec.inverse_transform())
}

/// Spectral workspace for the integrating-factor stepper.
struct Stepper {
    grid: Arc<Grid>,
    params: ModelParams,
    /// `exp(-i m(kappa) dt/2)`, zeroed at the Nyquist mode.
    half_exp: Vec<Complex64>,
    full_exp: Vec<Complex64>,
}

impl Stepper {
    fn new(grid: &Arc<Grid>, params: ModelParams, dt: f64) -> Self {
        let nyquist = grid.nyquist_index();
        let half_exp: Vec<Complex64> = grid
            .wavenumbers()
            .iter()
            .enumerate()
            .map(|(i, &kappa)| {
                if i == nyquist {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, -params.dispersion(kappa) * dt / 2.0)
                }
            })
            .collect();
        let full_exp = half_exp.iter().map(|e| e * e).collect();
        Stepper {
            grid: Arc::clone(grid),
            params,
            half_exp,
            full_exp,
        }
    }

    /// `N(u_hat) = -i kappa N_hat(u)`, dealiased.
    fn nonlinear(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let spec = SpectralField::from_coeffs(&self.grid, u_hat.to_vec()).expect("length");
        let u = spec.inverse_transform();
        let fu = u.map(|v| self.params.nonlinearity(v));
        let mut fu_hat = fu.forward_transform().dealias();
        for (i, c) in fu_hat.coeffs_mut().iter_mut().enumerate() {
            *c *= Complex64::new(0.0, -self.grid.wavenumbers()[i]);
        }
        fu_hat.coeffs().to_vec()
    }

    /// One integrating-factor RK4 step.
    fn step(&self, u_hat: &[Complex64], dt: f64) -> Vec<Complex64> {
        let n = u_hat.len();
        let k1 = self.nonlinear(u_hat);

        let mut stage: Vec<Complex64> = (0..n)
            .map(|i| self.half_exp[i] * (u_hat[i] + 0.5 * dt * k1[i]))
            .collect();
        let k2 = self.nonlinear(&stage);

        for i in 0..n {
            stage[i] = self.half_exp[i] * u_hat[i] + 0.5 * dt * k2[i];
        }
        let k3 = self.nonlinear(&stage);

        for i in 0..n {
            stage[i] = self.full_exp[i] * u_hat[i] + dt * self.half_exp[i] * k3[i];
        }
        let k4 = self.nonlinear(&stage);

        (0..n)
            .map(|i| {
                self.full_exp[i] * u_hat[i]
                    + dt / 6.0
                        * (self.full_exp[i] * k1[i]
                            + 2.0 * self.half_exp[i] * (k2[i] + k3[i])
                            + k4[i])
            })
            .collect()
    }
}

fn spectrum_is_finite(u_hat: &[Complex64]) -> bool {
    u_hat.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Advance the full equation by one step.
pub fn nonlinear_step(f: &RealField, params: &ModelParams, dt: f64) -> Result<RealField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be finite and > 0"));
    }
    if params.gamma > 0.0 {
        f.check_zero_mass(crate::spectral::DEFAULT_ZERO_MASS_TOL)?;
    }
    let stepper = Stepper::new(f.grid(), *params, dt);
    let u_hat = stepper.step(f.forward_transform().coeffs(), dt);
    if !spectrum_is_finite(&u_hat) {
        return Err(Error::StepFailure { step: 1 });
    }
    SpectralField::from_coeffs(f.grid(), u_hat).map(|s| s.inverse_transform())
}

/// Evolve an initial field, recording snapshots and invariants every
/// `record_every` steps (plus the initial and final states).
///
/// For `gamma > 0` the mean of the initial condition is projected out
/// once; the zero mode then stays identically zero. A blow-up mid-run is
/// recorded in [`Trajectory::failed_step`] and the partial trajectory is
/// returned.
pub fn evolve(
    initial: &RealField,
    params: &ModelParams,
    config: &EvolutionConfig,
) -> Result<Trajectory> {
    config.validate()?;
    params.validate()?;
    let initial = if params.gamma > 0.0 {
        initial.remove_mean()
    } else {
        initial.clone()
    };
    let grid = Arc::clone(initial.grid());
    let steps = config.step_count();
    let stepper = Stepper::new(&grid, *params, config.dt);

    let mut trajectory = Trajectory {
        times: Vec::new(),
        snapshots: Vec::new(),
        invariant_series: Vec::new(),
        failed_step: None,
    };
    let record = |t: f64, field: RealField, traj: &mut Trajectory| -> Result<()> {
        traj.invariant_series
            .push(InvariantSet::compute(&field, params)?);
        traj.times.push(t);
        traj.snapshots.push(field);
        Ok(())
    };

    record(0.0, initial.clone(), &mut trajectory)?;
    let mut u_hat = initial.forward_transform().coeffs().to_vec();
    for step in 1..=steps {
        u_hat = stepper.step(&u_hat, config.dt);
        if !spectrum_is_finite(&u_hat) {
            trajectory.failed_step = Some(step);
            return Ok(trajectory);
        }
        let last = step == steps;
        if step % config.record_every == 0 || last {
            let field = SpectralField::from_coeffs(&grid, u_hat.clone())?.inverse_transform();
            record(step as f64 * config.dt, field, &mut trajectory)?;
        }
    }
    Ok(trajectory)
}
