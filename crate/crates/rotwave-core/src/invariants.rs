//! Discrete conserved quantities and variational functionals.
//!
//! All quadratures are the plain node sum times the grid spacing, which is
//! spectrally exact for smooth periodic integrands.

use serde::Serialize;

use crate::error::Result;
use crate::model::{ModelParams, WaveSpeed};
use crate::spectral::{RealField, DEFAULT_ZERO_MASS_TOL};

/// Mass, momentum, energy and the solitary-wave space norm of a field.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvariantSet {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// `||dx f|| + ||Dx^(1/2) f|| + ||dx^-1 f||`; absent when the field has
    /// nonzero mass and the antiderivative is undefined.
    pub h_norm: Option<f64>,
}

impl InvariantSet {
    /// Evaluate all four quantities. The energy requires zero mass when
    /// `gamma > 0`; the norm is reported only for zero-mass fields.
    pub fn compute(f: &RealField, params: &ModelParams) -> Result<Self> {
        Ok(InvariantSet {
            mass: mass(f),
            momentum: momentum(f),
            energy: energy(f, params)?,
            h_norm: h_norm(f).ok(),
        })
    }
}

/// Integral of the field, `h * sum_j f(x_j)`.
pub fn mass(f: &RealField) -> f64 {
    f.grid().spacing() * f.values().iter().sum::<f64>()
}

/// Momentum `V(f) = integral of f^2 / 2`.
pub fn momentum(f: &RealField) -> f64 {
    f.grid().spacing() * f.values().iter().map(|v| v * v / 2.0).sum::<f64>()
}

/// Energy (the Hamiltonian)
/// `E(f) = integral of alpha f^2/2 + F(f) - (beta/2) f H f_x
///        + (delta/2) f_x^2 + (gamma/2) (dx^-1 f)^2`.
///
/// The rotational term requires zero-mass input when `gamma > 0`.
pub fn energy(f: &RealField, params: &ModelParams) -> Result<f64> {
    let fx = f.derivative(1);
    let hfx = fx.hilbert();
    let rot = if params.gamma != 0.0 {
        Some(f.antiderivative()?)
    } else {
        None
    };
    let h = f.grid().spacing();
    let mut total = 0.0;
    for j in 0..f.grid().len() {
        let u = f.values()[j];
        let mut e = params.alpha * u * u / 2.0 + params.nonlinearity_antiderivative(u)
            - params.beta / 2.0 * u * hfx.values()[j]
            + params.delta / 2.0 * fx.values()[j] * fx.values()[j];
        if let Some(rot) = &rot {
            e += params.gamma / 2.0 * rot.values()[j] * rot.values()[j];
        }
        total += e;
    }
    Ok(h * total)
}

/// Quadratic functional
/// `I(u) = integral of -(c_s - alpha) u^2 - beta u H u_x
///        + gamma (dx^-1 u)^2 + delta u_x^2`.
///
/// Mode-wise this is `2L sum (phase_velocity(kappa) - c_s) |u_hat(kappa)|^2`,
/// so it is positive exactly when every excited mode is non-resonant.
pub fn functional_i(u: &RealField, params: &ModelParams, speed: WaveSpeed) -> Result<f64> {
    let ux = u.derivative(1);
    let hux = ux.hilbert();
    let rot = if params.gamma != 0.0 {
        Some(u.antiderivative()?)
    } else {
        None
    };
    let c = speed.value() - params.alpha;
    let h = u.grid().spacing();
    let mut total = 0.0;
    for j in 0..u.grid().len() {
        let v = u.values()[j];
        let mut e = -c * v * v - params.beta * v * hux.values()[j]
            + params.delta * ux.values()[j] * ux.values()[j];
        if let Some(rot) = &rot {
            e += params.gamma * rot.values()[j] * rot.values()[j];
        }
        total += e;
    }
    Ok(h * total)
}

/// Nonlinear functional `K(u) = -(p+1) integral of F(u)`, homogeneous of
/// degree `p + 1`.
pub fn functional_k(u: &RealField, params: &ModelParams) -> f64 {
    let h = u.grid().spacing();
    -(f64::from(params.p) + 1.0)
        * h
        * u.values()
            .iter()
            .map(|&v| params.nonlinearity_antiderivative(v))
            .sum::<f64>()
}

/// Solitary-wave space norm
/// `||u||_H = ||dx u|| + ||Dx^(1/2) u|| + ||dx^-1 u||`.
///
/// Requires zero-mass input for the antiderivative term.
pub fn h_norm(u: &RealField) -> Result<f64> {
    u.check_zero_mass(DEFAULT_ZERO_MASS_TOL)?;
    Ok(u.derivative(1).l2_norm()
        + u.half_derivative().l2_norm()
        + u.antiderivative()?.l2_norm())
}
