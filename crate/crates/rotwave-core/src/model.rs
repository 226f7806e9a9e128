//! Model coefficients, dispersion symbols and closed-form quantities.
//!
//! The equation under study is
//!
//! ```text
//! (u_t + alpha u_x + f(u)_x - beta H u_xx - delta u_xxx)_x = gamma u
//! ```
//!
//! with the Hilbert transform `H`, rotation coefficient `gamma >= 0`,
//! third-order dispersion `delta >= 0` and a homogeneous nonlinearity
//! `f(u) = u^p / p` of degree `p >= 2`. Setting `beta = 0` gives the
//! Ostrovsky equation, `gamma = 0` the Benjamin equation and
//! `beta = gamma = 0` KdV.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Coefficient set of the model equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Advection coefficient. Removable by a Galilean shift; any real value
    /// is accepted.
    pub alpha: f64,
    /// Coefficient of the nonlocal dispersion `H u_xx`.
    pub beta: f64,
    /// Rotation coefficient, `>= 0`.
    pub gamma: f64,
    /// Third-order dispersion coefficient, `>= 0`.
    pub delta: f64,
    /// Homogeneity degree of the nonlinearity, `>= 2`. `p = 2` is the
    /// quadratic case `f(u) = u^2 / 2`.
    pub p: u32,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, p: u32) -> Result<Self> {
        let params = ModelParams {
            alpha,
            beta,
            gamma,
            delta,
            p,
        };
        params.validate()?;
        Ok(params)
    }

    /// Quadratic-nonlinearity model (`p = 2`).
    pub fn quadratic(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(alpha, beta, gamma, delta, 2)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.gamma < 0.0 {
            return Err(Error::invalid("gamma", "must be >= 0"));
        }
        if self.delta < 0.0 {
            return Err(Error::invalid("delta", "must be >= 0"));
        }
        if self.p < 2 {
            return Err(Error::invalid("p", "nonlinearity degree must be >= 2"));
        }
        Ok(())
    }

    /// The nonlinearity `f(u) = u^p / p`, homogeneous of degree `p`.
    pub fn nonlinearity(&self, u: f64) -> f64 {
        u.powi(self.p as i32) / f64::from(self.p)
    }

    /// Antiderivative `F` of the nonlinearity with `F(0) = 0`, i.e.
    /// `F(u) = u^(p+1) / (p (p+1))`, homogeneous of degree `p + 1`.
    pub fn nonlinearity_antiderivative(&self, u: f64) -> f64 {
        let p = f64::from(self.p);
        u.powi(self.p as i32 + 1) / (p * (p + 1.0))
    }

    /// Linear dispersion symbol
    /// `m(k) = gamma/k + alpha k - beta k|k| + delta k^3`, with `m(0) = 0`.
    /// Odd in `k`.
    pub fn dispersion(&self, k: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        self.gamma / k + self.alpha * k - self.beta * k * k.abs() + self.delta * k.powi(3)
    }

    /// Phase velocity `m(k)/k = alpha + gamma/k^2 + delta k^2 - beta |k|`.
    ///
    /// Singular at `k = 0` whenever `gamma > 0`; rejected for any `k = 0`.
    pub fn phase_velocity(&self, k: f64) -> Result<f64> {
        if k == 0.0 {
            return Err(Error::invalid("k", "phase velocity is singular at k = 0"));
        }
        Ok(self.alpha + self.gamma / (k * k) + self.delta * k * k - self.beta * k.abs())
    }

    /// Fourier multiplier of the profile equation,
    /// `P(kappa) = kappa^2 (c_s - alpha) + beta |kappa|^3 - delta kappa^4 - gamma`.
    ///
    /// `P(kappa) / kappa^2` is the symbol of the linear operator
    /// `L = (c_s - alpha) + beta H d/dx + delta d^2/dx^2 + gamma dx^-2`,
    /// so `P(kappa) = kappa^2 (c_s - phase_velocity(kappa))`. Even in `kappa`,
    /// with `P(0) = -gamma`.
    pub fn profile_symbol(&self, speed: WaveSpeed, kappa: f64) -> f64 {
        let c = speed.value() - self.alpha;
        let k2 = kappa * kappa;
        k2 * c + self.beta * k2 * kappa.abs() - self.delta * k2 * k2 - self.gamma
    }

    /// Lower bound `-2 beta + 8 gamma^(1/4) delta^(3/4)` on the curvature
    /// `|phi''(k)|` of the non-advective dispersion phase
    /// `phi(k) = gamma/k - beta k|k| + delta k^3`.
    ///
    /// Requires `gamma, delta > 0` and either `beta < 0` or
    /// `0 < beta < 4 gamma^(1/4) delta^(3/4)`.
    pub fn dispersion_curvature_bound(&self) -> Result<f64> {
        if self.gamma <= 0.0 {
            return Err(Error::HypothesisNotSatisfied {
                condition: "gamma > 0",
            });
        }
        if self.delta <= 0.0 {
            return Err(Error::HypothesisNotSatisfied {
                condition: "delta > 0",
            });
        }
        let scale = self.gamma.powf(0.25) * self.delta.powf(0.75);
        if self.beta == 0.0 || self.beta >= 4.0 * scale {
            return Err(Error::HypothesisNotSatisfied {
                condition: "beta < 0 or 0 < beta < 4 gamma^(1/4) delta^(3/4)",
            });
        }
        Ok(-2.0 * self.beta + 8.0 * scale)
    }
}

/// Propagation speed of a traveling wave; nonzero by definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WaveSpeed(f64);

impl WaveSpeed {
    pub fn new(c_s: f64) -> Result<Self> {
        if !c_s.is_finite() || c_s == 0.0 {
            return Err(Error::invalid("c_s", "wave speed must be finite and nonzero"));
        }
        Ok(WaveSpeed(c_s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}
