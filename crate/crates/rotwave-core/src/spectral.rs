//! Periodic collocation grid and Fourier-multiplier operators.
//!
//! Fields live on a uniform grid over `[-L, L)` with an even number of
//! points. Spectral coefficients are the interpolant coefficients
//! `c_j` of `f(x) = sum_j c_j exp(i kappa_j x)` with physical wavenumbers
//! `kappa_j = pi j / L`, `j = -N/2 .. N/2 - 1`, stored in FFT order.
//!
//! Operators with odd symbols (odd-order derivatives, the Hilbert
//! transform, the antiderivative) zero the Nyquist mode `j = -N/2`: it has
//! no Hermitian partner and would otherwise break realness.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Default relative tolerance on the mean for operators that require
/// zero-mass input.
pub const DEFAULT_ZERO_MASS_TOL: f64 = 1e-10;

/// Uniform periodic grid on `[-L, L)` with cached FFT plans.
pub struct Grid {
    half_length: f64,
    n: usize,
    nodes: Vec<f64>,
    wavenumbers: Vec<f64>,
    forward_plan: Arc<dyn Fft<f64>>,
    inverse_plan: Arc<dyn Fft<f64>>,
}

impl Grid {
    /// Build a grid with half-length `L > 0` and an even number of
    /// collocation points `n >= 8`.
    pub fn new(half_length: f64, n: usize) -> Result<Arc<Self>> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::invalid("L", "half-length must be finite and > 0"));
        }
        if n < 8 {
            return Err(Error::invalid("N", "grid must have at least 8 points"));
        }
        if n % 2 != 0 {
            return Err(Error::invalid("N", format!("grid size must be even, got {n}")));
        }
        let h = 2.0 * half_length / n as f64;
        let nodes = (0..n).map(|j| -half_length + j as f64 * h).collect();
        let wavenumbers = (0..n)
            .map(|i| {
                let j = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
                PI * j as f64 / half_length
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Grid {
            half_length,
            n,
            nodes,
            wavenumbers,
            forward_plan: planner.plan_fft_forward(n),
            inverse_plan: planner.plan_fft_inverse(n),
        }))
    }

    /// Domain half-length `L`.
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Number of collocation points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `h = 2L / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    /// Node positions `x_j = -L + j h`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Physical wavenumbers in FFT storage order (`0, 1, .., N/2-1, -N/2,
    /// .., -1`, scaled by `pi / L`).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Storage index of the unpaired Nyquist mode `j = -N/2`.
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Signed mode index of storage slot `i`.
    fn mode_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn same_grid(&self, other: &Grid) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("half_length", &self.half_length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_grid(other)
    }
}

fn check_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a.same_grid(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch {
            expected: a.len(),
            actual: b.len(),
        })
    }
}

/// Real-valued samples of a field on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl RealField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        RealField {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    /// Sample a function at the grid nodes.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        RealField {
            grid: Arc::clone(grid),
            values: grid.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    /// Wrap a value vector; the length must match the grid and every entry
    /// must be finite.
    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "field values",
            });
        }
        Ok(RealField {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Arithmetic mean of the samples (`mass / 2L`).
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Discrete `L^2` norm `sqrt(h sum f_j^2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        RealField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<RealField> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(RealField {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> RealField {
        self.map(|v| s * v)
    }

    /// Subtract the mean, making the field exactly zero-mass.
    pub fn remove_mean(&self) -> RealField {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// Relative zero-mass check: `|mean| <= tol * ||f||`.
    pub fn check_zero_mass(&self, tol: f64) -> Result<()> {
        let mean = self.mean();
        let bound = tol * self.l2_norm();
        if mean.abs() <= bound {
            Ok(())
        } else {
            Err(Error::ZeroMassViolation {
                mean,
                tol,
                bound,
            })
        }
    }

    /// Forward transform to interpolant coefficients.
    pub fn forward_transform(&self) -> SpectralField {
        let n = self.grid.len();
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.grid.forward_plan.process(&mut buf);
        let scale = 1.0 / n as f64;
        for (i, c) in buf.iter_mut().enumerate() {
            // (-1)^j phase shift from x_0 = -L, plus 1/N normalization.
            let sign = if i % 2 == 0 { scale } else { -scale };
            *c *= sign;
        }
        SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs: buf,
        }
    }

    /// Spectral derivative of the given order (1..=4): multiplies
    /// coefficients by `(i kappa)^order`.
    pub fn derivative(&self, order: u32) -> RealField {
        assert!((1..=4).contains(&order), "derivative order must be 1..=4");
        let odd = order % 2 == 1;
        self.apply_multiplier(odd, |kappa| {
            Complex64::new(0.0, kappa).powu(order)
        })
    }

    /// Hilbert transform: multiplier `-i sign(kappa)` with `sign(0) = 0`.
    pub fn hilbert(&self) -> RealField {
        self.apply_multiplier(true, |kappa| Complex64::new(0.0, -kappa.signum()))
    }

    /// Antiderivative with multiplier `1 / (i kappa)` and zero mode set to
    /// zero. Requires zero-mass input (default tolerance).
    pub fn antiderivative(&self) -> Result<RealField> {
        self.antiderivative_with_tol(DEFAULT_ZERO_MASS_TOL)
    }

    /// [`RealField::antiderivative`] with an explicit zero-mass tolerance.
    pub fn antiderivative_with_tol(&self, tol: f64) -> Result<RealField> {
        self.check_zero_mass(tol)?;
        Ok(self.apply_multiplier(true, |kappa| {
            if kappa == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / kappa)
            }
        }))
    }

    /// Half-order derivative with the even real symbol `|kappa|^(1/2)`.
    pub fn half_derivative(&self) -> RealField {
        self.apply_multiplier(false, |kappa| Complex64::new(kappa.abs().sqrt(), 0.0))
    }

    /// Circular translation by `dx` via the phase shift
    /// `exp(-i kappa dx)` (exact for resolved modes).
    pub fn translate(&self, dx: f64) -> RealField {
        self.apply_multiplier(true, |kappa| Complex64::from_polar(1.0, -kappa * dx))
    }

    fn apply_multiplier(
        &self,
        zero_nyquist: bool,
        symbol: impl Fn(f64) -> Complex64,
    ) -> RealField {
        let mut spec = self.forward_transform();
        for (i, c) in spec.coeffs.iter_mut().enumerate() {
            *c *= symbol(self.grid.wavenumbers[i]);
        }
        if zero_nyquist {
            spec.coeffs[self.grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        }
        spec.inverse_transform()
    }
}

impl std::ops::Add for &RealField {
    type Output = RealField;
    fn add(self, rhs: &RealField) -> RealField {
        self.zip_with(rhs, |a, b| a + b).expect("grid mismatch in +")
    }
}

impl std::ops::Sub for &RealField {
    type Output = RealField;
    fn sub(self, rhs: &RealField) -> RealField {
        self.zip_with(rhs, |a, b| a - b).expect("grid mismatch in -")
    }
}

/// Complex interpolant coefficients of a real field, Hermitian-symmetric
/// within round-off.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Coefficients in FFT storage order, aligned with
    /// [`Grid::wavenumbers`].
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Inverse transform; the imaginary round-off residue is discarded.
    pub fn inverse_transform(&self) -> RealField {
        let mut buf: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { *c } else { -*c })
            .collect();
        self.grid.inverse_plan.process(&mut buf);
        RealField {
            grid: Arc::clone(&self.grid),
            values: buf.iter().map(|c| c.re).collect(),
        }
    }

    /// Two-thirds-rule dealiasing: zero every coefficient with signed mode
    /// index `|j| > N/3`. Idempotent.
    pub fn dealias(&self) -> SpectralField {
        let cutoff = self.grid.len() as i64 / 3;
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if self.grid.mode_index(i).abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest Hermitian-symmetry defect `|c(-kappa) - conj(c(kappa))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.len();
        let mut worst = self.coeffs[0].im.abs().max(self.coeffs[n / 2].im.abs());
        for j in 1..n / 2 {
            let d = (self.coeffs[n - j] - self.coeffs[j].conj()).norm();
            worst = worst.max(d);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_128() -> Arc<Grid> {
        Grid::new(4.0, 128).unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = Grid::new(2.5, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert!((g.spacing() * 64.0 - 5.0).abs() < 1e-15);
        assert_eq!(g.nodes().len(), 64);
        assert_eq!(g.wavenumbers().len(), 64);
        assert!((g.nodes()[0] + 2.5).abs() < 1e-15);
        // kappa spacing pi / L.
        assert!((g.wavenumbers()[1] - PI / 2.5).abs() < 1e-15);
        assert!((g.wavenumbers()[63] + PI / 2.5).abs() < 1e-13);
        assert!(Grid::new(2.5, 63).is_err());
        assert!(Grid::new(0.0, 64).is_err());
        assert!(Grid::new(2.5, 4).is_err());
    }

    #[test]
    fn constant_field_transforms_to_dc_mode() {
        let g = grid_128();
        let f = RealField::from_fn(&g, |_| 1.0);
        let spec = f.forward_transform();
        assert!((spec.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for c in &spec.coeffs()[1..] {
            assert!(c.norm() < 1e-12);
        }
    }

    #[test]
    fn pure_mode_transforms_to_two_coefficients() {
        let g = grid_128();
        let k1 = PI / g.half_length();
        let f = RealField::from_fn(&g, |x| (k1 * x).cos());
        let spec = f.forward_transform();
        for (i, c) in spec.coeffs().iter().enumerate() {
            if i == 1 || i == g.len() - 1 {
                assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-13, "mode {i}: {c}");
            } else {
                assert!(c.norm() < 1e-13, "mode {i}: {c}");
            }
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = grid_128();
        // Deterministic pseudo-random samples.
        let f = RealField::from_fn(&g, |x| (3.1 * x).sin() + 0.3 * (7.9 * x + 1.0).cos());
        let back = f.forward_transform().inverse_transform();
        let err = (&f - &back).max_abs();
        assert!(err <= 1e-12 * f.max_abs());
    }

    #[test]
    fn derivative_of_pure_modes() {
        let g = grid_128();
        let kappa = 3.0 * PI / g.half_length();
        let f = RealField::from_fn(&g, |x| (kappa * x).sin());
        let expected = RealField::from_fn(&g, |x| kappa * (kappa * x).cos());
        assert!((&f.derivative(1) - &expected).max_abs() < 1e-10);

        let f = RealField::from_fn(&g, |x| (kappa * x).cos());
        let expected = RealField::from_fn(&g, |x| -kappa * kappa * (kappa * x).cos());
        assert!((&f.derivative(2) - &expected).max_abs() < 1e-10);

        let constant = RealField::from_fn(&g, |_| 2.0);
        assert!(constant.derivative(1).max_abs() < 1e-13);
    }

    #[test]
    fn hilbert_on_pure_modes() {
        let g = grid_128();
        let kappa = 2.0 * PI / g.half_length();
        let cos = RealField::from_fn(&g, |x| (kappa * x).cos());
        let sin = RealField::from_fn(&g, |x| (kappa * x).sin());
        assert!((&cos.hilbert() - &sin).max_abs() < 1e-10);
        assert!((&sin.hilbert() - &cos.scaled(-1.0)).max_abs() < 1e-10);
        let constant = RealField::from_fn(&g, |_| 5.0);
        assert!(constant.hilbert().max_abs() < 1e-13);
    }

    #[test]
    fn antiderivative_on_pure_modes() {
        let g = grid_128();
        let kappa = 5.0 * PI / g.half_length();
        let cos = RealField::from_fn(&g, |x| (kappa * x).cos());
        let expected = RealField::from_fn(&g, |x| (kappa * x).sin() / kappa);
        assert!((&cos.antiderivative().unwrap() - &expected).max_abs() < 1e-12);

        let sin = RealField::from_fn(&g, |x| (kappa * x).sin());
        let expected = RealField::from_fn(&g, |x| -(kappa * x).cos() / kappa);
        assert!((&sin.antiderivative().unwrap() - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn antiderivative_rejects_nonzero_mean() {
        let g = grid_128();
        let f = RealField::from_fn(&g, |x| 1.0 + (PI * x / 4.0).cos());
        assert!(matches!(
            f.antiderivative(),
            Err(Error::ZeroMassViolation { .. })
        ));
    }

    #[test]
    fn derivative_inverts_antiderivative() {
        let g = grid_128();
        let k0 = PI / g.half_length();
        let f = RealField::from_fn(&g, |x| (3.0 * k0 * x).sin() + 0.2 * (7.0 * k0 * x).cos())
            .remove_mean();
        let back = f.antiderivative().unwrap().derivative(1);
        assert!((&f - &back).max_abs() < 1e-10);
    }

    #[test]
    fn half_derivative_on_pure_mode() {
        let g = grid_128();
        let kappa = 4.0 * PI / g.half_length();
        let cos = RealField::from_fn(&g, |x| (kappa * x).cos());
        let expected = cos.scaled(kappa.abs().sqrt());
        assert!((&cos.half_derivative() - &expected).max_abs() < 1e-10);
        let constant = RealField::from_fn(&g, |_| 3.0);
        assert!(constant.half_derivative().max_abs() < 1e-13);
    }

    #[test]
    fn dealias_zeroes_top_third_and_is_idempotent() {
        let g = grid_128();
        let low = RealField::from_fn(&g, |x| (PI * x / 4.0).cos());
        let spec = low.forward_transform().dealias();
        assert!((&spec.inverse_transform() - &low).max_abs() < 1e-12);

        // Pure top-third mode is annihilated.
        let hi_kappa = 60.0 * PI / g.half_length();
        let hi = RealField::from_fn(&g, |x| (hi_kappa * x).cos());
        assert!(hi.forward_transform().dealias().inverse_transform().max_abs() < 1e-12);

        let f = RealField::from_fn(&g, |x| (13.0 * x).sin() * (1.0 + x * x));
        let once = f.forward_transform().dealias();
        let twice = once.dealias();
        let diff: f64 = once
            .coeffs()
            .iter()
            .zip(twice.coeffs())
            .map(|(a, b)| (a - b).norm())
            .sum();
        assert_eq!(diff, 0.0);
    }

    #[test]
    fn translate_shifts_nodes() {
        let g = grid_128();
        let kappa = 2.0 * PI / g.half_length();
        let f = RealField::from_fn(&g, |x| (kappa * x).cos());
        let shifted = f.translate(0.7);
        let expected = RealField::from_fn(&g, |x| (kappa * (x - 0.7)).cos());
        assert!((&shifted - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn transform_coefficients_are_hermitian() {
        let g = grid_128();
        let f = RealField::from_fn(&g, |x| (1.3 * x).sin() + 0.4 * (6.7 * x).cos() - 0.1);
        assert!(f.forward_transform().hermitian_defect() < 1e-14);
    }
}
