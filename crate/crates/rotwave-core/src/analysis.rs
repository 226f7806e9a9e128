//! Existence classification, parameter sweeps, tail-decay fitting and
//! Ostrovsky comparisons.

use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{ModelParams, WaveSpeed};
use crate::petviashvili::{solve, InitialGuess, SolverConfig, SolverReport, WaveProfile};
use crate::spectral::{Grid, RealField};

/// Which admissibility condition a parameter set matches.
///
/// With `c = c_s - alpha` and `c* = 2 sqrt(gamma delta)`:
/// I: `beta < 0, c < 0`; II: `beta < 0, 0 < c < c*`;
/// III: `beta > 0, c <= -beta^2/(4 delta)`;
/// IV: `beta > 0, 4 delta - beta > 0, beta^3 < gamma (4 delta - beta)^2,
/// 0 < c < z_+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExistenceCase {
    None,
    I,
    II,
    III,
    IV,
}

/// Outcome of the solitary-wave admissibility test.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExistenceVerdict {
    pub admissible: bool,
    pub matched_case: ExistenceCase,
    /// Speed threshold `c* = 2 sqrt(gamma delta)`.
    pub c_star: f64,
    /// Case-IV speed bound; present for `beta > 0`.
    pub z_plus: Option<f64>,
    /// Discriminant `A = 4 delta - beta`.
    pub a: f64,
    /// Discriminant `B = beta^3 - gamma (4 delta - beta)^2`.
    pub b: f64,
    /// Whether the phase-velocity curve admits non-resonant solitary
    /// waves: `beta < 0`, or `A > 0` and `B < 0`.
    pub resonance_free: bool,
}

/// Case-IV speed bound
/// `z_+ = (1/2)(-beta (1 + beta/(4 delta))
///        + (4 delta - beta) sqrt(gamma/delta + (beta/(4 delta))^2))`.
///
/// Tends to `c*` as `beta -> 0+`.
pub fn z_plus(params: &ModelParams) -> f64 {
    let b4d = params.beta / (4.0 * params.delta);
    0.5 * (-params.beta * (1.0 + b4d)
        + (4.0 * params.delta - params.beta) * (params.gamma / params.delta + b4d * b4d).sqrt())
}

/// Classify the parameter set against the four admissibility conditions,
/// matching the first that holds. Requires `gamma, delta > 0`.
pub fn classify_existence(params: &ModelParams, speed: WaveSpeed) -> Result<ExistenceVerdict> {
    params.validate()?;
    if params.gamma <= 0.0 {
        return Err(Error::invalid("gamma", "existence classification requires gamma > 0"));
    }
    if params.delta <= 0.0 {
        return Err(Error::invalid("delta", "existence classification requires delta > 0"));
    }
    let beta = params.beta;
    let c = speed.value() - params.alpha;
    let c_star = 2.0 * (params.gamma * params.delta).sqrt();
    let z_plus_value = if beta > 0.0 { Some(z_plus(params)) } else { None };
    let a = 4.0 * params.delta - beta;
    let b = beta.powi(3) - params.gamma * a * a;

    let matched_case = if beta < 0.0 && c < 0.0 {
        ExistenceCase::I
    } else if beta < 0.0 && 0.0 < c && c < c_star {
        ExistenceCase::II
    } else if beta > 0.0 && c <= -beta * beta / (4.0 * params.delta) {
        ExistenceCase::III
    } else if beta > 0.0
        && a > 0.0
        && beta.powi(3) < params.gamma * a * a
        && 0.0 < c
        && c < z_plus_value.expect("beta > 0")
    {
        ExistenceCase::IV
    } else {
        ExistenceCase::None
    };

    Ok(ExistenceVerdict {
        admissible: matched_case != ExistenceCase::None,
        matched_case,
        c_star,
        z_plus: z_plus_value,
        a,
        b,
        resonance_free: beta < 0.0 || (a > 0.0 && b < 0.0),
    })
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub u_max: f64,
    pub u_min: f64,
    pub converged: bool,
    pub residual: f64,
}

/// Rows of a sweep, ordered by parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows whose solve converged.
    pub fn converged_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.converged)
    }

    pub fn any_converged(&self) -> bool {
        self.rows.iter().any(|r| r.converged)
    }
}

fn row_from_outcome(param: f64, outcome: Result<(WaveProfile, SolverReport)>) -> SweepRow {
    match outcome {
        Ok((profile, report)) => SweepRow {
            param,
            u_max: profile.field().max(),
            u_min: profile.field().min(),
            converged: report.converged,
            residual: profile.residual(),
        },
        Err(_) => SweepRow {
            param,
            u_max: f64::NAN,
            u_min: f64::NAN,
            converged: false,
            residual: f64::NAN,
        },
    }
}

fn sorted_params(values: &[f64], name: &'static str) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::invalid(name, "sweep values must be nonempty"));
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid(name, "sweep values must be finite"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(sorted)
}

/// Solve once per speed, recording the excursions of each profile.
///
/// With `warm_start` the sweep runs sequentially, seeding each solve with
/// the previous converged profile; otherwise rows solve independently in
/// parallel. Per-row failures are recorded, not raised.
pub fn speed_sweep(
    params: &ModelParams,
    speeds: &[f64],
    grid: &Arc<Grid>,
    config: &SolverConfig,
    warm_start: bool,
) -> Result<SweepResult> {
    let speeds = sorted_params(speeds, "speeds")?;
    let solve_at = |c_s: f64, cfg: &SolverConfig| -> Result<(WaveProfile, SolverReport)> {
        solve(params, WaveSpeed::new(c_s)?, grid, cfg)
    };
    let rows = if warm_start {
        let mut rows = Vec::with_capacity(speeds.len());
        let mut previous: Option<RealField> = None;
        for &c_s in &speeds {
            let mut cfg = config.clone();
            if let Some(seed) = &previous {
                cfg.initial_guess = Some(InitialGuess::Custom(seed.clone()));
            }
            let outcome = solve_at(c_s, &cfg);
            if let Ok((profile, report)) = &outcome {
                if report.converged {
                    previous = Some(profile.field().clone());
                }
            }
            rows.push(row_from_outcome(c_s, outcome));
        }
        rows
    } else {
        speeds
            .par_iter()
            .map(|&c_s| row_from_outcome(c_s, solve_at(c_s, config)))
            .collect()
    };
    Ok(SweepResult { rows })
}

/// Solve once per `beta` value at fixed speed. `beta = 0` rows are plain
/// Ostrovsky solves.
pub fn beta_sweep(
    params: &ModelParams,
    betas: &[f64],
    speed: WaveSpeed,
    grid: &Arc<Grid>,
    config: &SolverConfig,
    warm_start: bool,
) -> Result<SweepResult> {
    let betas = sorted_params(betas, "betas")?;
    let solve_at = |beta: f64, cfg: &SolverConfig| -> Result<(WaveProfile, SolverReport)> {
        let row_params = ModelParams { beta, ..*params };
        row_params.validate()?;
        solve(&row_params, speed, grid, cfg)
    };
    let rows = if warm_start {
        let mut rows = Vec::with_capacity(betas.len());
        let mut previous: Option<RealField> = None;
        for &beta in &betas {
            let mut cfg = config.clone();
            if let Some(seed) = &previous {
                cfg.initial_guess = Some(InitialGuess::Custom(seed.clone()));
            }
            let outcome = solve_at(beta, &cfg);
            if let Ok((profile, report)) = &outcome {
                if report.converged {
                    previous = Some(profile.field().clone());
                }
            }
            rows.push(row_from_outcome(beta, outcome));
        }
        rows
    } else {
        betas
            .par_iter()
            .map(|&beta| row_from_outcome(beta, solve_at(beta, config)))
            .collect()
    };
    Ok(SweepResult { rows })
}

/// Algebraic tail model `|phi(X)| ~ prefactor * |X|^(-exponent)` fitted to
/// the envelope of the profile tails.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub fit_window: (f64, f64),
    /// Coefficient of determination of the log-log fit, clamped to [0, 1].
    pub goodness: f64,
}

/// Fit controls; `window` bounds are distances from the wave core.
#[derive(Debug, Clone, Copy)]
pub struct DecayFitOptions {
    pub window: Option<(f64, f64)>,
    /// Envelope points below this are treated as round-off.
    pub envelope_floor: f64,
    pub min_points: usize,
}

impl Default for DecayFitOptions {
    fn default() -> Self {
        DecayFitOptions {
            window: None,
            envelope_floor: 1e-12,
            min_points: 4,
        }
    }
}

/// Fit the tail envelope with default options: window from five
/// half-max widths out to 80% of the half-length.
pub fn tail_decay_fit(profile: &WaveProfile) -> Result<DecayFit> {
    tail_decay_fit_with(profile, &DecayFitOptions::default())
}

pub fn tail_decay_fit_with(profile: &WaveProfile, opts: &DecayFitOptions) -> Result<DecayFit> {
    let field = profile.field();
    let grid = field.grid();
    let n = grid.len();
    let length = grid.half_length();
    let values = field.values();

    // Center on the dominant extremum.
    let peak = (0..n)
        .max_by(|&a, &b| {
            values[a]
                .abs()
                .partial_cmp(&values[b].abs())
                .expect("finite")
        })
        .expect("nonempty");
    let peak_abs = values[peak].abs();
    if peak_abs <= opts.envelope_floor {
        return Err(Error::FitInfeasible {
            reason: "profile is numerically zero".into(),
        });
    }

    // Distance from the core along the periodic grid.
    let centered = |j: usize| -> f64 {
        let mut dx = grid.nodes()[j] - grid.nodes()[peak];
        if dx >= length {
            dx -= 2.0 * length;
        } else if dx < -length {
            dx += 2.0 * length;
        }
        dx
    };

    // Half-max radius of the core, used to keep the window outside it.
    let mut half_width: f64 = grid.spacing();
    for j in 0..n {
        if values[j].abs() >= peak_abs / 2.0 {
            half_width = half_width.max(centered(j).abs());
        }
    }
    let (x_min, x_max) = opts.window.unwrap_or((5.0 * half_width, 0.8 * length));
    if !(x_min > 0.0 && x_max > x_min && x_max <= length) {
        return Err(Error::FitInfeasible {
            reason: format!("window ({x_min:.3}, {x_max:.3}) is empty or outside the grid"),
        });
    }

    // Envelope: local maxima of |phi| inside the window. Monotone tails
    // (no interior maxima, no sign changes) fall back to the raw samples.
    let in_window = |j: usize| {
        let d = centered(j).abs();
        (x_min..=x_max).contains(&d)
    };
    let mut envelope: Vec<(f64, f64)> = Vec::new();
    for j in 0..n {
        if !in_window(j) {
            continue;
        }
        let prev = values[(j + n - 1) % n].abs();
        let next = values[(j + 1) % n].abs();
        let here = values[j].abs();
        if here > prev && here >= next && here > opts.envelope_floor {
            envelope.push((centered(j).abs(), here));
        }
    }
    if envelope.len() < opts.min_points {
        let crossings = (0..n)
            .filter(|&j| in_window(j) && in_window((j + 1) % n))
            .filter(|&j| values[j] * values[(j + 1) % n] < 0.0)
            .count();
        if crossings == 0 {
            envelope = (0..n)
                .filter(|&j| in_window(j) && values[j].abs() > opts.envelope_floor)
                .map(|j| (centered(j).abs(), values[j].abs()))
                .collect();
        }
    }
    if envelope.len() < opts.min_points {
        return Err(Error::FitInfeasible {
            reason: format!(
                "only {} usable envelope points in ({x_min:.3}, {x_max:.3})",
                envelope.len()
            ),
        });
    }

    // Least squares on log|env| = log C - r log|X|.
    let logs: Vec<(f64, f64)> = envelope
        .iter()
        .map(|&(x, v)| (x.ln(), v.ln()))
        .collect();
    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::FitInfeasible {
            reason: "envelope abscissae are degenerate".into(),
        });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let goodness = if syy > 0.0 {
        (1.0 - (syy - slope * sxy) / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DecayFit {
        exponent: -slope,
        prefactor: intercept.exp(),
        fit_window: (x_min, x_max),
        goodness,
    })
}

/// Pointwise `(phi, phi')` pairs with the spectral derivative, ordered by
/// node index.
pub fn phase_portrait(profile: &WaveProfile) -> Vec<(f64, f64)> {
    let derivative = profile.field().derivative(1);
    profile
        .field()
        .values()
        .iter()
        .zip(derivative.values())
        .map(|(&v, &d)| (v, d))
        .collect()
}

/// One side of an Ostrovsky comparison.
#[derive(Debug, Clone)]
pub struct ComparisonSide {
    pub profile: WaveProfile,
    pub report: SolverReport,
    pub u_max: f64,
    pub u_min: f64,
}

impl ComparisonSide {
    fn new(outcome: (WaveProfile, SolverReport)) -> Self {
        let (profile, report) = outcome;
        let u_max = profile.field().max();
        let u_min = profile.field().min();
        ComparisonSide {
            profile,
            report,
            u_max,
            u_min,
        }
    }
}

/// Paired solves with and without the nonlocal dispersion term.
#[derive(Debug, Clone)]
pub struct OstrovskyComparison {
    /// Solve with the given `beta > 0`.
    pub rmbenjamin: ComparisonSide,
    /// Same parameters with `beta = 0`.
    pub ostrovsky: ComparisonSide,
}

/// Solve with the given `beta > 0` and with `beta = 0`, all else equal.
pub fn compare_ostrovsky(
    params: &ModelParams,
    speed: WaveSpeed,
    grid: &Arc<Grid>,
    config: &SolverConfig,
) -> Result<OstrovskyComparison> {
    if params.beta <= 0.0 {
        return Err(Error::invalid(
            "beta",
            "Ostrovsky comparison requires beta > 0",
        ));
    }
    let ostrovsky_params = ModelParams {
        beta: 0.0,
        ..*params
    };
    let rmbenjamin = ComparisonSide::new(solve(params, speed, grid, config)?);
    let ostrovsky = ComparisonSide::new(solve(&ostrovsky_params, speed, grid, config)?);
    Ok(OstrovskyComparison {
        rmbenjamin,
        ostrovsky,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64) -> ModelParams {
        ModelParams::new(0.0, beta, 1.0, 1.0, 2).unwrap()
    }

    #[test]
    fn classifies_the_four_cases() {
        let speed = |c| WaveSpeed::new(c).unwrap();
        let v = classify_existence(&params(-1.0), speed(-0.5)).unwrap();
        assert!(v.admissible);
        assert_eq!(v.matched_case, ExistenceCase::I);

        let v = classify_existence(&params(-1.0), speed(1.5)).unwrap();
        assert_eq!(v.matched_case, ExistenceCase::II);
        assert!((v.c_star - 2.0).abs() < 1e-15);

        let v = classify_existence(&params(1.0), speed(-0.5)).unwrap();
        assert_eq!(v.matched_case, ExistenceCase::III);

        let v = classify_existence(&params(1.0), speed(0.5)).unwrap();
        assert_eq!(v.matched_case, ExistenceCase::IV);
        // z_+ = (1/2)(-5/4 + 3 sqrt(17/16)).
        let expected = 0.5 * (-1.25 + 3.0 * (17.0 / 16.0f64).sqrt());
        assert!((v.z_plus.unwrap() - expected).abs() < 1e-12);
        assert!((v.z_plus.unwrap() - 0.9212).abs() < 5e-5);
        assert!(v.a == 3.0 && v.b == -8.0 && v.resonance_free);

        let v = classify_existence(&params(1.0), speed(2.0)).unwrap();
        assert_eq!(v.matched_case, ExistenceCase::None);
        assert!(!v.admissible);
    }

    #[test]
    fn rejects_degenerate_regimes() {
        let no_rotation = ModelParams::new(0.0, 1.0, 0.0, 1.0, 2).unwrap();
        assert!(classify_existence(&no_rotation, WaveSpeed::new(0.5).unwrap()).is_err());
        let no_dispersion = ModelParams::new(0.0, 1.0, 1.0, 0.0, 2).unwrap();
        assert!(classify_existence(&no_dispersion, WaveSpeed::new(0.5).unwrap()).is_err());
    }

    #[test]
    fn z_plus_tends_to_c_star() {
        for (beta, scale) in [(1e-3, 1e-2), (1e-6, 1e-5)] {
            let v = classify_existence(&params(beta), WaveSpeed::new(0.5).unwrap()).unwrap();
            let gap = (v.z_plus.unwrap() - v.c_star).abs();
            assert!(gap <= scale, "beta = {beta}: gap = {gap}");
        }
    }

    #[test]
    fn admissibility_is_monotone_in_speed() {
        // Cases II and IV are intervals (alpha, alpha + bound).
        for beta in [-1.0, 1.0] {
            let p = params(beta);
            let at = |c_s: f64| classify_existence(&p, WaveSpeed::new(c_s).unwrap()).unwrap();
            let mut admissible_above = false;
            for i in (1..60).rev() {
                let c_s = 0.05 * f64::from(i);
                let v = at(c_s);
                if admissible_above {
                    assert!(
                        v.admissible,
                        "beta = {beta}: inadmissible at {c_s} below an admissible speed"
                    );
                }
                admissible_above |= v.admissible;
            }
            assert!(admissible_above);
        }
    }

    #[test]
    fn figure_candidate_discriminants() {
        // A > 0, B > 0 for (alpha = gamma = 1/2, beta = 2, delta = 1);
        // A > 0, B < 0 for (alpha = gamma = 1/2, beta = delta = 1).
        let p = ModelParams::new(0.5, 2.0, 0.5, 1.0, 2).unwrap();
        let v = classify_existence(&p, WaveSpeed::new(1.0).unwrap()).unwrap();
        assert_eq!((v.a, v.b), (2.0, 6.0));
        assert!(!v.resonance_free);

        let p = ModelParams::new(0.5, 1.0, 0.5, 1.0, 2).unwrap();
        let v = classify_existence(&p, WaveSpeed::new(1.0).unwrap()).unwrap();
        assert_eq!((v.a, v.b), (3.0, -3.5));
        assert!(v.resonance_free);
    }

    #[test]
    fn sweep_rejects_empty_input() {
        let grid = Grid::new(16.0, 64).unwrap();
        assert!(speed_sweep(&params(1.0), &[], &grid, &SolverConfig::default(), false).is_err());
    }

    #[test]
    fn phase_portrait_of_pure_mode_traces_ellipse() {
        use std::f64::consts::PI;
        let grid = Grid::new(16.0, 256).unwrap();
        let length = grid.half_length();
        let field = RealField::from_fn(&grid, |x| (PI * x / length).cos());
        // KdV-type params keep WaveProfile construction mass-free.
        let profile = WaveProfile::new(
            field,
            ModelParams::new(0.0, 0.0, 0.0, 1.0, 2).unwrap(),
            WaveSpeed::new(-1.0).unwrap(),
        )
        .unwrap();
        for (phi, dphi) in phase_portrait(&profile) {
            let r = phi * phi + (length * dphi / PI).powi(2);
            assert!((r - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn synthetic_algebraic_tail_recovers_exponent() {
        // Oscillatory tail C |X|^-3 cos(k X) away from a smooth core.
        let grid = Grid::new(100.0, 4096).unwrap();
        let core_radius = 5.0;
        let field = RealField::from_fn(&grid, |x| {
            let r = x.abs().max(core_radius);
            2.0 * r.powi(-3) * (4.0 * x).cos()
        });
        let profile = WaveProfile::new(
            field,
            ModelParams::new(0.0, 0.0, 0.0, 1.0, 2).unwrap(),
            WaveSpeed::new(-1.0).unwrap(),
        )
        .unwrap();
        let fit = tail_decay_fit_with(
            &profile,
            &DecayFitOptions {
                window: Some((10.0, 80.0)),
                ..DecayFitOptions::default()
            },
        )
        .unwrap();
        assert!(
            (fit.exponent - 3.0).abs() <= 0.05,
            "exponent = {}",
            fit.exponent
        );
        assert!(fit.goodness >= 0.99);
    }

    #[test]
    fn decay_fit_rejects_empty_tails() {
        let grid = Grid::new(50.0, 512).unwrap();
        let field = RealField::from_fn(&grid, |x| -3.0 / (x / 2.0).cosh().powi(2));
        let profile = WaveProfile::new(
            field,
            ModelParams::new(0.0, 0.0, 0.0, 1.0, 2).unwrap(),
            WaveSpeed::new(-1.0).unwrap(),
        )
        .unwrap();
        // Window far in the tail where sech^2 is below round-off.
        let out = tail_decay_fit_with(
            &profile,
            &DecayFitOptions {
                window: Some((40.0, 49.0)),
                ..DecayFitOptions::default()
            },
        );
        assert!(matches!(out, Err(Error::FitInfeasible { .. })));
    }

    #[test]
    fn comparison_requires_positive_beta() {
        let grid = Grid::new(16.0, 64).unwrap();
        let out = compare_ostrovsky(
            &params(0.0),
            WaveSpeed::new(0.5).unwrap(),
            &grid,
            &SolverConfig::default(),
        );
        assert!(out.is_err());
    }
}
