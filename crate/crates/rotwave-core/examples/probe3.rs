// Scratch: c_s = 0.9 convergence strategies; removed before release.
use rotwave_core::*;

fn main() {
    let grid = Grid::new(128.0, 4096).unwrap();
    let params = ModelParams::quadratic(0.0, 1.0, 1.0, 1.0).unwrap();
    let tight = SolverConfig {
        tol_stab: 1e-15,
        max_iter: 2000,
        ..SolverConfig::default()
    };

    // Direct solve with assorted guesses.
    for (label, guess) in [
        ("default", None),
        (
            "sech2 a=-2.7",
            Some(InitialGuess::SechSquared {
                amplitude: -2.7,
                width: 0.474,
            }),
        ),
        (
            "sech2 a=-1.5 w=1",
            Some(InitialGuess::SechSquared {
                amplitude: -1.5,
                width: 1.0,
            }),
        ),
        (
            "gaussian a=-1.5 w=0.8",
            Some(InitialGuess::Gaussian {
                amplitude: -1.5,
                width: 0.8,
            }),
        ),
    ] {
        let cfg = SolverConfig {
            initial_guess: guess,
            ..tight.clone()
        };
        let speed = WaveSpeed::new(0.9).unwrap();
        match solve(&params, speed, &grid, &cfg) {
            Ok((profile, report)) => println!(
                "c_s=0.9 {label}: conv={} reason={:?} iters={} res={:.2e} umax={:.4} umin={:.4}",
                report.converged,
                report.termination_reason,
                report.iterations,
                profile.residual(),
                profile.field().max(),
                profile.field().min()
            ),
            Err(e) => println!("c_s=0.9 {label}: error {e}"),
        }
    }

    // Warm-started sweep up to 0.9.
    let speeds = [0.1, 0.3, 0.5, 0.7, 0.8, 0.9];
    let t = std::time::Instant::now();
    let sweep = speed_sweep(&params, &speeds, &grid, &tight, true).unwrap();
    println!("warm-start sweep [{:?}]:", t.elapsed());
    for row in &sweep.rows {
        println!(
            "  c_s={}: conv={} res={:.2e} umax={:.4} umin={:.4}",
            row.param, row.converged, row.residual, row.u_max, row.u_min
        );
    }

    // Residual history shape at 0.5 with the corrected residual.
    let speed = WaveSpeed::new(0.5).unwrap();
    let (profile, report) = solve(&params, speed, &grid, &tight).unwrap();
    println!(
        "c_s=0.5: conv={} reason={:?} iters={} res={:.2e}",
        report.converged,
        report.termination_reason,
        report.iterations,
        profile.residual()
    );
    let h = &report.residual_history;
    let show: Vec<String> = h
        .iter()
        .step_by((h.len() / 12).max(1))
        .map(|r| format!("{r:.2e}"))
        .collect();
    println!("  residual history: {}", show.join(" "));
    let last10: Vec<String> = h[h.len().saturating_sub(10)..]
        .iter()
        .map(|r| format!("{r:.3e}"))
        .collect();
    println!("  last 10: {}", last10.join(" "));
}
