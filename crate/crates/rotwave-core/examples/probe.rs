// Scratch numerical probe; removed before release.
use rotwave_core::*;
use std::sync::Arc;

fn main() {
    let grid = Grid::new(128.0, 4096).unwrap();
    let config = SolverConfig::default();

    println!("=== Figure-3 regime: alpha=0, beta=gamma=delta=1 ===");
    let params = ModelParams::quadratic(0.0, 1.0, 1.0, 1.0).unwrap();
    for c_s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let speed = WaveSpeed::new(c_s).unwrap();
        let t = std::time::Instant::now();
        let (profile, report) = solve(&params, speed, &grid, &config).unwrap();
        let m = stabilizing_factor(profile.field(), &params, speed).unwrap();
        let i = functional_i(profile.field(), &params, speed).unwrap();
        let k = functional_k(profile.field(), &params);
        println!(
            "c_s={c_s}: conv={} reason={:?} iters={} res={:.2e} umax={:.6} umin={:.6} mass={:.2e} |m-1|={:.2e} |I-K|/(|I|+|K|)={:.2e} [{:?}]",
            report.converged,
            report.termination_reason,
            report.iterations,
            profile.residual(),
            profile.field().max(),
            profile.field().min(),
            mass(profile.field()),
            (m - 1.0).abs(),
            (i - k).abs() / (i.abs() + k.abs()),
            t.elapsed()
        );
    }

    println!("=== KdV oracle ===");
    let kdv = ModelParams::quadratic(0.0, 0.0, 0.0, 1.0).unwrap();
    let kgrid = Grid::new(100.0, 2048).unwrap();
    let speed = WaveSpeed::new(-1.0).unwrap();
    let t = std::time::Instant::now();
    let (profile, report) = solve(&kdv, speed, &kgrid, &config).unwrap();
    let exact = RealField::from_fn(&kgrid, |x| -3.0 / (x / 2.0).cosh().powi(2));
    println!(
        "conv={} iters={} res={:.2e} max_err={:.2e} [{:?}]",
        report.converged,
        report.iterations,
        profile.residual(),
        (profile.field() - &exact).max_abs(),
        t.elapsed()
    );

    println!("=== multi-pulse: beta=-1, c_s=1.1, NegativeSech ===");
    let mp = ModelParams::quadratic(0.0, -1.0, 1.0, 1.0).unwrap();
    let speed = WaveSpeed::new(1.1).unwrap();
    for (a, w) in [(3.3, 0.52), (1.0, 0.5), (2.0, 1.0), (3.3, 1.0), (1.5, 0.3)] {
        let cfg = SolverConfig {
            initial_guess: Some(InitialGuess::NegativeSech {
                amplitude: a,
                width: w,
            }),
            ..SolverConfig::default()
        };
        match solve(&mp, speed, &grid, &cfg) {
            Ok((profile, report)) => {
                let v = profile.field().values();
                let u_min = profile.field().min();
                let n = v.len();
                let mut minima = 0;
                for j in 0..n {
                    let prev = v[(j + n - 1) % n];
                    let next = v[(j + 1) % n];
                    if v[j] < prev && v[j] <= next && v[j] < -0.1 * u_min.abs() {
                        minima += 1;
                    }
                }
                println!(
                    "a={a} w={w}: conv={} iters={} res={:.2e} umax={:.4} umin={:.4} deep_minima={}",
                    report.converged,
                    report.iterations,
                    profile.residual(),
                    profile.field().max(),
                    u_min,
                    minima
                );
            }
            Err(e) => println!("a={a} w={w}: error {e}"),
        }
    }

    println!("=== evolution: c_s=0.5 profile, T=10 ===");
    let speed = WaveSpeed::new(0.5).unwrap();
    let (profile, _) = solve(&params, speed, &grid, &config).unwrap();
    let dt = EvolutionConfig::default_dt(&grid, &params, speed);
    println!("default dt = {dt}");
    let econfig = EvolutionConfig {
        dt,
        final_time: 10.0,
        record_every: 100,
    };
    let t = std::time::Instant::now();
    let traj = evolve(profile.field(), &params, &econfig).unwrap();
    let v0 = traj.invariant_series[0].momentum;
    let e0 = traj.invariant_series[0].energy;
    let vmax = traj
        .invariant_series
        .iter()
        .map(|s| (s.momentum - v0).abs() / v0.abs())
        .fold(0.0f64, f64::max);
    let emax = traj
        .invariant_series
        .iter()
        .map(|s| (s.energy - e0).abs() / e0.abs())
        .fold(0.0f64, f64::max);
    let mmax = traj
        .invariant_series
        .iter()
        .map(|s| s.mass.abs())
        .fold(0.0f64, f64::max);
    println!(
        "complete={} V drift={vmax:.2e} E drift={emax:.2e} max|mass|={mmax:.2e} [{:?}]",
        traj.is_complete(),
        t.elapsed()
    );
    // peak tracking
    let peak_x = |f: &RealField| -> f64 {
        let v = f.values();
        let j = (0..v.len())
            .max_by(|&a, &b| v[a].abs().partial_cmp(&v[b].abs()).unwrap())
            .unwrap();
        f.grid().nodes()[j]
    };
    let x0 = peak_x(&traj.snapshots[0]);
    let x1 = peak_x(traj.snapshots.last().unwrap());
    let t1 = *traj.times.last().unwrap();
    println!("peak: x0={x0} x1={x1} -> speed={:.6}", (x1 - x0) / t1);
    // realigned shape error
    let shifted = traj.snapshots.last().unwrap().translate(-(x1 - x0));
    let err = (&shifted - &traj.snapshots[0]).max_abs() / traj.snapshots[0].max_abs();
    println!("shape error after integer-node realign = {err:.2e}");

    println!("=== RK4 self-convergence ===");
    // Smooth reference: the c_s=0.5 profile again, short horizon.
    let base_dt = 0.02;
    let horizon = 1.0;
    let run = |dt: f64| -> RealField {
        let cfg = EvolutionConfig {
            dt,
            final_time: horizon,
            record_every: usize::MAX,
        };
        evolve(profile.field(), &params, &cfg)
            .unwrap()
            .snapshots
            .pop()
            .unwrap()
    };
    let reference = run(base_dt / 16.0);
    let e1 = (&run(base_dt) - &reference).max_abs();
    let e2 = (&run(base_dt / 2.0) - &reference).max_abs();
    println!("err(dt)={e1:.3e} err(dt/2)={e2:.3e} ratio={:.3}", e1 / e2);
}
