// Scratch diagnosis of the Figure-3 stall; removed before release.
use rotwave_core::*;

fn main() {
    let grid = Grid::new(128.0, 4096).unwrap();
    let params = ModelParams::quadratic(0.0, 1.0, 1.0, 1.0).unwrap();
    let speed = WaveSpeed::new(0.5).unwrap();

    for dealias in [true, false] {
        let config = SolverConfig {
            tol_stab: 1e-300,
            max_iter: 3000,
            dealias,
            ..SolverConfig::default()
        };
        let (profile, report) = solve(&params, speed, &grid, &config).unwrap();
        println!(
            "dealias={dealias}: conv={} reason={:?} iters={} res={:.3e} umax={:.4} umin={:.4}",
            report.converged,
            report.termination_reason,
            report.iterations,
            profile.residual(),
            profile.field().max(),
            profile.field().min()
        );
        let h = &report.residual_history;
        let show: Vec<String> = h
            .iter()
            .step_by((h.len() / 15).max(1))
            .map(|r| format!("{r:.2e}"))
            .collect();
        println!("  residual history: {}", show.join(" "));
        let m = &report.stab_factor_history;
        let show: Vec<String> = m
            .iter()
            .step_by((m.len() / 15).max(1))
            .map(|r| format!("{r:.6}"))
            .collect();
        println!("  m history: {}", show.join(" "));

        // Spectrum decay of the final profile.
        let spec = profile.field().forward_transform();
        let kappas = grid.wavenumbers();
        print!("  |phi_hat| at kappa: ");
        for j in [1usize, 16, 64, 256, 512, 1024, 1365, 1400, 2000] {
            print!("({:.1},{:.1e}) ", kappas[j], spec.coeffs()[j].norm());
        }
        println!();

        // Dealiased residual: P phi_hat - kappa^2 D[N_hat].
        let nl_hat = profile
            .field()
            .map(|u| params.nonlinearity(u))
            .forward_transform()
            .dealias();
        let mut sum2 = 0.0;
        for (j, &kappa) in kappas.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let p = params.profile_symbol(speed, kappa);
            let r = (p * spec.coeffs()[j] - kappa * kappa * nl_hat.coeffs()[j]).norm_sqr()
                / (kappa * kappa * kappa * kappa);
            sum2 += r;
        }
        println!(
            "  modewise dealiased residual (L-form) = {:.3e}",
            (2.0 * grid.half_length() * sum2).sqrt()
        );
    }
}
