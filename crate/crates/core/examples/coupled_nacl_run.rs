//! The 1-D NaCl preset through 60 s of coupled transient, with per-step
//! Picard statistics.

use tecell::config::CellConfig;
use tecell::coupler::run_transient;

fn main() -> tecell::Result<()> {
    let config = CellConfig::nacl_default();
    let mesh = config.build_mesh()?;
    let model = config.build_model()?;
    let traj = run_transient(&mesh, &model, &config.run_settings(), config.solver.t_final, config.solver.dt);
    for r in traj.records.iter().step_by(10) {
        println!(
            "t = {:>4} s  iterations {:>2}  residual {:.2e}  ‖θ‖ {:.4e}  ‖φ‖ {:.4e}",
            r.time,
            r.iterations,
            r.residuals.last().copied().unwrap_or(0.0),
            r.norms.theta_l2,
            r.norms.phi_l2
        );
    }
    match traj.failure {
        None => println!("completed {} steps", traj.records.len()),
        Some(e) => println!("stopped: {e}"),
    }
    Ok(())
}
