//! Electrode current against overpotential, with and without the argument cap.

use tecell::materials::PhysicalConstants;
use tecell::species::{butler_volmer_flux, ButlerVolmerParams};

fn main() -> tecell::Result<()> {
    let k = PhysicalConstants::with_medium(1500.0, 1197.8);
    let capped = ButlerVolmerParams {
        exchange_current: 1e4,
        transfer: 0.5,
        electrons: 2,
        equilibrium_potential: 0.0,
        cap: 30.0,
    };
    let free = ButlerVolmerParams { cap: f64::INFINITY, ..capped };
    println!("{:>8} {:>14} {:>14}", "η [V]", "capped [A/m²]", "free [A/m²]");
    for eta in [-1.0, -0.5, -0.1, -0.01, 0.0, 0.01, 0.1, 0.5, 1.0] {
        let a = butler_volmer_flux(&capped, &k, 1073.15, eta)?;
        let b = butler_volmer_flux(&free, &k, 1073.15, eta)?;
        println!("{eta:>8.2} {a:>14.4e} {b:>14.4e}");
    }
    Ok(())
}
