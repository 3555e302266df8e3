//! Pointwise fluxes of the preset at a sample state.

use tecell::fluxes::{flux_set, Gradients};
use tecell::materials::{evaluate_coefficients, nacl_model, NaclOptions};

fn main() {
    let model = nacl_model(&NaclOptions::default());
    let theta = 1100.0;
    let coeffs = evaluate_coefficients(&model, [0.0, 0.0], theta, &[]);
    let valences: Vec<i32> = model.species.iter().map(|s| s.valence).collect();
    let grads = Gradients {
        theta: [200.0, 0.0],
        concentrations: &[[1e3, 0.0], [-1e3, 0.0]],
        phi: [-26.0, 0.0],
    };
    let f = flux_set(&model.constants, &coeffs, &valences, &[2.5667e4, 2.5667e4], grads, theta);
    println!("heat flux    {:>12.4e} W/m²", f.heat[0]);
    for (s, j) in model.species.iter().zip(&f.ionic) {
        println!("J[{:<3}]       {:>12.4e} mol/(m² s)", s.name, j[0]);
    }
    println!("current      {:>12.4e} A/m²", f.current[0]);
}
