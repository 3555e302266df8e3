use tecell::geometry::{build_interval_mesh, BoundaryTag};
use tecell::materials::{nacl_model, Law, NaclOptions, SurfaceCurrent};
use tecell::potential::{solve_potential, PotentialOptions};

fn main() -> tecell::Result<()> {
    let (j, length, sigma) = (1e4, 0.13, 359.7);
    let mut model = nacl_model(&NaclOptions::default());
    model.conductivity = Law::constant(sigma);
    model.seebeck = Law::constant(0.0);
    model.surface_current = SurfaceCurrent {
        anode: Law::constant(j),
        cathode: Law::constant(-j),
    };
    let mesh = build_interval_mesh(length, 32, BoundaryTag::Anode, BoundaryTag::Cathode)?;
    let n = mesh.node_count();
    let c = vec![vec![2.5667e4; n]; model.species.len()];
    let s = solve_potential(&mesh, &model, &vec![1100.0; n], &c, &PotentialOptions::default())?;

    println!("φ(anode) = {:+.6} V, φ(cathode) = {:+.6} V", s.phi[0], s.phi[n - 1]);
    println!("drop {:.9} V, j L / σ = {:.9} V", s.phi[0] - s.phi[n - 1], j * length / sigma);
    println!("boundary mean {:.1e}, charge balance {:.1e}", s.boundary_mean, s.charge_balance);
    Ok(())
}
