//! L² error of the potential solver against φ = cos(πx)cos(πy) on the unit
//! square under refinement.

use std::f64::consts::PI;

use tecell::fem::l2_error;
use tecell::geometry::{build_rectangle_mesh, BoundaryTag, SideTags};
use tecell::materials::{nacl_model, Law, NaclOptions, SurfaceCurrent};
use tecell::potential::{solve_potential_with_source, PotentialOptions};

fn main() -> tecell::Result<()> {
    let mut model = nacl_model(&NaclOptions::default());
    model.conductivity = Law::constant(1.0);
    model.seebeck = Law::constant(0.0);
    model.surface_current = SurfaceCurrent {
        anode: Law::constant(0.0),
        cathode: Law::constant(0.0),
    };
    let exact = |x: [f64; 2]| (PI * x[0]).cos() * (PI * x[1]).cos();
    let source = |x: [f64; 2]| 2.0 * PI * PI * exact(x);
    let tags = SideTags::new(BoundaryTag::Anode, BoundaryTag::Cathode, BoundaryTag::Wall, BoundaryTag::Outer);

    let mut previous: Option<f64> = None;
    for nx in [8, 16, 32, 64] {
        let mesh = build_rectangle_mesh(1.0, 1.0, nx, nx, tags)?;
        let n = mesh.node_count();
        let c = vec![vec![1.0; n]; model.species.len()];
        let s = solve_potential_with_source(&mesh, &model, &vec![1100.0; n], &c, &source, &PotentialOptions::default())?;
        let err = l2_error(&mesh, &s.phi, exact);
        match previous {
            Some(p) => println!("h = 1/{nx:<3} error {err:.3e} order {:.3}", (p / err).log2()),
            None => println!("h = 1/{nx:<3} error {err:.3e}"),
        }
        previous = Some(err);
    }
    Ok(())
}
