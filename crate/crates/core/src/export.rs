//! CSV time series and legacy ASCII VTK snapshots.

use std::fmt::Write as _;
use std::path::Path;

use crate::coupler::{FieldState, Trajectory};
use crate::error::Result;
use crate::geometry::Mesh;

/// One row per time level: the initial state followed by every step record.
pub fn trajectory_csv(traj: &Trajectory, species: &[String]) -> String {
    let mut out = String::from(
        "# t [s], ‖θ‖_L2 [K·m^{n/2}], ‖c_i‖_L2 [mol·m⁻³·m^{n/2}], ‖φ‖_L2 [V·m^{n/2}], Picard iterations, final residual (relative), converged\n",
    );
    out.push_str("t,theta_l2");
    for s in species {
        let _ = write!(out, ",c_{s}_l2");
    }
    out.push_str(",phi_l2,iterations,residual,converged\n");

    let row = |out: &mut String, t: f64, theta: f64, conc: &[f64], phi: f64, its: usize, res: f64, ok: bool| {
        let _ = write!(out, "{t:e},{theta:e}");
        for c in conc {
            let _ = write!(out, ",{c:e}");
        }
        let _ = writeln!(out, ",{phi:e},{its},{res:e},{}", u8::from(ok));
    };
    let n0 = &traj.initial_norms;
    let t0 = traj.states.first().map_or(0.0, |s| s.time);
    row(&mut out, t0, n0.theta_l2, &n0.concentrations_l2, n0.phi_l2, 0, 0.0, true);
    for r in &traj.records {
        let n = &r.norms;
        let res = r.residuals.last().copied().unwrap_or(f64::NAN);
        row(&mut out, r.time, n.theta_l2, &n.concentrations_l2, n.phi_l2, r.iterations, res, r.converged);
    }
    out
}

/// Legacy ASCII VTK unstructured grid carrying every field as point data.
pub fn vtk_snapshot(mesh: &Mesh, state: &FieldState, species: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# vtk DataFile Version 3.0");
    let _ = writeln!(out, "tecell t = {:e}", state.time);
    let _ = writeln!(out, "ASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(out, "POINTS {} double", mesh.node_count());
    for p in mesh.nodes() {
        let _ = writeln!(out, "{:e} {:e} 0", p[0], p[1]);
    }
    let cells = mesh.cells();
    let size: usize = cells.iter().map(|c| c.len() + 1).sum();
    let _ = writeln!(out, "CELLS {} {size}", cells.len());
    for c in cells {
        let ids: Vec<String> = c.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{} {}", c.len(), ids.join(" "));
    }
    let _ = writeln!(out, "CELL_TYPES {}", cells.len());
    let kind = if mesh.dim() == 1 { 3 } else { 5 };
    for _ in cells {
        let _ = writeln!(out, "{kind}");
    }
    let _ = writeln!(out, "POINT_DATA {}", mesh.node_count());
    let mut field = |name: &str, v: &[f64]| {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for x in v {
            let _ = writeln!(out, "{x:e}");
        }
    };
    field("theta", &state.theta);
    field("phi", &state.phi);
    for (name, c) in species.iter().zip(&state.concentrations) {
        let clean: String = name.chars().map(|ch| if ch.is_ascii_alphanumeric() { ch } else { '_' }).collect();
        field(&format!("c_{clean}"), c);
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}
