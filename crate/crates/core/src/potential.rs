//! Elliptic Neumann problem for the electric potential at frozen θ and c.
//!
//! The discrete system is singular with the constants as kernel. One node is
//! pinned to zero by symmetric elimination, then the boundary mean is
//! subtracted so the returned field has `∫_∂Ω φ ds = 0`.

use crate::fem::{self, assemble_gradient_load, assemble_scalar_stiffness, assemble_source, cell_gradient, cell_mean};
use crate::geometry::{BoundaryTag, Mesh, Point};
use crate::linalg::solve_spd;
use crate::materials::{evaluate_coefficients, MaterialModel, COMPATIBILITY_TOLERANCE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialOptions {
    pub linear_tol: f64,
    pub compat_tol: f64,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        Self {
            linear_tol: 1e-12,
            compat_tol: COMPATIBILITY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSolution {
    /// V
    pub phi: Vec<f64>,
    /// Boundary mean after normalization, V.
    pub boundary_mean: f64,
    /// Relative residual of the pinned linear system.
    pub residual: f64,
    /// `∫_Γ g ds`, A (per metre of depth in 2-D, absolute in 1-D).
    pub compatibility_defect: f64,
    /// `|Σ boundary current − ∫_Γ g ds|` relative to `∫_Γ |g| ds`.
    pub charge_balance: f64,
}

/// Nodal `∫_Γ g φ_i ds` from the model's surface current, plus `∫_Γ |g| ds`.
pub fn surface_current_load(mesh: &Mesh, model: &MaterialModel) -> (Vec<f64>, f64) {
    let mut load = vec![0.0; mesh.node_count()];
    let mut magnitude = 0.0;
    for tag in [BoundaryTag::Anode, BoundaryTag::Cathode] {
        for (n, w) in mesh.boundary_weights(tag) {
            let g = model.surface_current.eval(tag, mesh.nodes()[n]);
            load[n] += g * w;
            magnitude += g.abs() * w;
        }
    }
    (load, magnitude)
}

/// Solves for φ with the model's surface current and thermo/diffusion drives.
pub fn solve_potential(
    mesh: &Mesh,
    model: &MaterialModel,
    theta: &[f64],
    concentrations: &[Vec<f64>],
    opts: &PotentialOptions,
) -> Result<PotentialSolution> {
    solve(mesh, model, theta, concentrations, None, opts)
}

/// As [`solve_potential`] with an extra volume source `∫ f v dx` on the
/// right-hand side. Its mean is removed so the Neumann problem stays solvable.
pub fn solve_potential_with_source(
    mesh: &Mesh,
    model: &MaterialModel,
    theta: &[f64],
    concentrations: &[Vec<f64>],
    source: &dyn Fn(Point) -> f64,
    opts: &PotentialOptions,
) -> Result<PotentialSolution> {
    solve(mesh, model, theta, concentrations, Some(source), opts)
}

fn solve(
    mesh: &Mesh,
    model: &MaterialModel,
    theta: &[f64],
    concentrations: &[Vec<f64>],
    source: Option<&dyn Fn(Point) -> f64>,
    opts: &PotentialOptions,
) -> Result<PotentialSolution> {
    let n = mesh.node_count();
    if theta.len() != n || concentrations.iter().any(|c| c.len() != n) {
        return Err(Error::Assembly("field length does not match mesh".into()));
    }
    if concentrations.len() != model.species.len() {
        return Err(Error::Assembly("one concentration field per species is required".into()));
    }

    let (g_load, g_magnitude) = surface_current_load(mesh, model);
    let defect: f64 = g_load.iter().sum();
    let tolerance = opts.compat_tol * g_magnitude;
    if defect.abs() > tolerance {
        return Err(Error::IncompatibleData { defect, tolerance });
    }

    let k = &model.constants;
    let cells: Vec<_> = (0..mesh.cells().len())
        .map(|c| {
            let x = mesh.cell_geometry()[c].centroid;
            let th = cell_mean(mesh, c, theta);
            evaluate_coefficients(model, x, th, &[])
        })
        .collect();
    let stiffness = assemble_scalar_stiffness(mesh, |c| cells[c].sigma);
    let drive = assemble_gradient_load(mesh, |c| {
        let cs = &cells[c];
        let gt = cell_gradient(mesh, c, theta);
        let mut f = [cs.seebeck * cs.sigma * gt[0], cs.seebeck * cs.sigma * gt[1]];
        for (i, s) in model.species.iter().enumerate() {
            let gc = cell_gradient(mesh, c, &concentrations[i]);
            let a = k.faraday * f64::from(s.valence) * cs.diffusion[i];
            f[0] += a * gc[0];
            f[1] += a * gc[1];
        }
        f
    });

    let mut volume = match source {
        Some(f) => assemble_source(mesh, f),
        None => vec![0.0; n],
    };
    let vol_total: f64 = volume.iter().sum();
    if vol_total != 0.0 {
        let omega = mesh.measure();
        for (v, m) in volume.iter_mut().zip(mesh.lumped_mass()) {
            *v -= vol_total * m / omega;
        }
    }

    let rhs: Vec<f64> = (0..n).map(|i| g_load[i] - drive[i] + volume[i]).collect();
    let mut pinned_rhs = rhs.clone();
    let pinned = stiffness.pin(0, 0.0, &mut pinned_rhs);
    let (mut phi, residual) = solve_spd(&pinned, &pinned_rhs, opts.linear_tol)?;
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Assembly("singular potential system".into()));
    }

    let weights = mesh.all_boundary_weights();
    let mean = fem::weighted_mean(&phi, &weights);
    for v in &mut phi {
        *v -= mean;
    }
    let boundary_mean = fem::weighted_mean(&phi, &weights);

    // Nodal normal current is the equation residual without the surface
    // term; it must reproduce ∫g on each boundary part.
    let kphi = stiffness.matvec(&phi);
    let scale = g_magnitude.max(kphi.iter().map(|v| v.abs()).sum::<f64>()).max(f64::MIN_POSITIVE);
    let charge_balance = BoundaryTag::ALL
        .iter()
        .map(|&tag| {
            let (current, expected) = (0..n)
                .filter(|&i| mesh.node_tag(i) == Some(tag))
                .fold((0.0, 0.0), |(a, b), i| (a + kphi[i] + drive[i] - volume[i], b + g_load[i]));
            (current - expected).abs()
        })
        .fold(0.0, f64::max)
        / scale;

    Ok(PotentialSolution {
        phi,
        boundary_mean,
        residual,
        compatibility_defect: defect,
        charge_balance,
    })
}

/// Both sides of `σ_#‖∇φ‖₂ ≤ K_tr‖g‖_{2,Γ} + σ^#α^#‖∇θ‖₂ + Σ D_j^#‖∇c_j‖₂`.
pub fn energy_estimate(
    mesh: &Mesh,
    model: &MaterialModel,
    solution: &PotentialSolution,
    theta: &[f64],
    concentrations: &[Vec<f64>],
    trace_constant: f64,
) -> (f64, f64) {
    let b = &model.bounds;
    let lhs = b.sigma_min * fem::gradient_norm(mesh, &solution.phi, 2.0);
    let mut g2 = 0.0;
    for tag in [BoundaryTag::Anode, BoundaryTag::Cathode] {
        for (n, w) in mesh.boundary_weights(tag) {
            g2 += w * model.surface_current.eval(tag, mesh.nodes()[n]).powi(2);
        }
    }
    let mut rhs = trace_constant * g2.sqrt() + b.sigma_max * b.seebeck_max * fem::gradient_norm(mesh, theta, 2.0);
    for (s, c) in model.species.iter().zip(concentrations) {
        rhs += s.bounds.diffusion_max * fem::gradient_norm(mesh, c, 2.0);
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_interval_mesh, build_rectangle_mesh, SideTags};
    use crate::materials::{nacl_model, Law, NaclOptions, SurfaceCurrent};
    use approx::assert_relative_eq;
    use BoundaryTag::*;

    fn ohmic_model(j: f64) -> MaterialModel {
        let mut m = nacl_model(&NaclOptions::default());
        m.conductivity = Law::constant(359.7);
        m.seebeck = Law::constant(0.0);
        m.surface_current = SurfaceCurrent {
            anode: Law::constant(j),
            cathode: Law::constant(-j),
        };
        m
    }

    fn uniform(mesh: &Mesh, m: &MaterialModel) -> (Vec<f64>, Vec<Vec<f64>>) {
        (vec![1100.0; mesh.node_count()], vec![vec![2.5667e4; mesh.node_count()]; m.species.len()])
    }

    #[test]
    fn zero_data_gives_zero_potential() {
        let m = ohmic_model(0.0);
        let mesh = build_interval_mesh(0.13, 16, Anode, Cathode).unwrap();
        let (t, c) = uniform(&mesh, &m);
        let s = solve_potential(&mesh, &m, &t, &c, &Default::default()).unwrap();
        assert!(s.phi.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn ohm_law_drop() {
        let m = ohmic_model(1e4);
        let mesh = build_interval_mesh(0.13, 32, Anode, Cathode).unwrap();
        let (t, c) = uniform(&mesh, &m);
        let s = solve_potential(&mesh, &m, &t, &c, &Default::default()).unwrap();
        let drop = s.phi[0] - s.phi[32];
        assert_relative_eq!(drop, 1e4 * 0.13 / 359.7, max_relative = 1e-10);
        let max = s.phi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(s.boundary_mean.abs() <= 1e-10 * max);
        assert!(s.charge_balance <= 1e-10);
        // linear profile
        for (i, p) in s.phi.iter().enumerate() {
            assert_relative_eq!(*p, drop * (0.5 - i as f64 / 32.0), epsilon = 1e-10);
        }
    }

    #[test]
    fn incompatible_current_rejected() {
        let mut m = ohmic_model(1e4);
        m.surface_current.cathode = Law::constant(-0.9e4);
        let mesh = build_interval_mesh(0.13, 4, Anode, Cathode).unwrap();
        let (t, c) = uniform(&mesh, &m);
        let err = solve_potential(&mesh, &m, &t, &c, &Default::default()).unwrap_err();
        assert!(matches!(err, Error::IncompatibleData { .. }));
    }

    #[test]
    fn energy_estimate_holds_for_ohmic_case() {
        let m = ohmic_model(1e4);
        let mesh = build_rectangle_mesh(0.13, 0.13, 8, 8, SideTags::new(Anode, Cathode, Wall, Outer)).unwrap();
        let (t, c) = uniform(&mesh, &m);
        let s = solve_potential(&mesh, &m, &t, &c, &Default::default()).unwrap();
        let (lhs, rhs) = energy_estimate(&mesh, &m, &s, &t, &c, 1.0);
        assert!(lhs <= rhs, "{lhs} > {rhs}");
        assert!(s.charge_balance <= 1e-10);
    }

    #[test]
    fn thermoelectric_drive_changes_potential() {
        let m = nacl_model(&NaclOptions::default());
        let mesh = build_interval_mesh(0.13, 16, Anode, Cathode).unwrap();
        let t: Vec<f64> = mesh.nodes().iter().map(|p| 1100.0 + 100.0 * p[0]).collect();
        let c = vec![vec![2.5667e4; 17]; 2];
        let with = solve_potential(&mesh, &m, &t, &c, &Default::default()).unwrap();
        let flat = solve_potential(&mesh, &m, &vec![1100.0; 17], &c, &Default::default()).unwrap();
        assert!((with.phi[0] - with.phi[16] - (flat.phi[0] - flat.phi[16])).abs() > 1e-6);
    }
}
