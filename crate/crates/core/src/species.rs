//! Implicit Euler step for each ionic concentration, with truncated
//! Butler–Volmer exchange on the electrodes and no flux elsewhere.

use serde::{Deserialize, Serialize};

use crate::fem::{assemble_gradient_load, assemble_scalar_stiffness, cell_gradient, cell_mean};
use crate::geometry::Mesh;
use crate::linalg::solve_spd;
use crate::materials::{evaluate_coefficients, MaterialModel, PhysicalConstants};
use crate::{Error, Result};

/// Butler–Volmer kinetics at one electrode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ButlerVolmerParams {
    /// J_l, A·m⁻²
    pub exchange_current: f64,
    /// β ∈ (0, 1)
    pub transfer: f64,
    /// s_l, electrons per formula unit
    pub electrons: i32,
    /// φ_eq, V
    pub equilibrium_potential: f64,
    /// Bound on |s F η / (R θ)|.
    #[serde(default = "default_cap")]
    pub cap: f64,
}

fn default_cap() -> f64 {
    30.0
}

impl ButlerVolmerParams {
    /// Sup of |g| over all arguments once the exponent is truncated.
    pub fn truncation_bound(&self) -> f64 {
        let (b, a) = (self.transfer, self.cap);
        let up = (b * a).exp() - (-(1.0 - b) * a).exp();
        let down = ((1.0 - b) * a).exp() - (-b * a).exp();
        self.exchange_current.abs() * up.max(down)
    }
}

/// `J (e^{βa} − e^{−(1−β)a})` with `a = sFη/(Rθ)` clamped to `[−cap, cap]`.
pub fn butler_volmer_flux(p: &ButlerVolmerParams, k: &PhysicalConstants, theta: f64, phi: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("Butler–Volmer needs θ > 0, got {theta}")));
    }
    let eta = phi - p.equilibrium_potential;
    let a = (f64::from(p.electrons) * k.faraday * eta / (k.gas_constant * theta)).clamp(-p.cap, p.cap);
    // e^{βa} − e^{−(1−β)a} = −e^{βa}·expm1(−a), evaluated at |a| with β
    // mirrored so small η keeps full precision and β = ½ stays exactly odd.
    let branch = |beta: f64, a: f64| -(beta * a).exp() * (-a).exp_m1();
    let value = if a >= 0.0 { branch(p.transfer, a) } else { -branch(1.0 - p.transfer, -a) };
    Ok(p.exchange_current * value)
}

/// Nodal `∫_Γ g_i/(F z_i) v ds` for species `i` at the given θ and φ.
///
/// Reactions act only on their own electrode; wall and outer parts carry no
/// flux.
pub fn boundary_source(mesh: &Mesh, model: &MaterialModel, species: usize, theta: &[f64], phi: &[f64]) -> Result<Vec<f64>> {
    let spec = &model.species[species];
    let fz = model.constants.faraday * f64::from(spec.valence);
    let mut load = vec![0.0; mesh.node_count()];
    for r in &spec.reactions {
        for (n, w) in mesh.boundary_weights(r.electrode) {
            let (th, _) = model.admissible_temperature(theta[n]);
            let g = r.stoichiometry * butler_volmer_flux(&r.kinetics, &model.constants, th, phi[n])?;
            load[n] += w * g / fz;
        }
    }
    Ok(load)
}

/// Result of one concentration step.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationStep {
    pub concentration: Vec<f64>,
    /// Nodes where the new concentration is negative.
    pub negative_nodes: usize,
    /// `∫_Γ g_i/(F z_i) ds`, mol·s⁻¹.
    pub boundary_rate: f64,
}

/// One implicit Euler step of species `i` with θ and φ frozen.
pub fn step_concentration(
    mesh: &Mesh,
    model: &MaterialModel,
    species: usize,
    c_prev: &[f64],
    theta: &[f64],
    phi: &[f64],
    dt: f64,
    linear_tol: f64,
) -> Result<ConcentrationStep> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let n = mesh.node_count();
    for field in [c_prev, theta, phi] {
        if field.len() != n {
            return Err(Error::Assembly("field length does not match mesh".into()));
        }
        if field.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence("non-finite field entering concentration step".into()));
        }
    }
    let spec = &model.species[species];
    let fz = model.constants.faraday * f64::from(spec.valence);

    let cells: Vec<_> = (0..mesh.cells().len())
        .map(|c| evaluate_coefficients(model, mesh.cell_geometry()[c].centroid, cell_mean(mesh, c, theta), &[]))
        .collect();
    let mass: Vec<f64> = mesh.lumped_mass().iter().map(|m| m / dt).collect();
    let system = assemble_scalar_stiffness(mesh, |c| cells[c].diffusion[species]).add_diagonal(&mass);

    let drive = assemble_gradient_load(mesh, |c| {
        let cs = &cells[c];
        let gt = cell_gradient(mesh, c, theta);
        let gp = cell_gradient(mesh, c, phi);
        let cs_soret = cell_mean(mesh, c, c_prev) * cs.soret[species];
        let mig = cs.transference[species] * cs.sigma / fz;
        [cs_soret * gt[0] + mig * gp[0], cs_soret * gt[1] + mig * gp[1]]
    });
    let source = boundary_source(mesh, model, species, theta, phi)?;
    let rhs: Vec<f64> = (0..n).map(|i| mass[i] * c_prev[i] + source[i] - drive[i]).collect();
    let (c, _) = solve_spd(&system, &rhs, linear_tol)?;
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence("non-finite concentration after step".into()));
    }
    Ok(ConcentrationStep {
        negative_nodes: c.iter().filter(|v| **v < 0.0).count(),
        concentration: c,
        boundary_rate: source.iter().sum(),
    })
}

/// `∫_Ω c dx` with the lumped mass.
pub fn total_amount(mesh: &Mesh, c: &[f64]) -> f64 {
    mesh.lumped_mass().iter().zip(c).map(|(m, v)| m * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_interval_mesh, build_rectangle_mesh, BoundaryTag::*, SideTags};
    use crate::materials::{nacl_model, Law, NaclOptions};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params() -> ButlerVolmerParams {
        ButlerVolmerParams {
            exchange_current: 1e4,
            transfer: 0.5,
            electrons: 2,
            equilibrium_potential: 0.0,
            cap: 30.0,
        }
    }

    fn k() -> PhysicalConstants {
        PhysicalConstants::with_medium(1500.0, 1197.8)
    }

    fn diffusion_only() -> MaterialModel {
        let mut m = nacl_model(&NaclOptions::default());
        for s in &mut m.species {
            s.reactions.clear();
            s.soret = Law::constant(0.0);
            s.transference = Law::constant(0.0);
            s.diffusion = Law::constant(1e-3);
        }
        m
    }

    #[test]
    fn equilibrium_gives_zero() {
        assert_eq!(butler_volmer_flux(&params(), &k(), 1100.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_reduces_to_sinh() {
        let v = butler_volmer_flux(&params(), &k(), 1073.15, 0.1).unwrap();
        let x: f64 = 96485.0 * 0.1 / (8.314 * 1073.15);
        assert_relative_eq!(v, 2e4 * x.sinh(), max_relative = 1e-14);
        assert_relative_eq!(v, 2.610e4, max_relative = 1e-3);
    }

    #[test]
    fn nonpositive_temperature_rejected() {
        assert!(butler_volmer_flux(&params(), &k(), 0.0, 0.1).is_err());
    }

    #[test]
    fn truncation_bounds_flux() {
        let p = params();
        for phi in [-50.0, -1.0, 0.3, 40.0] {
            let g = butler_volmer_flux(&p, &k(), 1100.0, phi).unwrap();
            assert!(g.abs() <= p.truncation_bound() * (1.0 + 1e-15));
        }
        assert_relative_eq!(butler_volmer_flux(&p, &k(), 1100.0, 50.0).unwrap(), p.truncation_bound());
    }

    #[test]
    fn uniform_state_is_steady() {
        let m = diffusion_only();
        let mesh = build_interval_mesh(0.13, 10, Anode, Cathode).unwrap();
        let c = vec![2.5667e4; 11];
        let s = step_concentration(&mesh, &m, 0, &c, &vec![1100.0; 11], &vec![0.0; 11], 1.0, 1e-12).unwrap();
        for v in &s.concentration {
            assert_relative_eq!(*v, 2.5667e4, max_relative = 1e-13);
        }
    }

    #[test]
    fn cosine_mode_decays_by_discrete_factor() {
        let m = diffusion_only();
        let (l, cells, dt, d) = (0.13, 32usize, 0.5, 1e-3);
        let mesh = build_interval_mesh(l, cells, Anode, Cathode).unwrap();
        let c0: Vec<f64> = mesh.nodes().iter().map(|p| (std::f64::consts::PI * p[0] / l).cos()).collect();
        let s = step_concentration(&mesh, &m, 0, &c0, &vec![1100.0; cells + 1], &vec![0.0; cells + 1], dt, 1e-12).unwrap();
        let h = l / cells as f64;
        let lam = 4.0 * (std::f64::consts::PI * h / (2.0 * l)).sin().powi(2) / (h * h);
        let factor = 1.0 / (1.0 + dt * d * lam);
        for (a, b) in s.concentration.iter().zip(&c0) {
            assert_relative_eq!(*a, factor * b, epsilon = 1e-12);
        }
        let continuous = 1.0 / (1.0 + dt * d * (std::f64::consts::PI / l).powi(2));
        assert_relative_eq!(factor, continuous, max_relative = 1e-3);
    }

    #[test]
    fn rejects_bad_step() {
        let m = diffusion_only();
        let mesh = build_interval_mesh(1.0, 2, Anode, Cathode).unwrap();
        assert!(step_concentration(&mesh, &m, 0, &[1.0; 3], &[1100.0; 3], &[0.0; 3], 0.0, 1e-12).is_err());
        let bad = [1.0, f64::NAN, 1.0];
        let e = step_concentration(&mesh, &m, 0, &bad, &[1100.0; 3], &[0.0; 3], 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::Divergence(_)));
    }

    #[test]
    fn mass_balance_with_reactions() {
        let m = nacl_model(&NaclOptions::default());
        let mesh = build_rectangle_mesh(0.13, 0.13, 6, 6, SideTags::new(Anode, Cathode, Wall, Outer)).unwrap();
        let n = mesh.node_count();
        let phi: Vec<f64> = mesh.nodes().iter().map(|p| 1.8 - 3.6 * p[0] / 0.13).collect();
        let theta: Vec<f64> = mesh.nodes().iter().map(|p| 1090.0 + 100.0 * p[1]).collect();
        let c = vec![2.5667e4; n];
        for i in 0..2 {
            let dt = 0.5;
            let s = step_concentration(&mesh, &m, i, &c, &theta, &phi, dt, 1e-12).unwrap();
            let change = (total_amount(&mesh, &s.concentration) - total_amount(&mesh, &c)) / dt;
            assert_relative_eq!(change, s.boundary_rate, max_relative = 1e-8);
            assert!(s.boundary_rate < 0.0, "species {i} should be consumed");
        }
    }

    proptest! {
        #[test]
        fn odd_in_overpotential(eta in -0.5..0.5f64, theta in 900.0..1300.0f64) {
            let p = ButlerVolmerParams { cap: 1e3, ..params() };
            let a = butler_volmer_flux(&p, &k(), theta, eta).unwrap();
            let b = butler_volmer_flux(&p, &k(), theta, -eta).unwrap();
            prop_assert_eq!(a, -b);
        }

        #[test]
        fn diffusion_never_grows_l2(seed in 0u64..1000) {
            let m = diffusion_only();
            let mesh = build_interval_mesh(0.13, 12, Anode, Cathode).unwrap();
            let c: Vec<f64> = (0..13).map(|i| ((i as u64 * 2654435761 + seed) % 97) as f64).collect();
            let s = step_concentration(&mesh, &m, 0, &c, &vec![1100.0; 13], &vec![0.0; 13], 3.0, 1e-12).unwrap();
            let l2 = |v: &[f64]| mesh.lumped_mass().iter().zip(v).map(|(w, x)| w * x * x).sum::<f64>();
            prop_assert!(l2(&s.concentration) <= l2(&c) * (1.0 + 1e-12));
        }
    }
}
