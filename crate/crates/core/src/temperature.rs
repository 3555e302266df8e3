//! Implicit Euler step for the temperature with radiation on the wall,
//! Newton cooling on the electrodes and Peltier/Dufour volumetric drives.
//!
//! Coefficients are lagged at θⁿ; the `|Θ|^{ℓ−2}Θ` wall term is kept exact
//! and solved by damped Newton iteration.

use crate::fem::{assemble_gradient_load, assemble_stiffness, cell_gradient, cell_mean};
use crate::geometry::{BoundaryTag, Mesh, Point};
use crate::linalg::{solve_spd, CsrMatrix};
use crate::materials::{evaluate_coefficients, MaterialModel};
use crate::{Error, Result};

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITERS: usize = 50;

/// `h_R |θ|^{ℓ−2} θ − γ` at a wall point.
pub fn radiation_boundary_flux(model: &MaterialModel, x: Point, theta: f64) -> f64 {
    let r = &model.radiation;
    let (th, _) = model.admissible_temperature(theta);
    r.coefficient.eval(x, th) * signed_power(theta, r.exponent) - r.source.eval(x, th)
}

/// `h_C (θ − θ_e)` at an electrode point.
pub fn newton_cooling_flux(model: &MaterialModel, tag: BoundaryTag, x: Point, theta: f64) -> f64 {
    let (th, _) = model.admissible_temperature(theta);
    model.cooling.eval(x, th) * (theta - model.external_temperature(tag))
}

/// `|θ|^{ℓ−2} θ`.
pub fn signed_power(theta: f64, exponent: f64) -> f64 {
    theta.abs().powf(exponent - 2.0) * theta
}

/// Per-step energy accounting, W (per unit depth in 2-D).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBalance {
    /// `ρ c_p ∫ (Θ − θⁿ) dx / dt`
    pub storage: f64,
    /// `∫_{Γ_w} (h_R|Θ|^{ℓ−2}Θ − γ) ds`
    pub radiation: f64,
    /// `∫_Γ h_C (Θ − θ_e) ds`
    pub cooling: f64,
    /// Work of the volumetric couplings tested with `v = 1`; zero by construction.
    pub coupling: f64,
}

impl EnergyBalance {
    /// `|storage + radiation + cooling − coupling|` relative to the largest term.
    pub fn defect(&self) -> f64 {
        let scale = [self.storage, self.radiation, self.cooling, self.coupling]
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        (self.storage + self.radiation + self.cooling - self.coupling).abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureStep {
    pub theta: Vec<f64>,
    pub newton_iterations: usize,
    pub energy: EnergyBalance,
}

/// Extra uniform volumetric heat source `q_s`, W·m⁻³, added to the step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HeatSource(pub f64);

/// One implicit Euler step of the temperature.
pub fn step_temperature(
    mesh: &Mesh,
    model: &MaterialModel,
    theta_prev: &[f64],
    concentrations: &[Vec<f64>],
    phi: &[f64],
    dt: f64,
    linear_tol: f64,
) -> Result<TemperatureStep> {
    step_temperature_with_source(mesh, model, theta_prev, concentrations, phi, dt, HeatSource::default(), linear_tol)
}

#[allow(clippy::too_many_arguments)]
pub fn step_temperature_with_source(
    mesh: &Mesh,
    model: &MaterialModel,
    theta_prev: &[f64],
    concentrations: &[Vec<f64>],
    phi: &[f64],
    dt: f64,
    heat_source: HeatSource,
    linear_tol: f64,
) -> Result<TemperatureStep> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let n = mesh.node_count();
    if theta_prev.len() != n || phi.len() != n || concentrations.iter().any(|c| c.len() != n) {
        return Err(Error::Assembly("field length does not match mesh".into()));
    }
    if theta_prev.iter().chain(phi).any(|v| !v.is_finite()) {
        return Err(Error::Divergence("non-finite field entering temperature step".into()));
    }
    let k = &model.constants;
    let rho_cp = k.volumetric_heat_capacity();

    let cells: Vec<_> = (0..mesh.cells().len())
        .map(|c| evaluate_coefficients(model, mesh.cell_geometry()[c].centroid, cell_mean(mesh, c, theta_prev), &[]))
        .collect();
    let mass: Vec<f64> = mesh.lumped_mass().iter().map(|m| rho_cp * m / dt).collect();

    // Linear Robin part on the electrodes and the radiative data on the wall.
    let mut robin = vec![0.0; n];
    let mut load: Vec<f64> = (0..n)
        .map(|i| mass[i] * theta_prev[i] + heat_source.0 * mesh.lumped_mass()[i])
        .collect();
    for tag in [BoundaryTag::Anode, BoundaryTag::Cathode] {
        for (i, w) in mesh.boundary_weights(tag) {
            let x = mesh.nodes()[i];
            let (th, _) = model.admissible_temperature(theta_prev[i]);
            let h = model.cooling.eval(x, th);
            robin[i] += w * h;
            load[i] += w * h * model.external_temperature(tag);
        }
    }
    let mut rad_coef = vec![0.0; n];
    for (i, w) in mesh.boundary_weights(BoundaryTag::Wall) {
        let x = mesh.nodes()[i];
        let (th, _) = model.admissible_temperature(theta_prev[i]);
        rad_coef[i] = w * model.radiation.coefficient.eval(x, th);
        load[i] += w * model.radiation.source.eval(x, th);
    }

    let drive = assemble_gradient_load(mesh, |c| {
        let cs = &cells[c];
        let th = cell_mean(mesh, c, theta_prev);
        let rt2 = k.gas_constant * th * th;
        let gp = cell_gradient(mesh, c, phi);
        let mut f = [cs.peltier * cs.sigma * gp[0], cs.peltier * cs.sigma * gp[1]];
        for (i, conc) in concentrations.iter().enumerate() {
            let gc = cell_gradient(mesh, c, conc);
            f[0] += rt2 * cs.dufour[i] * gc[0];
            f[1] += rt2 * cs.dufour[i] * gc[1];
        }
        f
    });
    for i in 0..n {
        load[i] -= drive[i];
    }

    let diag: Vec<f64> = (0..n).map(|i| mass[i] + robin[i]).collect();
    let linear = assemble_stiffness(mesh, |c| cells[c].conductivity).add_diagonal(&diag);
    let ell = model.radiation.exponent;

    let residual = |t: &[f64]| -> Vec<f64> {
        let at = linear.matvec(t);
        (0..n).map(|i| at[i] + rad_coef[i] * signed_power(t[i], ell) - load[i]).collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let mut theta = theta_prev.to_vec();
    let mut r = residual(&theta);
    let mut iterations = 0;
    let has_radiation = rad_coef.iter().any(|c| *c != 0.0);
    loop {
        let jac_diag: Vec<f64> = (0..n)
            .map(|i| rad_coef[i] * (ell - 1.0) * theta[i].abs().powf(ell - 2.0))
            .collect();
        let jac: CsrMatrix = linear.add_diagonal(&jac_diag);
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        let (delta, _) = solve_spd(&jac, &neg, linear_tol)?;
        iterations += 1;

        let mut step = 1.0;
        let r0 = norm(&r);
        let mut candidate: Vec<f64>;
        let mut r_new;
        loop {
            candidate = theta.iter().zip(&delta).map(|(t, d)| t + step * d).collect();
            r_new = residual(&candidate);
            if norm(&r_new) <= r0 || step < 1e-6 || !has_radiation {
                break;
            }
            step *= 0.5;
        }
        let update = step * norm(&delta);
        theta = candidate;
        r = r_new;
        if !has_radiation {
            break;
        }
        let scale = norm(&theta).max(1.0);
        if update <= NEWTON_TOL * scale {
            break;
        }
        if iterations >= NEWTON_MAX_ITERS || theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonlinearDivergence { iterations, update });
        }
    }

    let energy = energy_balance(mesh, model, theta_prev, &theta, dt, &drive, &rad_coef, heat_source);
    Ok(TemperatureStep {
        theta,
        newton_iterations: iterations,
        energy,
    })
}

#[allow(clippy::too_many_arguments)]
fn energy_balance(
    mesh: &Mesh,
    model: &MaterialModel,
    theta_prev: &[f64],
    theta: &[f64],
    dt: f64,
    drive: &[f64],
    rad_coef: &[f64],
    heat_source: HeatSource,
) -> EnergyBalance {
    let rho_cp = model.constants.volumetric_heat_capacity();
    let storage = mesh
        .lumped_mass()
        .iter()
        .zip(theta.iter().zip(theta_prev))
        .map(|(m, (a, b))| rho_cp * m * (a - b) / dt)
        .sum();
    let mut radiation = 0.0;
    for (i, w) in mesh.boundary_weights(BoundaryTag::Wall) {
        let (th, _) = model.admissible_temperature(theta_prev[i]);
        radiation += rad_coef[i] * signed_power(theta[i], model.radiation.exponent)
            - w * model.radiation.source.eval(mesh.nodes()[i], th);
    }
    let mut cooling = 0.0;
    for tag in [BoundaryTag::Anode, BoundaryTag::Cathode] {
        for (i, w) in mesh.boundary_weights(tag) {
            let (th, _) = model.admissible_temperature(theta_prev[i]);
            cooling += w * model.cooling.eval(mesh.nodes()[i], th) * (theta[i] - model.external_temperature(tag));
        }
    }
    EnergyBalance {
        storage,
        radiation,
        cooling,
        coupling: heat_source.0 * mesh.measure() - drive.iter().sum::<f64>(),
    }
}
