//! Fixed-point coupling of the three field solves and the transient driver.
//!
//! One Picard sweep maps a candidate `(θ, c)` to `φ' → c' → θ'`, each solve
//! using the freshest fields, then relaxes toward the previous candidate.

use serde::{Deserialize, Serialize};

use crate::fem::{gradient_norm, lumped_norm};
use crate::geometry::{BoundaryTag, Mesh};
use crate::materials::MaterialModel;
use crate::potential::{solve_potential, PotentialOptions};
use crate::species::step_concentration;
use crate::temperature::step_temperature;
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Nodes with a negative concentration, summed over species.
    pub negative_concentrations: usize,
    /// Nodes where θ left the admissible range.
    pub clamped_temperatures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    /// s
    pub time: f64,
    /// K
    pub theta: Vec<f64>,
    /// mol·m⁻³, one field per species
    pub concentrations: Vec<Vec<f64>>,
    /// V
    pub phi: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl FieldState {
    /// `(θ₀, c⁰)` sampled at the nodes, with φ = 0.
    pub fn initial(mesh: &Mesh, model: &MaterialModel) -> Self {
        let theta: Vec<f64> = mesh.nodes().iter().map(|x| model.initial_temperature.eval(*x, 0.0)).collect();
        let concentrations = model
            .species
            .iter()
            .map(|s| mesh.nodes().iter().map(|x| s.initial.eval(*x, 0.0)).collect())
            .collect();
        let mut state = Self {
            time: 0.0,
            theta,
            concentrations,
            phi: vec![0.0; mesh.node_count()],
            diagnostics: Diagnostics::default(),
        };
        state.refresh_diagnostics(model);
        state
    }

    pub fn is_finite(&self) -> bool {
        self.theta
            .iter()
            .chain(self.phi.iter())
            .chain(self.concentrations.iter().flatten())
            .all(|v| v.is_finite())
    }

    fn refresh_diagnostics(&mut self, model: &MaterialModel) {
        self.diagnostics = Diagnostics {
            negative_concentrations: self.concentrations.iter().flatten().filter(|v| **v < 0.0).count(),
            clamped_temperatures: self.theta.iter().filter(|t| model.admissible_temperature(**t).1).count(),
        };
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSettings {
    pub tol: f64,
    pub max_iters: usize,
    /// ω ∈ (0, 1]
    pub relaxation: f64,
}

impl Default for PicardSettings {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 50,
            relaxation: 0.7,
        }
    }
}

impl PicardSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iters == 0 || !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::Domain(format!(
                "Picard settings need tol > 0, max_iters ≥ 1 and 0 < ω ≤ 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Field magnitudes used to make the residual unit-free.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualScales {
    pub theta: f64,
    pub concentrations: Vec<f64>,
    pub phi: f64,
}

impl ResidualScales {
    /// Initial means of θ and c, with 1 V for φ. Zero means fall back to 1.
    pub fn from_initial(mesh: &Mesh, initial: &FieldState) -> Self {
        let mean = |f: &[f64]| {
            let m = mesh.lumped_mass().iter().zip(f).map(|(w, v)| w * v).sum::<f64>() / mesh.measure();
            if m.abs() > 0.0 {
                m.abs()
            } else {
                1.0
            }
        };
        Self {
            theta: mean(&initial.theta),
            concentrations: initial.concentrations.iter().map(|c| mean(c)).collect(),
            phi: 1.0,
        }
    }
}

fn relative_change(mesh: &Mesh, new: &[f64], old: &[f64], scale: f64) -> f64 {
    let s: f64 = mesh
        .lumped_mass()
        .iter()
        .zip(new.iter().zip(old))
        .map(|(m, (a, b))| m * (a - b) * (a - b))
        .sum();
    (s / mesh.measure()).sqrt() / scale
}

/// Tolerances shared by the linear solves of one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub potential: PotentialOptions,
    pub linear_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            potential: PotentialOptions::default(),
            linear_tol: 1e-12,
        }
    }
}

/// One application of the relaxed fixed-point map.
///
/// Returns the new candidate and `max` over fields of the relative L² change.
#[allow(clippy::too_many_arguments)]
pub fn picard_step(
    mesh: &Mesh,
    model: &MaterialModel,
    previous: &FieldState,
    candidate: &FieldState,
    dt: f64,
    relaxation: f64,
    scales: &ResidualScales,
    opts: &SolveOptions,
) -> Result<(FieldState, f64)> {
    if !candidate.is_finite() {
        return Err(Error::Divergence("non-finite Picard candidate".into()));
    }
    let pot = solve_potential(mesh, model, &candidate.theta, &candidate.concentrations, &opts.potential)?;
    let phi = pot.phi;
    let mut conc = Vec::with_capacity(model.species.len());
    for i in 0..model.species.len() {
        let s = step_concentration(
            mesh,
            model,
            i,
            &previous.concentrations[i],
            &candidate.theta,
            &phi,
            dt,
            opts.linear_tol,
        )?;
        conc.push(s.concentration);
    }
    let theta = step_temperature(mesh, model, &previous.theta, &conc, &phi, dt, opts.linear_tol)?.theta;

    let w = relaxation;
    let mix = |new: &[f64], old: &[f64]| -> Vec<f64> {
        if w == 1.0 {
            new.to_vec()
        } else {
            new.iter().zip(old).map(|(a, b)| w * a + (1.0 - w) * b).collect()
        }
    };
    let mut next = FieldState {
        time: candidate.time,
        theta: mix(&theta, &candidate.theta),
        concentrations: conc.iter().zip(&candidate.concentrations).map(|(a, b)| mix(a, b)).collect(),
        phi: mix(&phi, &candidate.phi),
        diagnostics: Diagnostics::default(),
    };
    next.refresh_diagnostics(model);

    let mut residual = relative_change(mesh, &next.theta, &candidate.theta, scales.theta);
    residual = residual.max(relative_change(mesh, &next.phi, &candidate.phi, scales.phi));
    for (i, c) in next.concentrations.iter().enumerate() {
        residual = residual.max(relative_change(mesh, c, &candidate.concentrations[i], scales.concentrations[i]));
    }
    Ok((next, residual))
}

/// Norms monitored along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldNorms {
    pub theta_l2: f64,
    pub concentrations_l2: Vec<f64>,
    pub phi_l2: f64,
    /// `‖∇θ‖_{L^p(Ω)}`
    pub grad_theta_p: f64,
    /// `‖θ‖_{L^ℓ(Γ_w)}`
    pub theta_wall_l: f64,
    /// `‖c_i‖_{L^p} + ‖∇c_i‖_{L^p}`
    pub concentrations_w1p: Vec<f64>,
}

impl FieldNorms {
    pub fn measure(mesh: &Mesh, model: &MaterialModel, state: &FieldState, p: f64) -> Self {
        let ell = model.radiation.exponent;
        let wall: f64 = mesh
            .boundary_weights(BoundaryTag::Wall)
            .iter()
            .map(|(i, w)| w * state.theta[*i].abs().powf(ell))
            .sum();
        Self {
            theta_l2: lumped_norm(mesh, &state.theta, 2.0),
            concentrations_l2: state.concentrations.iter().map(|c| lumped_norm(mesh, c, 2.0)).collect(),
            phi_l2: lumped_norm(mesh, &state.phi, 2.0),
            grad_theta_p: gradient_norm(mesh, &state.theta, p),
            theta_wall_l: wall.powf(1.0 / ell),
            concentrations_w1p: state
                .concentrations
                .iter()
                .map(|c| lumped_norm(mesh, c, p) + gradient_norm(mesh, c, p))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub norms: FieldNorms,
    pub diagnostics: Diagnostics,
}

#[derive(Debug)]
pub struct Trajectory {
    /// Initial state followed by one state per completed step.
    pub states: Vec<FieldState>,
    /// One record per step, including a failing one.
    pub records: Vec<StepRecord>,
    pub initial_norms: FieldNorms,
    /// Set when a step failed; `states` then holds the partial trajectory.
    pub failure: Option<Error>,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn last(&self) -> &FieldState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Settings of a transient run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub picard: PicardSettings,
    pub solve: SolveOptions,
    /// Norm exponent for the monitored gradients.
    pub p: f64,
    /// Keep every `snapshot_every`-th state; the final state is always kept.
    pub snapshot_every: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            picard: PicardSettings::default(),
            solve: SolveOptions::default(),
            p: 2.0,
            snapshot_every: 1,
        }
    }
}

/// Number of steps covering `[0, t_final]` with step `dt`.
pub fn step_count(t_final: f64, dt: f64) -> usize {
    if t_final <= 0.0 {
        return 0;
    }
    let k = t_final / dt;
    let r = k.round();
    if (k - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        k.ceil() as usize
    }
}

/// Advances `(θ₀, c⁰)` to `t_final`, running Picard sweeps at every step.
pub fn run_transient(mesh: &Mesh, model: &MaterialModel, settings: &RunSettings, t_final: f64, dt: f64) -> Trajectory {
    let initial = FieldState::initial(mesh, model);
    let initial_norms = FieldNorms::measure(mesh, model, &initial, settings.p);
    let mut traj = Trajectory {
        states: vec![initial],
        records: Vec::new(),
        initial_norms,
        failure: None,
    };
    if let Err(e) = settings.picard.validate() {
        traj.failure = Some(e);
        return traj;
    }
    if !(dt > 0.0) || t_final < 0.0 || !t_final.is_finite() {
        traj.failure = Some(Error::Domain(format!("need dt > 0 and T_final ≥ 0, got dt = {dt}, T = {t_final}")));
        return traj;
    }
    let scales = ResidualScales::from_initial(mesh, &traj.states[0]);
    let steps = step_count(t_final, dt);
    let mut current = traj.states[0].clone();

    for step in 1..=steps {
        let t_next = if step == steps { t_final } else { step as f64 * dt };
        let h = t_next - current.time;
        let mut candidate = FieldState { time: t_next, ..current.clone() };
        let mut residuals = Vec::new();
        let mut converged = false;
        let mut failure = None;
        for _ in 0..settings.picard.max_iters {
            match picard_step(mesh, model, &current, &candidate, h, settings.picard.relaxation, &scales, &settings.solve) {
                Ok((next, r)) => {
                    candidate = next;
                    residuals.push(r);
                    if r <= settings.picard.tol {
                        converged = true;
                        break;
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        let record = StepRecord {
            step,
            time: t_next,
            iterations: residuals.len(),
            converged,
            norms: FieldNorms::measure(mesh, model, &candidate, settings.p),
            diagnostics: candidate.diagnostics.clone(),
            residuals,
        };
        let last_residual = record.residuals.last().copied().unwrap_or(f64::NAN);
        traj.records.push(record);
        if let Some(e) = failure {
            traj.failure = Some(e);
            return traj;
        }
        if !converged {
            traj.failure = Some(Error::NonConvergence { step, residual: last_residual });
            return traj;
        }
        current = candidate;
        if step % settings.snapshot_every.max(1) == 0 || step == steps {
            traj.states.push(current.clone());
        }
    }
    traj
}

/// Compares monitored norms against certificate radii. The radii bound
/// space-time norms of the continuous problem, so this is a diagnostic only.
pub fn within_radii(records: &[StepRecord], radius: f64, species_radii: &[f64]) -> bool {
    records.iter().all(|r| {
        r.norms.grad_theta_p + r.norms.theta_wall_l <= radius
            && r.norms.concentrations_w1p.iter().zip(species_radii).all(|(n, ri)| n <= ri)
    })
}
