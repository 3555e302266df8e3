//! Pointwise force–flux relations of the transport model.

use crate::geometry::Point;
use crate::materials::{CoefficientSet, PhysicalConstants};

#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet {
    /// W·m⁻²
    pub heat: Point,
    /// mol·m⁻²·s⁻¹ per species
    pub ionic: Vec<Point>,
    /// A·m⁻²
    pub current: Point,
}

/// Gradients of every field at one point.
#[derive(Debug, Clone, Copy)]
pub struct Gradients<'a> {
    pub theta: Point,
    pub concentrations: &'a [Point],
    pub phi: Point,
}

fn axpy(acc: &mut Point, a: f64, x: Point) {
    acc[0] += a * x[0];
    acc[1] += a * x[1];
}

/// `q = −K∇θ − Rθ² Σ D'_i ∇c_i − Πσ∇φ`.
pub fn heat_flux(k: &PhysicalConstants, coeffs: &CoefficientSet, grads: Gradients, theta: f64) -> Point {
    let kt = coeffs.conductivity;
    let g = grads.theta;
    let mut q = [-(kt[0][0] * g[0] + kt[0][1] * g[1]), -(kt[1][0] * g[0] + kt[1][1] * g[1])];
    let rt2 = k.gas_constant * theta * theta;
    for (dp, gc) in coeffs.dufour.iter().zip(grads.concentrations) {
        axpy(&mut q, -rt2 * dp, *gc);
    }
    axpy(&mut q, -coeffs.peltier * coeffs.sigma, grads.phi);
    q
}

/// `J_i = −c S_i ∇θ − D_i ∇c_i − u_i c ∇φ` with `u_i = z_i D_i F / (Rθ)`.
pub fn ionic_flux(
    k: &PhysicalConstants,
    coeffs: &CoefficientSet,
    species: usize,
    valence: i32,
    c: f64,
    grads: Gradients,
    theta: f64,
) -> Point {
    let d = coeffs.diffusion[species];
    let mobility = f64::from(valence) * d * k.faraday / (k.gas_constant * theta);
    let mut j = [0.0; 2];
    axpy(&mut j, -c * coeffs.soret[species], grads.theta);
    axpy(&mut j, -d, grads.concentrations[species]);
    axpy(&mut j, -mobility * c, grads.phi);
    j
}

/// `j = −ασ∇θ − F Σ z_i D_i ∇c_i − σ∇φ`.
pub fn current_density(k: &PhysicalConstants, coeffs: &CoefficientSet, valences: &[i32], grads: Gradients) -> Point {
    let mut j = [0.0; 2];
    axpy(&mut j, -coeffs.seebeck * coeffs.sigma, grads.theta);
    for ((z, d), gc) in valences.iter().zip(&coeffs.diffusion).zip(grads.concentrations) {
        axpy(&mut j, -k.faraday * f64::from(*z) * d, *gc);
    }
    axpy(&mut j, -coeffs.sigma, grads.phi);
    j
}

/// All three fluxes at one point.
pub fn flux_set(
    k: &PhysicalConstants,
    coeffs: &CoefficientSet,
    valences: &[i32],
    concentrations: &[f64],
    grads: Gradients,
    theta: f64,
) -> FluxSet {
    FluxSet {
        heat: heat_flux(k, coeffs, grads, theta),
        ionic: (0..valences.len())
            .map(|i| ionic_flux(k, coeffs, i, valences[i], concentrations[i], grads, theta))
            .collect(),
        current: current_density(k, coeffs, valences, grads),
    }
}
