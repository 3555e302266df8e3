//! P1 assembly on intervals and triangles.
//!
//! Coefficients are frozen per cell at the centroid. Time derivatives and
//! boundary integrals use the lumped (row-sum) mass.

use rayon::prelude::*;

use crate::geometry::{Mesh, Point};
use crate::linalg::CsrMatrix;

/// Nodal field interpolated at a cell centroid.
pub fn cell_mean(mesh: &Mesh, cell: usize, field: &[f64]) -> f64 {
    let nodes = &mesh.cells()[cell];
    nodes.iter().map(|&n| field[n]).sum::<f64>() / nodes.len() as f64
}

/// Constant gradient of a P1 field on one cell.
pub fn cell_gradient(mesh: &Mesh, cell: usize, field: &[f64]) -> Point {
    let g = &mesh.cell_geometry()[cell];
    let mut out = [0.0; 2];
    for (k, &n) in mesh.cells()[cell].iter().enumerate() {
        out[0] += g.grads[k][0] * field[n];
        out[1] += g.grads[k][1] * field[n];
    }
    out
}

/// `∫ (A ∇φ_j)·∇φ_i dx` with `A` constant on each cell.
///
/// Local blocks are computed in parallel and summed in cell order, so the
/// result does not depend on thread scheduling.
pub fn assemble_stiffness<F>(mesh: &Mesh, coefficient: F) -> CsrMatrix
where
    F: Fn(usize) -> [[f64; 2]; 2] + Sync,
{
    let locals: Vec<Vec<(usize, usize, f64)>> = (0..mesh.cells().len())
        .into_par_iter()
        .map(|c| {
            let a = coefficient(c);
            let g = &mesh.cell_geometry()[c];
            let nodes = &mesh.cells()[c];
            let mut out = Vec::with_capacity(nodes.len() * nodes.len());
            for (i, &ni) in nodes.iter().enumerate() {
                for (j, &nj) in nodes.iter().enumerate() {
                    let gj = g.grads[j];
                    let agj = [a[0][0] * gj[0] + a[0][1] * gj[1], a[1][0] * gj[0] + a[1][1] * gj[1]];
                    let v = g.volume * (agj[0] * g.grads[i][0] + agj[1] * g.grads[i][1]);
                    out.push((ni, nj, v));
                }
            }
            out
        })
        .collect();
    let triplets: Vec<_> = locals.into_iter().flatten().collect();
    CsrMatrix::from_triplets(mesh.node_count(), &triplets)
}

/// Isotropic scalar stiffness.
pub fn assemble_scalar_stiffness<F>(mesh: &Mesh, coefficient: F) -> CsrMatrix
where
    F: Fn(usize) -> f64 + Sync,
{
    assemble_stiffness(mesh, |c| {
        let k = coefficient(c);
        [[k, 0.0], [0.0, k]]
    })
}

/// `∫ F·∇φ_i dx` with the vector `F` constant on each cell.
pub fn assemble_gradient_load<F>(mesh: &Mesh, flux: F) -> Vec<f64>
where
    F: Fn(usize) -> Point + Sync,
{
    let locals: Vec<Point> = (0..mesh.cells().len()).into_par_iter().map(&flux).collect();
    let mut out = vec![0.0; mesh.node_count()];
    for (c, f) in locals.iter().enumerate() {
        let g = &mesh.cell_geometry()[c];
        for (k, &n) in mesh.cells()[c].iter().enumerate() {
            out[n] += g.volume * (f[0] * g.grads[k][0] + f[1] * g.grads[k][1]);
        }
    }
    out
}

/// `∫ f φ_i dx` by edge-midpoint quadrature on triangles and two-point
/// Gauss on intervals; exact for quadratic `f`.
pub fn assemble_source<F>(mesh: &Mesh, f: F) -> Vec<f64>
where
    F: Fn(Point) -> f64,
{
    let mut out = vec![0.0; mesh.node_count()];
    for (c, nodes) in mesh.cells().iter().enumerate() {
        let vol = mesh.cell_geometry()[c].volume;
        let p: Vec<Point> = nodes.iter().map(|&n| mesh.nodes()[n]).collect();
        if mesh.dim() == 1 {
            let s = 0.5 / 3f64.sqrt();
            for xi in [0.5 - s, 0.5 + s] {
                let x = [p[0][0] + xi * (p[1][0] - p[0][0]), 0.0];
                let fx = f(x) * 0.5 * vol;
                out[nodes[0]] += fx * (1.0 - xi);
                out[nodes[1]] += fx * xi;
            }
        } else {
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let m = [0.5 * (p[a][0] + p[b][0]), 0.5 * (p[a][1] + p[b][1])];
                let fm = f(m) * vol / 3.0;
                out[nodes[a]] += 0.5 * fm;
                out[nodes[b]] += 0.5 * fm;
            }
        }
    }
    out
}

/// Seven-point (degree 5) rule on the reference triangle: barycentric
/// coordinates and weights summing to one.
pub const TRIANGLE_RULE_7: [([f64; 3], f64); 7] = {
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_34;
    const W1: f64 = 0.132_394_152_788_506_18;
    const W2: f64 = 0.125_939_180_544_827_15;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
        ([A1, B1, B1], W1),
        ([B1, A1, B1], W1),
        ([B1, B1, A1], W1),
        ([A2, B2, B2], W2),
        ([B2, A2, B2], W2),
        ([B2, B2, A2], W2),
    ]
};

/// `‖u_h − u‖_{L²(Ω)}` for a P1 field against an exact function.
pub fn l2_error<F>(mesh: &Mesh, field: &[f64], exact: F) -> f64
where
    F: Fn(Point) -> f64,
{
    let mut sum = 0.0;
    for (c, nodes) in mesh.cells().iter().enumerate() {
        let vol = mesh.cell_geometry()[c].volume;
        let p: Vec<Point> = nodes.iter().map(|&n| mesh.nodes()[n]).collect();
        if mesh.dim() == 1 {
            let s = 0.5 / 3f64.sqrt();
            for xi in [0.5 - s, 0.5 + s] {
                let x = [p[0][0] + xi * (p[1][0] - p[0][0]), 0.0];
                let uh = field[nodes[0]] * (1.0 - xi) + field[nodes[1]] * xi;
                sum += 0.5 * vol * (uh - exact(x)).powi(2);
            }
        } else {
            for (lam, w) in TRIANGLE_RULE_7 {
                let x = [
                    lam[0] * p[0][0] + lam[1] * p[1][0] + lam[2] * p[2][0],
                    lam[0] * p[0][1] + lam[1] * p[1][1] + lam[2] * p[2][1],
                ];
                let uh = lam[0] * field[nodes[0]] + lam[1] * field[nodes[1]] + lam[2] * field[nodes[2]];
                sum += w * vol * (uh - exact(x)).powi(2);
            }
        }
    }
    sum.sqrt()
}

/// Discrete `‖u‖_{L^q(Ω)}` with the lumped mass.
pub fn lumped_norm(mesh: &Mesh, field: &[f64], q: f64) -> f64 {
    let s: f64 = mesh.lumped_mass().iter().zip(field).map(|(m, u)| m * u.abs().powf(q)).sum();
    s.powf(1.0 / q)
}

/// `‖∇u‖_{L^q(Ω)}` of a P1 field.
pub fn gradient_norm(mesh: &Mesh, field: &[f64], q: f64) -> f64 {
    let s: f64 = (0..mesh.cells().len())
        .map(|c| {
            let g = cell_gradient(mesh, c, field);
            mesh.cell_geometry()[c].volume * (g[0] * g[0] + g[1] * g[1]).powf(0.5 * q)
        })
        .sum();
    s.powf(1.0 / q)
}

/// Mean of a nodal field weighted by `weights`.
pub fn weighted_mean(field: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    field.iter().zip(weights).map(|(u, w)| u * w).sum::<f64>() / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_interval_mesh, build_rectangle_mesh, BoundaryTag::*, SideTags};
    use approx::assert_relative_eq;

    fn square(n: usize) -> Mesh {
        build_rectangle_mesh(1.0, 1.0, n, n, SideTags::new(Anode, Cathode, Wall, Outer)).unwrap()
    }

    #[test]
    fn stiffness_annihilates_constants() {
        let mesh = square(5);
        let k = assemble_scalar_stiffness(&mesh, |_| 2.5);
        for v in k.matvec(&vec![3.0; mesh.node_count()]) {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn stiffness_energy_of_linear_field() {
        let mesh = square(4);
        let u: Vec<f64> = mesh.nodes().iter().map(|p| 2.0 * p[0] - p[1]).collect();
        let k = assemble_scalar_stiffness(&mesh, |_| 1.0);
        let e: f64 = u.iter().zip(k.matvec(&u)).map(|(a, b)| a * b).sum();
        assert_relative_eq!(e, 5.0, max_relative = 1e-12);
    }

    #[test]
    fn gradient_of_linear_field_is_exact() {
        let mesh = square(3);
        let u: Vec<f64> = mesh.nodes().iter().map(|p| 0.5 + 3.0 * p[0] + 7.0 * p[1]).collect();
        for c in 0..mesh.cells().len() {
            let g = cell_gradient(&mesh, c, &u);
            assert_relative_eq!(g[0], 3.0, epsilon = 1e-12);
            assert_relative_eq!(g[1], 7.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gradient_load_sums_to_zero() {
        let mesh = square(4);
        let b = assemble_gradient_load(&mesh, |c| [c as f64, 1.0 - c as f64]);
        assert!(b.iter().sum::<f64>().abs() < 1e-10);
    }

    #[test]
    fn source_integrates_quadratics() {
        let mesh = square(3);
        let b = assemble_source(&mesh, |p| p[0] * p[0]);
        assert_relative_eq!(b.iter().sum::<f64>(), 1.0 / 3.0, max_relative = 1e-13);
        let line = build_interval_mesh(2.0, 3, Anode, Cathode).unwrap();
        let b = assemble_source(&line, |p| p[0] * p[0]);
        assert_relative_eq!(b.iter().sum::<f64>(), 8.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn seven_point_rule_weights() {
        let s: f64 = TRIANGLE_RULE_7.iter().map(|r| r.1).sum();
        assert_relative_eq!(s, 1.0, epsilon = 1e-15);
        let mesh = square(2);
        let zero = vec![0.0; mesh.node_count()];
        // ∫ x²y² over the unit square = 1/9
        let e = l2_error(&mesh, &zero, |p| p[0] * p[1]);
        assert_relative_eq!(e * e, 1.0 / 9.0, max_relative = 1e-13);
    }

    #[test]
    fn lumped_norms() {
        let mesh = square(4);
        let u = vec![2.0; mesh.node_count()];
        assert_relative_eq!(lumped_norm(&mesh, &u, 2.0), 2.0, max_relative = 1e-14);
        assert_relative_eq!(gradient_norm(&mesh, &u, 2.0), 0.0);
    }
}
