//! Interval and rectangle meshes with a four-part tagged boundary.
//!
//! Nodes always carry two coordinates; 1-D meshes keep `y = 0`. Boundary
//! faces are points in 1-D (unit "area", i.e. a unit cross-section) and edges
//! in 2-D.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Boundary part a face belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Anode,
    Cathode,
    Wall,
    Outer,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [
        BoundaryTag::Anode,
        BoundaryTag::Cathode,
        BoundaryTag::Wall,
        BoundaryTag::Outer,
    ];

    /// Lower value wins when a corner node touches two sides.
    pub fn priority(self) -> u8 {
        match self {
            BoundaryTag::Anode => 0,
            BoundaryTag::Cathode => 1,
            BoundaryTag::Wall => 2,
            BoundaryTag::Outer => 3,
        }
    }

    pub fn is_electrode(self) -> bool {
        matches!(self, BoundaryTag::Anode | BoundaryTag::Cathode)
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryTag::Anode => "anode",
            BoundaryTag::Cathode => "cathode",
            BoundaryTag::Wall => "wall",
            BoundaryTag::Outer => "outer",
        }
    }
}

/// Tags for the four sides of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideTags {
    pub left: BoundaryTag,
    pub right: BoundaryTag,
    pub bottom: BoundaryTag,
    pub top: BoundaryTag,
}

impl SideTags {
    pub fn new(left: BoundaryTag, right: BoundaryTag, bottom: BoundaryTag, top: BoundaryTag) -> Self {
        Self {
            left,
            right,
            bottom,
            top,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFace {
    /// One node in 1-D, two in 2-D.
    pub nodes: Vec<usize>,
    pub tag: BoundaryTag,
    pub area: f64,
    pub normal: Point,
}

/// Per-cell data for piecewise-linear elements.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry {
    pub volume: f64,
    /// Constant gradients of the nodal basis functions, in cell-node order.
    pub grads: Vec<Point>,
    pub centroid: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    nodes: Vec<Point>,
    cells: Vec<Vec<usize>>,
    geometry: Vec<CellGeometry>,
    faces: Vec<BoundaryFace>,
    lumped_mass: Vec<f64>,
    node_tags: Vec<Option<BoundaryTag>>,
}

impl Mesh {
    fn assemble(dim: usize, nodes: Vec<Point>, cells: Vec<Vec<usize>>, faces: Vec<BoundaryFace>) -> Result<Self> {
        let mut geometry = Vec::with_capacity(cells.len());
        for cell in &cells {
            let g = match dim {
                1 => interval_geometry(nodes[cell[0]], nodes[cell[1]]),
                _ => triangle_geometry(nodes[cell[0]], nodes[cell[1]], nodes[cell[2]]),
            };
            if !(g.volume > 0.0) {
                return Err(Error::InvalidGeometry("degenerate cell".into()));
            }
            geometry.push(g);
        }

        let mut lumped_mass = vec![0.0; nodes.len()];
        for (cell, g) in cells.iter().zip(&geometry) {
            let share = g.volume / cell.len() as f64;
            for &n in cell {
                lumped_mass[n] += share;
            }
        }

        let mut node_tags: Vec<Option<BoundaryTag>> = vec![None; nodes.len()];
        for face in &faces {
            for &n in &face.nodes {
                node_tags[n] = match node_tags[n] {
                    Some(t) if t.priority() <= face.tag.priority() => Some(t),
                    _ => Some(face.tag),
                };
            }
        }

        Ok(Self {
            dim,
            nodes,
            cells,
            geometry,
            faces,
            lumped_mass,
            node_tags,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_geometry(&self) -> &[CellGeometry] {
        &self.geometry
    }

    pub fn faces(&self) -> &[BoundaryFace] {
        &self.faces
    }

    /// `∫_Ω φ_i dx` for every nodal basis function.
    pub fn lumped_mass(&self) -> &[f64] {
        &self.lumped_mass
    }

    /// Tag of a boundary node; corners resolve by anode > cathode > wall > outer.
    pub fn node_tag(&self, node: usize) -> Option<BoundaryTag> {
        self.node_tags[node]
    }

    pub fn measure(&self) -> f64 {
        self.geometry.iter().map(|g| g.volume).sum()
    }

    pub fn boundary_measure(&self, tag: BoundaryTag) -> f64 {
        self.faces.iter().filter(|f| f.tag == tag).map(|f| f.area).sum()
    }

    pub fn total_boundary_measure(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    /// Nodal weights `∫_{Γ_tag} φ_i ds`, as `(node, weight)` pairs.
    pub fn boundary_weights(&self, tag: BoundaryTag) -> Vec<(usize, f64)> {
        let mut w = vec![0.0; self.nodes.len()];
        for f in self.faces.iter().filter(|f| f.tag == tag) {
            let share = f.area / f.nodes.len() as f64;
            for &n in &f.nodes {
                w[n] += share;
            }
        }
        w.into_iter().enumerate().filter(|(_, x)| *x > 0.0).collect()
    }

    /// Nodal weights `∫_{∂Ω} φ_i ds` over the whole boundary.
    pub fn all_boundary_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.nodes.len()];
        for f in &self.faces {
            let share = f.area / f.nodes.len() as f64;
            for &n in &f.nodes {
                w[n] += share;
            }
        }
        w
    }
}

fn interval_geometry(a: Point, b: Point) -> CellGeometry {
    let h = b[0] - a[0];
    CellGeometry {
        volume: h,
        grads: vec![[-1.0 / h, 0.0], [1.0 / h, 0.0]],
        centroid: [0.5 * (a[0] + b[0]), 0.0],
    }
}

fn triangle_geometry(a: Point, b: Point, c: Point) -> CellGeometry {
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let area = 0.5 * det;
    // ∇λ_k = rot(opposite edge) / (2A)
    let grad = |p: Point, q: Point| [(p[1] - q[1]) / det, (q[0] - p[0]) / det];
    CellGeometry {
        volume: area,
        grads: vec![grad(b, c), grad(c, a), grad(a, b)],
        centroid: [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0],
    }
}

/// Uniform mesh of `(0, length)` with the two end points tagged.
pub fn build_interval_mesh(length: f64, cells: usize, left: BoundaryTag, right: BoundaryTag) -> Result<Mesh> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidGeometry(format!("interval length must be positive, got {length}")));
    }
    if cells == 0 {
        return Err(Error::InvalidGeometry("interval needs at least one cell".into()));
    }
    let h = length / cells as f64;
    let nodes: Vec<Point> = (0..=cells)
        .map(|i| if i == cells { [length, 0.0] } else { [i as f64 * h, 0.0] })
        .collect();
    let elems = (0..cells).map(|i| vec![i, i + 1]).collect();
    let faces = vec![
        BoundaryFace {
            nodes: vec![0],
            tag: left,
            area: 1.0,
            normal: [-1.0, 0.0],
        },
        BoundaryFace {
            nodes: vec![cells],
            tag: right,
            area: 1.0,
            normal: [1.0, 0.0],
        },
    ];
    Mesh::assemble(1, nodes, elems, faces)
}

/// Structured triangulation of `(0, width) × (0, height)`; each quad is cut
/// along its lower-left to upper-right diagonal.
pub fn build_rectangle_mesh(width: f64, height: f64, nx: usize, ny: usize, tags: SideTags) -> Result<Mesh> {
    if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "rectangle sides must be positive, got {width} × {height}"
        )));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidGeometry("rectangle needs nx, ny ≥ 1".into()));
    }
    let (hx, hy) = (width / nx as f64, height / ny as f64);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let coord = |i: usize, n: usize, h: f64, len: f64| if i == n { len } else { i as f64 * h };

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([coord(i, nx, hx, width), coord(j, ny, hy, height)]);
        }
    }

    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p01, p11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            cells.push(vec![p00, p10, p11]);
            cells.push(vec![p00, p11, p01]);
        }
    }

    let mut faces = Vec::with_capacity(2 * (nx + ny));
    let mut edge = |a: usize, b: usize, tag: BoundaryTag, normal: Point, nodes: &[Point]| {
        let (pa, pb) = (nodes[a], nodes[b]);
        let area = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        faces.push(BoundaryFace {
            nodes: vec![a, b],
            tag,
            area,
            normal,
        });
    };
    for i in 0..nx {
        edge(id(i, 0), id(i + 1, 0), tags.bottom, [0.0, -1.0], &nodes);
        edge(id(i, ny), id(i + 1, ny), tags.top, [0.0, 1.0], &nodes);
    }
    for j in 0..ny {
        edge(id(0, j), id(0, j + 1), tags.left, [-1.0, 0.0], &nodes);
        edge(id(nx, j), id(nx, j + 1), tags.right, [1.0, 0.0], &nodes);
    }

    Mesh::assemble(2, nodes, cells, faces)
}

/// Sum of face areas carrying `tag`; zero when no face does.
pub fn boundary_measure(mesh: &Mesh, tag: BoundaryTag) -> f64 {
    mesh.boundary_measure(tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use BoundaryTag::*;

    fn square_tags() -> SideTags {
        SideTags::new(Anode, Cathode, Wall, Outer)
    }

    #[test]
    fn nacl_interval() {
        let m = build_interval_mesh(0.13, 1, Anode, Cathode).unwrap();
        assert_relative_eq!(m.measure(), 0.13, max_relative = 1e-15);
        assert_eq!(m.faces().len(), 2);
        assert_eq!(m.boundary_measure(Anode), 1.0);
    }

    #[test]
    fn interval_partition_and_uniform_cells() {
        let m = build_interval_mesh(1.0, 10, Anode, Cathode).unwrap();
        assert_relative_eq!(m.measure(), 1.0, max_relative = 1e-12);
        let m = build_interval_mesh(0.13, 64, Anode, Cathode).unwrap();
        for g in m.cell_geometry() {
            assert_relative_eq!(g.volume, 2.03125e-3, max_relative = 1e-12);
        }
    }

    #[test]
    fn invalid_intervals_rejected() {
        assert!(matches!(build_interval_mesh(0.0, 4, Anode, Cathode), Err(Error::InvalidGeometry(_))));
        assert!(matches!(build_interval_mesh(-1.0, 4, Anode, Cathode), Err(Error::InvalidGeometry(_))));
        assert!(matches!(build_interval_mesh(1.0, 0, Anode, Cathode), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn rectangle_counts_and_side_lengths() {
        let m = build_rectangle_mesh(0.13, 0.13, 2, 2, square_tags()).unwrap();
        assert_eq!(m.cells().len(), 8);
        for tag in BoundaryTag::ALL {
            assert_relative_eq!(m.boundary_measure(tag), 0.13, max_relative = 1e-12);
        }
        let unit = build_rectangle_mesh(1.0, 1.0, 1, 1, SideTags::new(Wall, Wall, Wall, Wall)).unwrap();
        assert_eq!(unit.cells().len(), 2);
        assert_relative_eq!(unit.measure(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(unit.boundary_measure(Wall), 4.0, max_relative = 1e-15);
        assert_eq!(unit.boundary_measure(Anode), 0.0);
    }

    #[test]
    fn rectangle_area_matches_width_times_height() {
        let m = build_rectangle_mesh(0.13, 0.13, 16, 16, square_tags()).unwrap();
        assert_relative_eq!(m.measure(), 0.13 * 0.13, max_relative = 1e-12);
        assert!(m.cell_geometry().iter().all(|g| g.volume > 0.0));
    }

    #[test]
    fn invalid_rectangles_rejected() {
        assert!(build_rectangle_mesh(0.0, 1.0, 2, 2, square_tags()).is_err());
        assert!(build_rectangle_mesh(1.0, f64::NAN, 2, 2, square_tags()).is_err());
        assert!(build_rectangle_mesh(1.0, 1.0, 0, 2, square_tags()).is_err());
    }

    #[test]
    fn corner_priority() {
        let m = build_rectangle_mesh(1.0, 1.0, 2, 2, SideTags::new(Outer, Cathode, Anode, Wall)).unwrap();
        // bottom-left touches outer and anode
        assert_eq!(m.node_tag(0), Some(Anode));
        // top-right touches cathode and wall
        assert_eq!(m.node_tag(8), Some(Cathode));
        // top-left touches outer and wall
        assert_eq!(m.node_tag(6), Some(Wall));
        assert_eq!(m.node_tag(4), None);
    }

    #[test]
    fn basis_gradients_sum_to_zero() {
        let m = build_rectangle_mesh(0.3, 0.2, 3, 5, square_tags()).unwrap();
        for g in m.cell_geometry() {
            let sx: f64 = g.grads.iter().map(|d| d[0]).sum();
            let sy: f64 = g.grads.iter().map(|d| d[1]).sum();
            assert!(sx.abs() < 1e-9 && sy.abs() < 1e-9);
        }
        let lumped: f64 = m.lumped_mass().iter().sum();
        assert_relative_eq!(lumped, 0.06, max_relative = 1e-12);
    }

    #[test]
    fn refinement_preserves_measures() {
        let tags = square_tags();
        let mut prev = build_rectangle_mesh(0.13, 0.09, 3, 2, tags).unwrap();
        for k in 1..4 {
            let m = build_rectangle_mesh(0.13, 0.09, 3 << k, 2 << k, tags).unwrap();
            assert_relative_eq!(m.measure(), prev.measure(), max_relative = 1e-12);
            for tag in BoundaryTag::ALL {
                assert_relative_eq!(m.boundary_measure(tag), prev.boundary_measure(tag), max_relative = 1e-12);
            }
            prev = m;
        }
    }

    #[test]
    fn tags_partition_boundary() {
        let m = build_rectangle_mesh(0.2, 0.1, 4, 7, SideTags::new(Anode, Anode, Wall, Outer)).unwrap();
        let sum: f64 = BoundaryTag::ALL.iter().map(|&t| m.boundary_measure(t)).sum();
        assert_relative_eq!(sum, 0.6, max_relative = 1e-12);
        assert_relative_eq!(sum, m.total_boundary_measure(), max_relative = 1e-15);
    }
}
