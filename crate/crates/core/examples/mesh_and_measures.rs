//! Builds the two mesh kinds and prints their measures per boundary part.

use tecell::geometry::{build_interval_mesh, build_rectangle_mesh, BoundaryTag, SideTags};

fn main() -> tecell::Result<()> {
    let line = build_interval_mesh(0.05, 40, BoundaryTag::Anode, BoundaryTag::Cathode)?;
    println!("interval: {} nodes, length {:.4} m", line.node_count(), line.measure());

    let tags = SideTags::new(BoundaryTag::Anode, BoundaryTag::Cathode, BoundaryTag::Wall, BoundaryTag::Outer);
    let square = build_rectangle_mesh(0.13, 0.26, 13, 26, tags)?;
    println!("rectangle: {} nodes, {} cells, area {:.5} m²", square.node_count(), square.cells().len(), square.measure());
    for tag in BoundaryTag::ALL {
        println!("  {:<8} {:.4} m", tag.name(), square.boundary_measure(tag));
    }
    Ok(())
}
