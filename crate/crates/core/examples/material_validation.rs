use tecell::geometry::{build_interval_mesh, BoundaryTag};
use tecell::materials::{nacl_model, validate_hypotheses, Law, NaclOptions};

fn main() -> tecell::Result<()> {
    let mesh = build_interval_mesh(0.05, 40, BoundaryTag::Anode, BoundaryTag::Cathode)?;
    let model = nacl_model(&NaclOptions::default());
    let report = validate_hypotheses(&model, &mesh, 64);
    println!("preset: {} samples, {} violations", report.samples, report.violations.len());

    // Push σ above its declared upper bound.
    let mut broken = model.clone();
    broken.conductivity = Law::constant(450.0);
    let report = validate_hypotheses(&broken, &mesh, 64);
    println!("σ = 450 S/m: {} violations", report.violations.len());
    if let Some(v) = report.violations.first() {
        println!("  first: {} {} at θ = {} K ({} vs bound {})", v.hypothesis, v.inequality, v.theta, v.value, v.bound);
    }
    Ok(())
}
