use tecell::geometry::{build_interval_mesh, BoundaryTag};
use tecell::materials::{nacl_model, NaclOptions};
use tecell::temperature::step_temperature;

fn main() -> tecell::Result<()> {
    let mesh = build_interval_mesh(0.13, 8, BoundaryTag::Wall, BoundaryTag::Wall)?;
    for wall in [1080.0, 1250.0] {
        let model = nacl_model(&NaclOptions {
            wall_temperature: wall,
            ..NaclOptions::default()
        });
        let c = vec![vec![2.5667e4; 9]; model.species.len()];
        let mut theta = vec![1165.0; 9];
        for step in 1..=200 {
            theta = step_temperature(&mesh, &model, &theta, &c, &[0.0; 9], 1e7, 1e-12)?.theta;
            if step % 50 == 0 {
                println!("θ_w = {wall} K, step {step:>3}: θ = {:.9} K", theta[4]);
            }
        }
    }
    Ok(())
}
