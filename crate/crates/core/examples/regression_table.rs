//! Coefficients of the symbolic ℬ₀, ℬ and 𝒜 polynomials for the preset.

use tecell::certificate::{nacl_regression, EmbeddingConstants};

fn main() -> tecell::Result<()> {
    let table = nacl_regression(&EmbeddingConstants::default())?;
    print!("{}", table.render());
    println!("gated rows pass: {}", table.gates_pass());
    Ok(())
}
