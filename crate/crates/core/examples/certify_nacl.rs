use tecell::cli::{certify_report, set_parameter};
use tecell::config::CellConfig;

fn main() -> tecell::Result<()> {
    let config = CellConfig::nacl_default();
    println!("{}", certify_report(&config)?.render());

    let later = set_parameter(&config, "certificate.constants.t", 3.0)?;
    let r = certify_report(&later)?;
    println!("T = 3 s: ℬ₀ = {:.4}, certified = {}", r.b0, r.certified);
    Ok(())
}
