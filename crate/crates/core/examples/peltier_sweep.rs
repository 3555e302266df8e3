use tecell::cli::{sweep_csv, sweep_rows, sweep_values};
use tecell::config::CellConfig;

fn main() -> tecell::Result<()> {
    let key = "material.options.peltier_max";
    let rows = sweep_rows(&CellConfig::nacl_default(), key, &sweep_values(0.0, 1.0, 11))?;
    print!("{}", sweep_csv(key, &rows));
    if let Some(edge) = rows.iter().find(|r| !r.certified) {
        println!("first uncertified Π# = {} V", edge.value);
    }
    Ok(())
}
