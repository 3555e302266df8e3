//! Command-line front end: `run`, `certify` and `sweep`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::certificate::{check_smallness, nacl_regression, radiation_factor, CertificateReport, ModelNumbers};
use crate::config::CellConfig;
use crate::coupler::run_transient;
use crate::error::{Error, Result};
use crate::export::{trajectory_csv, vtk_snapshot, write_text};

/// Overrides `output.dir` of every config.
pub const OUTPUT_ENV: &str = "TECELL_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tecell", version, about = "Thermoelectrochemical cell simulator and existence certificate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the coupled transient simulation.
    Run { config: PathBuf },
    /// Evaluate the smallness conditions and radii.
    Certify {
        config: PathBuf,
        /// Also print the coefficient regression of the NaCl preset.
        #[arg(long)]
        symbolic: bool,
    },
    /// Certify over a range of one numeric config key (dotted path).
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

pub fn output_dir(config: &CellConfig) -> PathBuf {
    std::env::var_os(OUTPUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| config.output.dir.clone())
}

fn species_names(model: &crate::materials::MaterialModel) -> Vec<String> {
    model.species.iter().map(|s| s.name.clone()).collect()
}

#[derive(Serialize)]
struct RunSummary<'a> {
    steps_requested: usize,
    steps_completed: usize,
    final_time: f64,
    completed: bool,
    failure: Option<String>,
    config: &'a CellConfig,
}

pub fn run_config(config: &CellConfig, out: &Path) -> Result<Outcome> {
    let mesh = config.build_mesh()?;
    let model = config.build_model()?;
    let mut settings = config.run_settings();
    if config.output.snapshot_every == 0 {
        settings.snapshot_every = usize::MAX;
    }
    let traj = run_transient(&mesh, &model, &settings, config.solver.t_final, config.solver.dt);
    let names = species_names(&model);

    let mut files = Vec::new();
    let csv = out.join("trajectory.csv");
    write_text(&csv, &trajectory_csv(&traj, &names))?;
    files.push(csv);
    if config.output.snapshot_every > 0 {
        for (k, state) in traj.states.iter().enumerate() {
            let path = out.join("vtk").join(format!("state_{k:04}.vtk"));
            write_text(&path, &vtk_snapshot(&mesh, state, &names))?;
            files.push(path);
        }
    }
    let steps_requested = crate::coupler::step_count(config.solver.t_final, config.solver.dt);
    let steps_completed = traj.records.iter().filter(|r| r.converged).count();
    let summary = RunSummary {
        steps_requested,
        steps_completed,
        final_time: traj.last().time,
        completed: traj.completed(),
        failure: traj.failure.as_ref().map(ToString::to_string),
        config,
    };
    let json = out.join("run.json");
    write_text(&json, &serde_json::to_string_pretty(&summary)?)?;
    files.push(json);

    let text = match &traj.failure {
        None => format!("completed {steps_completed} steps to t = {:e} s", traj.last().time),
        Some(e) => format!("failed after {steps_completed}/{steps_requested} steps: {e}"),
    };
    Ok(Outcome {
        exit_code: if traj.completed() { EXIT_OK } else { EXIT_ERROR },
        summary: text,
        files,
    })
}

pub fn certify_report(config: &CellConfig) -> Result<CertificateReport> {
    let mesh = config.build_mesh()?;
    let model = config.build_model()?;
    let data = config.data_norms(&mesh, &model);
    check_smallness(&model, &config.certificate.constants, data.as_ref())
}

pub fn certify_config(config: &CellConfig, symbolic: bool, out: &Path) -> Result<Outcome> {
    let report = certify_report(config)?;
    let mut files = Vec::new();
    let json = out.join("certificate.json");
    write_text(&json, &serde_json::to_string_pretty(&report)?)?;
    files.push(json);
    let mut summary = report.render();
    if (symbolic || config.certificate.symbolic) && config.is_nacl_preset() {
        let table = nacl_regression(&config.certificate.constants)?;
        let csv = out.join("regression.csv");
        write_text(&csv, &table.to_csv())?;
        files.push(csv);
        summary.push('\n');
        summary.push_str(&table.render());
    }
    Ok(Outcome {
        exit_code: if report.certified { EXIT_OK } else { EXIT_NOT_CERTIFIED },
        summary,
        files,
    })
}

/// Replaces the number (or null) at a dotted key path.
pub fn set_parameter(config: &CellConfig, key: &str, value: f64) -> Result<CellConfig> {
    let mut root = serde_json::to_value(config)?;
    let mut slot = &mut root;
    for part in key.split('.') {
        slot = match slot {
            Value::Object(map) => map.get_mut(part),
            Value::Array(items) => part.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| Error::UnknownParameter(key.into()))?;
    }
    if !(slot.is_number() || slot.is_null()) {
        return Err(Error::UnknownParameter(format!("{key} (not numeric)")));
    }
    *slot = serde_json::Number::from_f64(value)
        .map(Value::Number)
        .ok_or_else(|| Error::Domain(format!("value {value} is not finite")))?;
    let text = serde_json::to_string(&root)?;
    CellConfig::from_json_str(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub certified: bool,
    pub b0: f64,
    pub margin: f64,
    pub min_margin: f64,
    /// (b_# k_#)^{−1/ℓ}
    pub radiation_factor: f64,
    pub reason: Option<String>,
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..steps)
            .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

pub fn sweep_rows(config: &CellConfig, key: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    // Fail on a bad key even when the range is empty.
    set_parameter(config, key, values.first().copied().unwrap_or(0.0)).map(|_| ())?;
    values
        .par_iter()
        .map(|&v| {
            let c = set_parameter(config, key, v)?;
            let report = certify_report(&c)?;
            let numbers = ModelNumbers::from_model(&c.build_model()?)?;
            Ok(SweepRow {
                value: v,
                certified: report.certified,
                b0: report.b0,
                margin: report.margin,
                min_margin: report.min_margin,
                radiation_factor: radiation_factor(&numbers),
                reason: report.reason,
            })
        })
        .collect()
}

pub fn sweep_csv(key: &str, rows: &[SweepRow]) -> String {
    let mut out = format!(
        "# {key}, certified (0/1), ℬ₀, margin = 1 − ℬ₀, smallest condition margin, (b_#k_#)^(-1/ℓ), first failing condition\n"
    );
    out.push_str("value,certified,b0,margin,min_margin,radiation_factor,reason\n");
    for r in rows {
        out.push_str(&format!(
            "{:e},{},{:e},{:e},{:e},{:e},{}\n",
            r.value,
            u8::from(r.certified),
            r.b0,
            r.margin,
            r.min_margin,
            r.radiation_factor,
            r.reason.as_deref().unwrap_or("")
        ));
    }
    out
}

pub fn sweep_config(config: &CellConfig, key: &str, from: f64, to: f64, steps: usize, out: &Path) -> Result<Outcome> {
    let rows = sweep_rows(config, key, &sweep_values(from, to, steps))?;
    let csv = out.join("sweep.csv");
    write_text(&csv, &sweep_csv(key, &rows))?;
    let certified = rows.iter().filter(|r| r.certified).count();
    Ok(Outcome {
        exit_code: EXIT_OK,
        summary: format!("{} samples of {key}, {certified} certified", rows.len()),
        files: vec![csv],
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let load = |p: &Path| {
        let c = CellConfig::load(p)?;
        let out = output_dir(&c);
        Ok::<_, Error>((c, out))
    };
    match &cli.command {
        Command::Run { config } => {
            let (c, out) = load(config)?;
            run_config(&c, &out)
        }
        Command::Certify { config, symbolic } => {
            let (c, out) = load(config)?;
            certify_config(&c, *symbolic, &out)
        }
        Command::Sweep {
            config,
            param,
            from,
            to,
            steps,
        } => {
            let (c, out) = load(config)?;
            sweep_config(&c, param, *from, *to, *steps, &out)
        }
    }
}

/// Runs a parsed command and returns its exit code.
pub fn execute(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(o) => {
            println!("{}", o.summary);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_values_inclusive() {
        assert!(sweep_values(0.0, 1.0, 0).is_empty());
        assert_eq!(sweep_values(0.2, 0.5, 1), vec![0.2]);
        let v = sweep_values(0.0, 1.0, 5);
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn set_parameter_paths() {
        let c = CellConfig::nacl_default();
        let d = set_parameter(&c, "material.options.peltier_max", 0.5).unwrap();
        assert_eq!(d.material.options.peltier_max, Some(0.5));
        let d = set_parameter(&c, "geometry.size.0", 0.1).unwrap();
        assert_eq!(d.geometry.size[0], 0.1);
        assert!(matches!(
            set_parameter(&c, "material.options.nope", 1.0),
            Err(Error::UnknownParameter(_))
        ));
        assert!(set_parameter(&c, "material.preset", 1.0).is_err());
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from([
            "tecell", "sweep", "c.json", "--param", "a.b", "--from", "-1", "--to", "1", "--steps", "3",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Sweep { steps: 3, .. }));
        let cli = Cli::try_parse_from(["tecell", "certify", "c.json", "--symbolic"]).unwrap();
        assert!(matches!(cli.command, Command::Certify { symbolic: true, .. }));
    }
}
