use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tecell::config::CellConfig;

fn tecell(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tecell"))
        .args(args)
        .env("TECELL_OUTPUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(&CellConfig::nacl_default().to_json().unwrap()).unwrap();
    edit(&mut v);
    let path = dir.join("cell.json");
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_writes_one_row_per_time_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| {
        v["solver"]["t_final"] = json!(10.0);
        v["solver"]["dt"] = json!(1.0);
    });
    let out = dir.path().join("out");
    let o = tecell(&["run", &cfg], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 11);
    assert!(out.join("run.json").exists());
}

#[test]
fn missing_time_step_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| {
        v["solver"].as_object_mut().unwrap().remove("dt");
    });
    let o = tecell(&["run", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("solver.dt"));
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |v| v["material"]["options"]["peltier_max"] = json!(0.0));
    let o = tecell(&["certify", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(report["certified"], json!(true));

    let cfg = write_config(dir.path(), |v| v["material"]["options"]["peltier_max"] = json!(1.0));
    let o = tecell(&["certify", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("ℬ₀ < 1"));
}

#[test]
fn symbolic_certify_writes_regression() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |_| {});
    let o = tecell(&["certify", &cfg, "--symbolic"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("regression.csv")).unwrap();
    assert!(csv.lines().filter(|l| !l.starts_with('#')).count() - 1 >= 15);
}

#[test]
fn sweep_with_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |_| {});
    let o = tecell(
        &["sweep", &cfg, "--param", "material.options.emissivity", "--from", "0.2", "--to", "0.5", "--steps", "0"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);

    let o = tecell(&["sweep", &cfg, "--param", "material.options.nope", "--from", "0", "--to", "1", "--steps", "3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_rows_follow_the_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), |_| {});
    let o = tecell(
        &["sweep", &cfg, "--param", "material.options.peltier_max", "--from", "0", "--to", "1", "--steps", "5"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let certified: Vec<&str> = csv.lines().skip(2).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(certified.first(), Some(&"1"));
    assert_eq!(certified.last(), Some(&"0"));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("elsewhere");
    let cfg = write_config(dir.path(), |v| {
        v["output"]["dir"] = json!(dir.path().join("configured"));
        v["solver"]["t_final"] = json!(2.0);
    });
    assert!(tecell(&["run", &cfg], &target).status.success());
    assert!(target.join("trajectory.csv").exists());
    assert!(!dir.path().join("configured").exists());
}
