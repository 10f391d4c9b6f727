use std::path::Path;
use std::process::{Command, Output};

use membrane_iso::specfun::p_zero;
use membrane_iso_cli::catalog::{parse_catalog, CatalogEntry};
use membrane_iso_cli::{run_entries, write_plotdata, RunOptions, RunReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_membrane-iso"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const SMALL: &str = r#"[
  {"id": "square", "domain": "rectangle:1,1", "h_levels": [0.2, 0.1]},
  {"id": "disk", "domain": "disk:1", "h_levels": [0.2, 0.1]},
  {"id": "ring", "domain": "annulus:0.3,1", "h_levels": [0.2, 0.1]},
  {"id": "hdisk", "domain": "hyperbolic_disk:1", "h_levels": [0.1, 0.05]}
]"#;

#[test]
fn empty_catalog_gives_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "empty.json", "[]");
    let out = run(&["verify", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.entries.is_empty() && report.passed());
    assert_eq!(report.schema_version, membrane_iso_cli::SCHEMA_VERSION);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        "not json",
        r#"[{"id":"a","domain":"disk:1","h_levels":[0.1,0.2]}]"#,
        r#"[{"id":"a","domain":"blob:1","h_levels":[0.1]}]"#,
    ]
    .iter()
    .enumerate()
    {
        let config = write(dir.path(), &format!("bad{i}.json"), text);
        assert_eq!(run(&["verify", "--config", &config]).status.code(), Some(2), "{text}");
    }
    assert_eq!(
        run(&["verify", "--config", "/nonexistent/catalog.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn an_entry_that_cannot_be_computed_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "huge.json",
        r#"[{"id":"huge","domain":"disk:50","h_levels":[0.01]}]"#,
    );
    let out = run(&["verify", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.entries[0].error.is_some());
}

#[test]
fn observed_entries_never_fail_the_run() {
    let entries = parse_catalog(
        r#"[{"id":"e","domain":"ellipse:2,1","h_levels":[0.2],"status":"observed","bounds":["weinberger_1_3","conj_1_8"]}]"#,
    )
    .unwrap();
    let report = run_entries(&entries, &RunOptions::default());
    assert!(report.passed());
    assert!(report.entries[0]
        .checks
        .iter()
        .all(|c| c.status == membrane_iso::bounds::Status::Observed));
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "small.json", SMALL);
    let mut raw = Vec::new();
    for threads in ["1", "3"] {
        let out = bin()
            .args(["verify", "--config", &config])
            .env("MEMBRANE_ISO_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        raw.push(String::from_utf8(out.stdout).unwrap());
    }
    let strip = |t: &str| {
        t.lines()
            .filter(|l| !l.contains("\"wall_time_s\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&raw[0]), strip(&raw[1]));
    let report: RunReport = serde_json::from_str(&raw[0]).unwrap();
    let ids: Vec<&str> = report.entries.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, ["disk", "hdisk", "ring", "square"]);
}

#[test]
fn report_floats_carry_seventeen_digits() {
    let entries = [CatalogEntry::new("disk", "disk:1", &[0.2])];
    let report = run_entries(&entries, &RunOptions::default());
    let text = report.to_json().unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.entries, report.entries);
    assert!(text.contains(&format!("{:.16e}", report.entries[0].eigenvalues[0])));
}

#[test]
fn csv_outputs_and_plot_series() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "small.json", SMALL);
    let csv_dir = dir.path().join("csv");
    let out = run(&[
        "verify",
        "--config",
        &config,
        "--out",
        &dir.path().join("r.json").display().to_string(),
        "--csv",
        &csv_dir.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();

    let mut scatter = csv::Reader::from_path(csv_dir.join("scatter.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = scatter.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let (deficit, line, tol): (f64, f64, f64) =
            (r[3].parse().unwrap(), r[4].parse().unwrap(), r[5].parse().unwrap());
        assert!(deficit >= line - tol, "{r:?}");
    }

    let mut conv = csv::Reader::from_path(csv_dir.join("convergence.csv")).unwrap();
    assert_eq!(conv.records().count(), 8);

    let mut limit = csv::Reader::from_path(csv_dir.join("hyperbolic_limit.csv")).unwrap();
    let p2 = p_zero(2).unwrap().powi(2);
    let first = limit.records().next().unwrap().unwrap();
    let r2mu: f64 = first[2].parse().unwrap();
    assert!((r2mu / p2 - 1.0).abs() < 5e-3);

    let mut checks = csv::Reader::from_path(csv_dir.join("checks.csv")).unwrap();
    let total: usize = report.entries.iter().map(|e| e.checks.len()).sum();
    assert_eq!(checks.records().count(), total);

    let again = tempfile::tempdir().unwrap();
    let files = write_plotdata(&report, again.path()).unwrap();
    assert_eq!(files.len(), 3);
}

#[test]
fn constants_subcommand() {
    let out = run(&["constants", "--n-min", "2", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("n,omega,p,mu1_ball,alpha,beta,d,thm11_rhs"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = run(&["constants", "--n-max", "20", "--out", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 19);
    assert!(rows.as_array().unwrap().iter().all(|r| r["d"].as_f64().unwrap() > 0.0));
    assert_eq!(run(&["constants", "--n-min", "1"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--n-max", "21"]).status.code(), Some(2));
}

#[test]
fn spectrum_subcommand() {
    let out = run(&["spectrum", "--domain", "rectangle:2,1", "--h", "0.05", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let eigs: Vec<f64> = serde_json::from_value(v["eigenvalues"].clone()).unwrap();
    assert_eq!(eigs.len(), 4);
    let pi2 = std::f64::consts::PI.powi(2);
    assert!(eigs[0].abs() < 1e-8);
    assert!((eigs[1] / (pi2 / 4.0) - 1.0).abs() < 1e-3);
    assert!((eigs[2] / pi2 - 1.0).abs() < 5e-3, "{}", eigs[2] / pi2);
    assert!((v["volume"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let out = run(&[
        "spectrum",
        "--domain",
        "hyperbolic_disk:1",
        "--h",
        "0.05",
        "--k",
        "1",
        "--mode",
        "hyperbolic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["mode"], "hyperbolic");
    assert_eq!(
        run(&["spectrum", "--domain", "disk:1", "--mode", "hyperbolic"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["spectrum", "--domain", "disk:0"]).status.code(), Some(2));
}

#[test]
fn asymmetry_subcommand() {
    let out = run(&["asymmetry", "--domain", "ellipse:2,1", "--h", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let a = v["result"]["value"].as_f64().unwrap();
    assert!((a - 0.4327).abs() < 5e-3, "{a}");
    let out = run(&[
        "asymmetry",
        "--domain",
        "rectangle:1,1",
        "--h",
        "0.1",
        "--method",
        "grid",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        run(&["asymmetry", "--domain", "hyperbolic_disk:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn hyperball_subcommand() {
    let out = run(&["hyperball", "--n", "2", "--r", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let mu = v["mu1"].as_f64().unwrap();
    assert!(mu > 0.0 && mu < p_zero(2).unwrap().powi(2) / 2.25);
    assert!(v["h_max_increment"].as_f64().unwrap() <= 1e-10);
    assert_eq!(run(&["hyperball", "--n", "1", "--r", "1"]).status.code(), Some(2));
    assert_eq!(run(&["hyperball", "--n", "2", "--r", "-1"]).status.code(), Some(2));
}

#[test]
fn catalog_subcommand_round_trips() {
    let out = run(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = parse_catalog(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(entries, membrane_iso_cli::default_catalog());
}
