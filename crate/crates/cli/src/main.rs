use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use membrane_iso::asymmetry::{fraenkel_asymmetry_with, IntersectionMethod};
use membrane_iso::femlab::{assemble, mesh_domain, mesh_volume, solve_eigs, DomainSpec, Mode};
use membrane_iso::hyperball::{check_gamma, check_h_monotone, hyperbolic_ball_volume, rayleigh_quotient, shoot_mu1};
use membrane_iso::json17;
use membrane_iso_cli::catalog::{default_catalog, load_catalog};
use membrane_iso_cli::constants::write_csv;
use membrane_iso_cli::{constants_table, run_entries, write_checks_csv, write_plotdata, RunOptions};
use serde_json::json;

/// Neumann eigenvalue verification toolkit.
#[derive(Parser)]
#[command(name = "membrane-iso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a catalog and check every bound; exit 1 if an asserted check fails.
    Verify {
        /// JSON list of catalog entries; the built-in catalog if omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Report path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for the check table and plot series.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the built-in catalog as JSON.
    Catalog,
    /// Table of dimension-dependent constants.
    Constants {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to json for `.json` outputs and csv otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Lowest Neumann eigenvalues of one domain.
    Spectrum {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Fraenkel asymmetry of one Euclidean domain.
    Asymmetry {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 0.02)]
        h: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// First Neumann eigenvalue of a geodesic ball in hyperbolic space.
    Hyperball {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        r: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Grid,
}

/// Bad input; exit code 2.
struct Usage(String);

impl From<membrane_iso::Error> for Usage {
    fn from(e: membrane_iso::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Usage {
    fn from(e: serde_json::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<csv::Error> for Usage {
    fn from(e: csv::Error) -> Self {
        Usage(e.to_string())
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Usage> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verify(config: Option<PathBuf>, tol: f64, out: Option<PathBuf>, csv: Option<PathBuf>) -> Result<ExitCode, Usage> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let entries = match config {
        Some(path) => load_catalog(path).map_err(|e| Usage(e.to_string()))?,
        None => default_catalog(),
    };
    let opts = RunOptions {
        tol,
        ..RunOptions::default()
    };
    let report = run_entries(&entries, &opts);
    emit(&report.to_json()?, out.as_ref())?;
    if let Some(dir) = csv {
        write_checks_csv(&report, &dir)?;
        write_plotdata(&report, &dir)?;
    }
    for e in &report.entries {
        if let Some(err) = &e.error {
            eprintln!("{}: {err}", e.id);
        }
        for c in e
            .checks
            .iter()
            .filter(|c| c.verdict == membrane_iso::bounds::Verdict::Fail)
        {
            eprintln!("{}: {} {:?} failed ({} < {})", e.id, c.bound, c.status, c.lhs, c.rhs);
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    match cli.command {
        Command::Verify { config, tol, out, csv } => return verify(config, tol, out, csv),
        Command::Catalog => println!("{}", json17::to_string_pretty(&default_catalog())?),
        Command::Constants {
            n_min,
            n_max,
            out,
            format,
        } => {
            let rows = constants_table(n_min, n_max)?;
            let json_out = out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            match format.unwrap_or(if json_out { Format::Json } else { Format::Csv }) {
                Format::Json => emit(&json17::to_string_pretty(&rows)?, out.as_ref())?,
                Format::Csv => match &out {
                    Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
                    None => write_csv(&rows, std::io::stdout().lock())?,
                },
            }
        }
        Command::Spectrum { domain, h, k, mode } => {
            let spec: DomainSpec = domain.parse()?;
            if let Some(m) = mode {
                let m: Mode = m.parse()?;
                if m != spec.mode() {
                    return Err(Usage(format!("mode {m} does not match a {} descriptor", spec.kind())));
                }
            }
            let mesh = mesh_domain(&spec, h)?;
            let (stiff, mass) = assemble(&mesh)?;
            let pairs = solve_eigs(&stiff, &mass, k + 1)?;
            let value = json!({
                "domain": spec,
                "mode": spec.mode(),
                "h": h,
                "vertices": mesh.vertices().len(),
                "max_edge": mesh.max_edge_length(),
                "volume": mesh_volume(&mass),
                "eigenvalues": pairs.values,
                "residuals": pairs.residuals,
            });
            println!("{}", json17::to_string_pretty(&value)?);
        }
        Command::Asymmetry { domain, h, method } => {
            let spec: DomainSpec = domain.parse()?;
            if spec.mode() != Mode::Euclidean {
                return Err(Usage("asymmetry is defined for Euclidean domains".into()));
            }
            let mesh = mesh_domain(&spec, h)?;
            let method = match method {
                Method::Exact => IntersectionMethod::Exact,
                Method::Grid => IntersectionMethod::Grid,
            };
            let res = fraenkel_asymmetry_with(&mesh, method);
            let value = json!({ "domain": spec, "h": h, "method": method, "area": mesh.area(), "result": res });
            println!("{}", json17::to_string_pretty(&value)?);
        }
        Command::Hyperball { n, r } => {
            let sol = shoot_mu1(n, r)?;
            let value = json!({
                "n": n,
                "r": r,
                "mu1": sol.mu1,
                "volume": hyperbolic_ball_volume(n, r)?,
                "boundary_residual": sol.residual,
                "rayleigh_quotient": rayleigh_quotient(&sol),
                "h_max_increment": check_h_monotone(&sol),
                "gamma_max": check_gamma(&sol),
            });
            println!("{}", json17::to_string_pretty(&value)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
