//! CSV series for plotting a finished run.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use membrane_iso::bounds::BoundName;
use membrane_iso::femlab::Mode;
use membrane_iso::hyperball::shoot_mu1;
use membrane_iso::specfun::p_zero;

use crate::run::RunReport;

/// Radii of the hyperbolic-limit curve.
pub const LIMIT_RADII: [f64; 9] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0];

pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn writer(path: &Path) -> io::Result<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_writer(fs::File::create(path)?))
}

/// Writes `scatter.csv`, `convergence.csv` and `hyperbolic_limit.csv` into
/// `dir` and returns their paths.
pub fn write_plotdata(report: &RunReport, dir: impl AsRef<Path>) -> io::Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;

    let scatter = dir.join("scatter.csv");
    let mut w = writer(&scatter)?;
    w.write_record(["id", "n", "asymmetry_sq", "deficit", "line", "tolerance"])?;
    for e in report.entries.iter().filter(|e| e.mode == Mode::Euclidean) {
        let row = e.checks.iter().find(|c| c.bound == BoundName::Deficit21);
        match (e.asymmetry, row) {
            (Some(a), Some(c)) => w.write_record([
                e.id.clone(),
                e.n.to_string(),
                num(a * a),
                num(c.lhs),
                num(c.rhs),
                num(c.tolerance),
            ])?,
            _ => w.write_record([
                e.id.clone(),
                e.n.to_string(),
                opt(e.asymmetry.map(|a| a * a)),
                "".into(),
                "".into(),
                "".into(),
            ])?,
        }
    }
    w.flush()?;

    let convergence = dir.join("convergence.csv");
    let mut w = writer(&convergence)?;
    w.write_record([
        "id",
        "h",
        "max_edge",
        "vertices",
        "mu1",
        "reference",
        "reference_kind",
        "abs_error",
    ])?;
    for t in &report.convergence {
        for r in &t.rows {
            w.write_record([
                t.id.clone(),
                num(r.h),
                num(r.max_edge),
                r.vertices.to_string(),
                num(r.mu1),
                opt(t.reference),
                t.reference_kind.clone(),
                opt(t.reference.map(|m| (r.mu1 - m).abs())),
            ])?;
        }
    }
    w.flush()?;

    let limit = dir.join("hyperbolic_limit.csv");
    let mut w = writer(&limit)?;
    w.write_record(["r", "mu1", "r2_mu1", "euclidean_p2"])?;
    let p2 = p_zero(2).map_err(io::Error::other)?.powi(2);
    for r in LIMIT_RADII {
        let mu = shoot_mu1(2, r).map_err(io::Error::other)?.mu1;
        w.write_record([num(r), num(mu), num(r * r * mu), num(p2)])?;
    }
    w.flush()?;

    Ok(vec![scatter, convergence, limit])
}

/// Writes every bound check of the run to `checks.csv` in `dir`.
pub fn write_checks_csv(report: &RunReport, dir: impl AsRef<Path>) -> io::Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let path = dir.join("checks.csv");
    let mut w = writer(&path)?;
    w.write_record(["id", "bound", "status", "verdict", "lhs", "rhs", "deficit", "tolerance"])?;
    for e in &report.entries {
        for c in &e.checks {
            w.write_record([
                e.id.clone(),
                c.bound.to_string(),
                format!("{:?}", c.status).to_lowercase(),
                format!("{:?}", c.verdict).to_lowercase(),
                num(c.lhs),
                num(c.rhs),
                num(c.deficit),
                num(c.tolerance),
            ])?;
        }
    }
    w.flush()?;
    Ok(path)
}
