//! The verification pipeline and its report.

use std::path::Path;
use std::time::Instant;

use membrane_iso::asymmetry::fraenkel_asymmetry;
use membrane_iso::bounds::{evaluate_bound, BoundInputs, BoundReport, Status, Verdict, DEFAULT_TOLERANCE};
use membrane_iso::femlab::{assemble, mesh_domain, mesh_volume, solve_eigs, DomainSpec, Mode};
use membrane_iso::hyperball::{ball_radius_for_volume, shoot_mu1};
use membrane_iso::specfun::mu1_ball;
use membrane_iso::{Point, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{load_catalog, CatalogEntry, ConfigError};
use crate::constants::{constants_table, ConstantsRow};

pub const SCHEMA_VERSION: u32 = 1;

/// Nonzero eigenvalues computed per mesh.
const EIGENVALUES: usize = 3;

/// Dimension of every catalog domain.
const PLANE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Relative verdict tolerance before the FEM error estimate is added.
    pub tol: f64,
    /// Worker threads; `None` uses the machine's parallelism.
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            threads: threads_from_env(),
        }
    }
}

/// `MEMBRANE_ISO_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("MEMBRANE_ISO_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Results for one catalog entry, computed on its finest mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub domain: DomainSpec,
    pub mode: Mode,
    pub n: usize,
    pub simply_connected: bool,
    #[serde(deserialize_with = "nan_if_null")]
    pub h: f64,
    pub vertices: usize,
    /// Area in the entry's metric, from the mass matrix.
    #[serde(deserialize_with = "nan_if_null")]
    pub volume: f64,
    /// `μ₁, μ₂, …` on the finest mesh.
    pub eigenvalues: Vec<f64>,
    /// Relative tolerance applied to the checks.
    #[serde(deserialize_with = "nan_if_null")]
    pub eps_num: f64,
    /// Richardson estimate of the relative error of `μ₁`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fem_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetry_center: Option<Point>,
    /// Radius of the geodesic disk with the same hyperbolic area.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball_mu1: Option<f64>,
    pub checks: Vec<BoundReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Non-finite floats are written as `null`.
fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_edge: f64,
    pub vertices: usize,
    pub mu1: f64,
    pub volume: f64,
}

/// `μ₁` over the h-levels of one entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub id: String,
    /// Value the errors are measured against.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    /// `exact`, `shooting`, `richardson` or `none`.
    pub reference_kind: String,
    /// Observed order from the three finest levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub tolerance: f64,
    pub entries: Vec<EntryReport>,
    pub constants: Vec<ConstantsRow>,
    pub convergence: Vec<ConvergenceTable>,
    /// `pass` iff every asserted check passed and no entry errored.
    pub verdict: Verdict,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn to_json(&self) -> serde_json::Result<String> {
        membrane_iso::json17::to_string_pretty(self)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Level {
    row: ConvergenceRow,
    eigenvalues: Vec<f64>,
    mesh: membrane_iso::femlab::TriMesh,
}

fn solve_level(spec: &DomainSpec, h: f64) -> Result<Level> {
    let mesh = mesh_domain(spec, h)?;
    let (k, m) = assemble(&mesh)?;
    let pairs = solve_eigs(&k, &m, EIGENVALUES + 1)?;
    let eigenvalues = pairs.values[1..].to_vec();
    Ok(Level {
        row: ConvergenceRow {
            h,
            max_edge: mesh.max_edge_length(),
            vertices: mesh.vertices().len(),
            mu1: eigenvalues[0],
            volume: mesh_volume(&m),
        },
        eigenvalues,
        mesh,
    })
}

/// Known `μ₁` for shapes with a closed form or a shooting solution.
fn reference_mu1(spec: &DomainSpec) -> Result<Option<(f64, &'static str)>> {
    Ok(match *spec {
        DomainSpec::Disk { r } => Some((mu1_ball(PLANE, r)?, "exact")),
        DomainSpec::Rectangle { a, b } => Some(((std::f64::consts::PI / a.max(b)).powi(2), "exact")),
        DomainSpec::HyperbolicDisk { rho } => Some((shoot_mu1(PLANE, rho)?.mu1, "shooting")),
        _ => None,
    })
}

/// Richardson comparison of the two finest levels for a second-order method:
/// `(limit, relative error estimate of the finest value)`.
fn richardson(rows: &[ConvergenceRow]) -> Option<(f64, f64)> {
    let [.., c, f] = rows else { return None };
    let q = (c.h / f.h).powi(2) - 1.0;
    let err = (f.mu1 - c.mu1) / q;
    Some((f.mu1 + err, (err / f.mu1).abs()))
}

fn observed_order(rows: &[ConvergenceRow], reference: Option<f64>) -> Option<f64> {
    let [.., a, b, c] = rows else { return None };
    let (e1, e2) = match reference {
        Some(m) => ((b.mu1 - m).abs(), (c.mu1 - m).abs()),
        None => ((a.mu1 - b.mu1).abs(), (b.mu1 - c.mu1).abs()),
    };
    let order = (e1 / e2).ln() / (b.h / c.h).ln();
    order.is_finite().then_some(order)
}

fn run_entry(entry: &CatalogEntry, tol: f64) -> Result<(EntryReport, ConvergenceTable)> {
    let mode = entry.mode();
    let levels: Vec<Level> = entry
        .h_levels
        .iter()
        .map(|&h| solve_level(&entry.domain, h))
        .collect::<Result<_>>()?;
    let rows: Vec<ConvergenceRow> = levels.iter().map(|l| l.row.clone()).collect();
    let finest = levels.last().expect("validated entries have h-levels");

    let fem = richardson(&rows);
    let fem_error = fem.map(|f| f.1);
    let eps_num = tol.max(2.0 * fem_error.unwrap_or(0.0));

    let (reference, reference_kind) = match (reference_mu1(&entry.domain)?, fem) {
        (Some((m, kind)), _) => (Some(m), kind),
        (None, Some((m, _))) => (Some(m), "richardson"),
        (None, None) => (None, "none"),
    };
    let order = observed_order(&rows, reference.filter(|_| reference_kind != "richardson"));

    let volume = finest.row.volume;
    let (asym, ball_radius, ball_mu1) = match mode {
        Mode::Euclidean => (Some(fraenkel_asymmetry(&finest.mesh)), None, None),
        Mode::Hyperbolic => {
            let r = ball_radius_for_volume(PLANE, volume)?;
            (None, Some(r), Some(shoot_mu1(PLANE, r)?.mu1))
        }
    };

    let simply_connected = entry.domain.is_simply_connected();
    let input = BoundInputs {
        id: &entry.id,
        n: PLANE,
        volume,
        eigenvalues: &finest.eigenvalues,
        asymmetry: asym.as_ref().map(|a| a.value),
        simply_connected,
        ball_mu1,
        eps_rel: eps_num,
    };
    let checks: Vec<BoundReport> = entry
        .bounds()
        .into_iter()
        .map(|b| evaluate_bound(b, &input, entry.status))
        .collect::<Result<_>>()?;
    let failed = checks
        .iter()
        .any(|c| c.status == Status::Asserted && c.verdict == Verdict::Fail);

    let report = EntryReport {
        id: entry.id.clone(),
        domain: entry.domain.clone(),
        mode,
        n: PLANE,
        simply_connected,
        h: finest.row.h,
        vertices: finest.row.vertices,
        volume,
        eigenvalues: finest.eigenvalues.clone(),
        eps_num,
        fem_error,
        asymmetry: asym.as_ref().map(|a| a.value),
        asymmetry_center: asym.as_ref().map(|a| a.center),
        ball_radius,
        ball_mu1,
        checks,
        verdict: if failed { Verdict::Fail } else { Verdict::Pass },
        error: None,
    };
    let table = ConvergenceTable {
        id: entry.id.clone(),
        reference,
        reference_kind: reference_kind.to_string(),
        order,
        rows,
    };
    Ok((report, table))
}

fn failed_entry(entry: &CatalogEntry, err: membrane_iso::Error) -> (EntryReport, ConvergenceTable) {
    let report = EntryReport {
        id: entry.id.clone(),
        domain: entry.domain.clone(),
        mode: entry.mode(),
        n: PLANE,
        simply_connected: entry.domain.is_simply_connected(),
        h: *entry.h_levels.last().unwrap_or(&f64::NAN),
        vertices: 0,
        volume: f64::NAN,
        eigenvalues: Vec::new(),
        eps_num: f64::NAN,
        fem_error: None,
        asymmetry: None,
        asymmetry_center: None,
        ball_radius: None,
        ball_mu1: None,
        checks: Vec::new(),
        verdict: Verdict::Fail,
        error: Some(err.to_string()),
    };
    let table = ConvergenceTable {
        id: entry.id.clone(),
        reference: None,
        reference_kind: "none".into(),
        order: None,
        rows: Vec::new(),
    };
    (report, table)
}

/// Runs validated entries concurrently; the report lists them by id.
pub fn run_entries(entries: &[CatalogEntry], opts: &RunOptions) -> RunReport {
    let start = Instant::now();
    let work = || -> Vec<(EntryReport, ConvergenceTable)> {
        entries
            .par_iter()
            .map(|e| run_entry(e, opts.tol).unwrap_or_else(|err| failed_entry(e, err)))
            .collect()
    };
    let mut results = match opts.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    results.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let (entries, convergence): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let verdict = if entries.iter().all(|e| e.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    RunReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        tolerance: opts.tol,
        entries,
        constants: constants_table(2, 10).expect("constants for n = 2..10"),
        convergence,
        verdict,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

/// Loads the catalog at `path` and runs it.
pub fn run_catalog(path: impl AsRef<Path>, opts: &RunOptions) -> std::result::Result<RunReport, ConfigError> {
    let entries = load_catalog(path)?;
    Ok(run_entries(&entries, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(h: f64, mu1: f64) -> ConvergenceRow {
        ConvergenceRow {
            h,
            max_edge: h,
            vertices: 0,
            mu1,
            volume: 1.0,
        }
    }

    #[test]
    fn richardson_recovers_a_quadratic_model() {
        let rows: Vec<_> = [0.08, 0.04, 0.02].iter().map(|&h| row(h, 3.0 + 5.0 * h * h)).collect();
        let (limit, rel) = richardson(&rows).unwrap();
        assert!((limit - 3.0).abs() < 1e-12);
        assert!((rel - 5.0 * 4e-4 / (3.0 + 5.0 * 4e-4)).abs() < 1e-12);
        assert!((observed_order(&rows, None).unwrap() - 2.0).abs() < 1e-9);
        assert!((observed_order(&rows, Some(3.0)).unwrap() - 2.0).abs() < 1e-9);
        assert!(richardson(&rows[..1]).is_none());
        assert!(observed_order(&rows[1..], None).is_none());
    }

    #[test]
    fn empty_catalog_passes() {
        let report = run_entries(&[], &RunOptions::default());
        assert!(report.passed());
        assert!(report.entries.is_empty());
        assert_eq!(report.constants.len(), 9);
    }

    #[test]
    fn disk_entry_is_symmetric() {
        let entry = CatalogEntry::new("disk", "disk:1", &[0.1, 0.05]);
        let report = run_entries(&[entry], &RunOptions::default());
        let e = &report.entries[0];
        assert!(report.passed(), "{:?}", e.checks);
        assert!(e.asymmetry.unwrap() < 1e-3);
        let d = e.checks.iter().find(|c| c.bound.as_str() == "deficit_2_1").unwrap();
        assert!(d.lhs.abs() < 0.01 * std::f64::consts::PI * 3.39);
    }
}
