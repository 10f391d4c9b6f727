//! Acceptance run: eleven end-to-end criteria, one PASS/FAIL line each.
//!
//! Criteria 3 to 6, 10 and 11 read the report written by the `membrane-iso`
//! binary for the built-in catalog.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use membrane_iso::bounds::{
    deficit_2_1, omega, rearrangement_gap, reciprocal_sum_rhs, stability_constants, weinberger_rhs, BoundName,
    RadialFunction, Status, SumVariant, Verdict,
};
use membrane_iso::femlab::{mesh_domain, neumann_spectrum, DomainSpec, Mode};
use membrane_iso::hyperball::{check_h_monotone, rayleigh_quotient, shoot_mu1};
use membrane_iso::specfun::{mu1_ball, p_zero, profile_slope, RadialProfile};
use membrane_iso_cli::{EntryReport, RunReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed(limit: f64, start: Instant) -> Result<f64, String> {
    let s = start.elapsed().as_secs_f64();
    ensure(s < limit, format!("took {s:.2} s, limit {limit} s"))?;
    Ok(s)
}

/// `d/dt [t^{1−ν} J_ν(t)]` from its own power series.
fn slope_series(nu: f64, t: f64) -> f64 {
    let mut g = 1.0;
    let mut x = nu + 1.0;
    while x > 1.0 {
        x -= 1.0;
        g *= x;
    }
    if (x - 0.5).abs() < 1e-12 {
        g *= PI.sqrt();
    }
    let mut c = 1.0 / (2f64.powf(nu) * g);
    let mut sum = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        sum += (2.0 * kf + 1.0) * c * t.powi(2 * k);
        c *= -1.0 / (4.0 * (kf + 1.0) * (kf + nu + 1.0));
    }
    sum
}

fn bisection_zero(nu: f64) -> f64 {
    let mut t = 0.01;
    while slope_series(nu, t + 0.01) > 0.0 {
        t += 0.01;
    }
    let (mut lo, mut hi) = (t, t + 0.01);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope_series(nu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn special_functions() -> Outcome {
    let start = Instant::now();
    for n in [2, 3] {
        let (got, want) = (p_zero(n).map_err(|e| e.to_string())?, bisection_zero(n as f64 / 2.0));
        ensure(
            (got - want).abs() < 1e-10,
            format!("p_zero({n}) = {got}, oracle {want}"),
        )?;
    }
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        let p = p_zero(n).map_err(|e| e.to_string())?;
        worst = worst.max(profile_slope(n as f64 / 2.0, p).map_err(|e| e.to_string())?.abs());
    }
    ensure(worst < 1e-10, format!("slope residual {worst:.2e}"))?;
    let s = timed(1.0, start)?;
    Ok(format!("max residual {worst:.1e}, {s:.3} s"))
}

fn ball_eigenvalue() -> Outcome {
    let start = Instant::now();
    let p2 = p_zero(2).unwrap().powi(2);
    let hs = [0.08, 0.04, 0.02];
    let mut errs = Vec::new();
    for h in hs {
        let s = neumann_spectrum(&DomainSpec::Disk { r: 1.0 }, h, 1).map_err(|e| e.to_string())?;
        errs.push((s.mu1() - p2).abs());
    }
    let rel = errs[2] / p2;
    ensure(rel < 5e-3, format!("relative error {rel:.2e} at h = 0.02"))?;
    // least-squares slope of log error against log h
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let order = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    ensure((1.8..=2.2).contains(&order), format!("observed order {order:.3}"))?;
    let s = timed(60.0, start)?;
    Ok(format!("relative error {rel:.2e}, order {order:.3}, {s:.2} s"))
}

fn euclidean(report: &RunReport) -> impl Iterator<Item = &EntryReport> {
    report.entries.iter().filter(|e| e.mode == Mode::Euclidean)
}

fn check(e: &EntryReport, b: BoundName) -> Result<&membrane_iso::bounds::BoundReport, String> {
    e.checks
        .iter()
        .find(|c| c.bound == b)
        .ok_or_else(|| format!("{}: no {b} row", e.id))
}

fn disk(report: &RunReport) -> Result<&EntryReport, String> {
    report
        .entries
        .iter()
        .find(|e| matches!(e.domain, DomainSpec::Disk { .. }))
        .ok_or_else(|| "catalog has no disk".to_string())
}

fn szego_weinberger(report: &RunReport) -> Outcome {
    let mut count = 0;
    for e in euclidean(report) {
        let mu1 = e.eigenvalues[0];
        let rhs = weinberger_rhs(e.volume, e.n).map_err(|x| x.to_string())?;
        ensure(mu1 <= rhs * (1.0 + e.eps_num), format!("{}: μ₁ = {mu1} > {rhs}", e.id))?;
        ensure(
            check(e, BoundName::Weinberger13)?.verdict == Verdict::Pass,
            format!("{}: report row fails", e.id),
        )?;
        count += 1;
    }
    let d = disk(report)?;
    let ratio = d.eigenvalues[0] / weinberger_rhs(d.volume, 2).unwrap();
    ensure((ratio - 1.0).abs() <= 0.01, format!("disk ratio {ratio}"))?;
    Ok(format!("{count} domains, disk μ₁/rhs = {ratio:.6}"))
}

fn theorem_sum(report: &RunReport) -> Outcome {
    let mut count = 0;
    for e in euclidean(report) {
        let rhs = reciprocal_sum_rhs(e.volume, 2, SumVariant::Thm11).map_err(|x| x.to_string())?;
        let lhs = 1.0 / e.eigenvalues[0];
        ensure(lhs >= rhs * (1.0 - e.eps_num), format!("{}: {lhs} < {rhs}", e.id))?;
        let row = check(e, BoundName::Thm110)?;
        ensure(
            row.verdict == Verdict::Pass && row.status == Status::Asserted,
            format!("{}: report row", e.id),
        )?;
        count += 1;
    }
    let d = disk(report)?;
    let ratio = (1.0 / d.eigenvalues[0]) / reciprocal_sum_rhs(d.volume, 2, SumVariant::Thm11).unwrap();
    ensure((ratio - 1.0).abs() <= 0.01, format!("disk ratio {ratio}"))?;
    Ok(format!("{count} domains, disk lhs/rhs = {ratio:.6}"))
}

fn stability(report: &RunReport) -> Outcome {
    let scale = omega(2) * p_zero(2).unwrap().powi(2);
    let mut count = 0;
    for e in euclidean(report) {
        let a = e.asymmetry.ok_or_else(|| format!("{}: no asymmetry", e.id))?;
        let (deficit, floor) = deficit_2_1(&e.eigenvalues, e.volume, 2, a).map_err(|x| x.to_string())?;
        ensure(
            deficit >= floor - e.eps_num * scale,
            format!("{}: deficit {deficit} < {floor}", e.id),
        )?;
        ensure(
            check(e, BoundName::Deficit21)?.verdict == Verdict::Pass,
            format!("{}: report row", e.id),
        )?;
        count += 1;
    }
    let d = disk(report)?;
    let (deficit, _) = deficit_2_1(&d.eigenvalues, d.volume, 2, d.asymmetry.unwrap_or(0.0)).unwrap();
    ensure(deficit.abs() <= 0.01 * scale, format!("disk deficit {deficit}"))?;
    let p = p_zero(2).unwrap();
    let closed = PI * p * p / (16.0 * (p * p - 1.0));
    let dev = (stability_constants(2).unwrap().d - closed).abs();
    ensure(dev < 1e-8, format!("d(2) off by {dev:.2e}"))?;
    Ok(format!(
        "{count} domains, disk deficit {deficit:.2e}, d(2) within {dev:.1e}"
    ))
}

fn two_sum(report: &RunReport) -> Outcome {
    let p2 = p_zero(2).unwrap().powi(2);
    let mut asserted = 0;
    for e in euclidean(report) {
        let row = check(e, BoundName::TwoSum14)?;
        if e.simply_connected {
            let lhs = 1.0 / e.eigenvalues[0] + 1.0 / e.eigenvalues[1];
            let rhs = 2.0 * e.volume / (PI * p2);
            ensure(lhs >= rhs - e.eps_num * rhs, format!("{}: {lhs} < {rhs}", e.id))?;
            ensure(
                row.status == Status::Asserted && row.verdict == Verdict::Pass,
                format!("{}: two-sum row not an asserted pass", e.id),
            )?;
            asserted += 1;
        } else {
            ensure(
                row.status == Status::Observed,
                format!("{}: multiply connected but asserted", e.id),
            )?;
        }
        ensure(
            check(e, BoundName::Conj18)?.status == Status::Observed,
            format!("{}: conjecture asserted", e.id),
        )?;
    }
    ensure(asserted > 0, "no simply connected entries")?;
    Ok(format!(
        "{asserted} simply connected domains asserted, conjecture rows observed"
    ))
}

fn radial_lemma() -> Outcome {
    let start = Instant::now();
    let mut points = 0;
    for n in 2..=10 {
        let r = 1.0;
        let g = RadialProfile::euclidean(n, r).map_err(|e| e.to_string())?;
        for i in 1..=200 {
            let t = r * i as f64 / 201.0;
            let (v, d) = (g.value(t), g.derivative(t));
            ensure(v > 0.0 && d > -1e-12, format!("n={n} t={t}: g = {v}, g' = {d}"))?;
            ensure(d - v / t <= 1e-12, format!("n={n} t={t}: g' - g/t = {}", d - v / t))?;
            points += 1;
        }
        ensure(
            g.value(r) > 0.0 && g.derivative(0.0) > -1e-12,
            format!("n={n}: endpoints"),
        )?;
        let mut lowest = f64::INFINITY;
        for i in 1..=200 {
            let t = 2.0 * r * i as f64 / 200.0;
            let e = g.energy_density(t);
            ensure(
                e <= lowest + 1e-10,
                format!("n={n} t={t}: energy rises to {e} from {lowest}"),
            )?;
            lowest = lowest.min(e);
        }
    }
    let s = timed(5.0, start)?;
    Ok(format!("{points} profile samples plus energy density, {s:.3} s"))
}

fn rearrangement() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut worst = f64::INFINITY;
    for case in 0..100 {
        let k = rng.random_range(5..=12);
        let vertices: Vec<[f64; 2]> = (0..k)
            .map(|i| {
                let a = 2.0 * PI * (i as f64 + rng.random_range(-0.35..0.35)) / k as f64;
                let rad = rng.random_range(0.4..1.6);
                [rad * a.cos(), rad * a.sin()]
            })
            .collect();
        let mesh = mesh_domain(&DomainSpec::Polygon { vertices }, 0.3).map_err(|e| format!("case {case}: {e}"))?;
        let mesh = mesh.scaled((PI / mesh.area()).sqrt()).unwrap();
        let c = mesh.centroid();
        let center = [c[0] + rng.random_range(-0.3..0.3), c[1] + rng.random_range(-0.3..0.3)];
        let steps = rng.random_range(1..=6);
        let mut breaks: Vec<f64> = (0..steps).map(|_| rng.random_range(0.0..1.5)).collect();
        breaks.push(0.0);
        breaks.push(1.5);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut values: Vec<f64> = (1..breaks.len()).map(|_| rng.random_range(0.0..1.0)).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        let f = RadialFunction::step(&breaks, &values).map_err(|e| e.to_string())?;
        let gap = rearrangement_gap(&f, &mesh, 1.0, center).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            gap.lhs >= gap.rhs - 1e-8,
            format!("case {case}: {} < {}", gap.lhs, gap.rhs),
        )?;
        worst = worst.min(gap.lhs - gap.rhs);
    }
    let s = timed(30.0, start)?;
    Ok(format!("100 pairs, min lhs - rhs = {worst:.2e}, {s:.2} s"))
}

fn hyperbolic_shooting() -> Outcome {
    let start = Instant::now();
    let (mut rq, mut incr) = (0.0f64, f64::NEG_INFINITY);
    for n in [2, 3, 4] {
        for r in [0.5, 1.0, 2.0] {
            let sol = shoot_mu1(n, r).map_err(|e| e.to_string())?;
            rq = rq.max((rayleigh_quotient(&sol) - sol.mu1).abs() / sol.mu1);
            incr = incr.max(check_h_monotone(&sol));
        }
    }
    ensure(rq <= 1e-7, format!("Rayleigh residual {rq:.2e}"))?;
    ensure(incr <= 1e-10, format!("h increment {incr:.2e}"))?;
    let mut limit: f64 = 0.0;
    for n in [2, 3, 4] {
        let sol = shoot_mu1(n, 0.01).map_err(|e| e.to_string())?;
        limit = limit.max((1e-4 * sol.mu1 / mu1_ball(n, 1.0).unwrap() - 1.0).abs());
    }
    ensure(limit <= 5e-3, format!("r²μ₁ deviates by {limit:.2e} at r = 0.01"))?;
    let s = timed(30.0, start)?;
    Ok(format!(
        "Rayleigh {rq:.1e}, increment {incr:.1e}, limit {limit:.1e}, {s:.2} s"
    ))
}

fn hyperbolic_theorem(report: &RunReport) -> Outcome {
    let mut count = 0;
    let mut worst_eq: f64 = 0.0;
    for e in report.entries.iter().filter(|e| e.mode == Mode::Hyperbolic) {
        let ball = e.ball_mu1.ok_or_else(|| format!("{}: no ball eigenvalue", e.id))?;
        let (lhs, rhs) = (1.0 / e.eigenvalues[0], 1.0 / ball);
        ensure(lhs >= rhs - e.eps_num * rhs, format!("{}: {lhs} < {rhs}", e.id))?;
        let row = check(e, BoundName::Thm112)?;
        ensure(
            row.status == Status::Asserted && row.verdict == Verdict::Pass,
            format!("{}: report row", e.id),
        )?;
        if matches!(e.domain, DomainSpec::HyperbolicDisk { .. }) {
            ensure(e.h == 0.02, format!("{}: finest h = {}", e.id, e.h))?;
            let dev = (e.eigenvalues[0] / ball - 1.0).abs();
            ensure(dev <= 0.015, format!("{}: disk off the ball value by {dev:.2e}", e.id))?;
            worst_eq = worst_eq.max(dev);
        }
        count += 1;
    }
    ensure(count > 0 && worst_eq > 0.0, "no hyperbolic disks in the catalog")?;
    Ok(format!("{count} domains, disks within {worst_eq:.2e} of shooting"))
}

fn strip_wall_time(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_s\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn verify_twice(dir: &std::path::Path) -> Result<(String, String), String> {
    let mut out = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("report{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_membrane-iso"))
            .arg("verify")
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), format!("verify exited with {status}"))?;
        out.push(std::fs::read_to_string(&path).map_err(|e| e.to_string())?);
    }
    Ok((out.remove(0), out.remove(0)))
}

fn determinism(a: &str, b: &str) -> Outcome {
    ensure(a.contains("\"wall_time_s\""), "report lacks the wall-time field")?;
    ensure(
        strip_wall_time(a) == strip_wall_time(b),
        "reports differ outside the wall-time field",
    )?;
    Ok(format!("{} bytes identical", strip_wall_time(a).len()))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let runs = verify_twice(dir.path());
    let report: Result<RunReport, String> = runs
        .as_ref()
        .map_err(|e| e.clone())
        .and_then(|(a, _)| serde_json::from_str(a).map_err(|e| e.to_string()));
    let on_report = |f: fn(&RunReport) -> Outcome| -> Outcome {
        match &report {
            Ok(r) => f(r),
            Err(e) => Err(format!("no report: {e}")),
        }
    };

    let results: Vec<(&str, Outcome)> = vec![
        ("special-function fidelity", special_functions()),
        ("ball eigenvalue by FEM", ball_eigenvalue()),
        ("Szegő-Weinberger bound", on_report(szego_weinberger)),
        ("reciprocal-sum theorem", on_report(theorem_sum)),
        ("quantitative stability", on_report(stability)),
        ("two-eigenvalue bound", on_report(two_sum)),
        ("radial profile monotonicity", radial_lemma()),
        ("rearrangement inequality", rearrangement()),
        ("hyperbolic shooting", hyperbolic_shooting()),
        ("hyperbolic ball comparison", on_report(hyperbolic_theorem)),
        (
            "determinism",
            runs.as_ref()
                .map_err(|e| e.clone())
                .and_then(|(a, b)| determinism(a, b)),
        ),
    ];

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
