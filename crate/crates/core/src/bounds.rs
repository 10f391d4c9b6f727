//! Ball-comparison bounds for Neumann eigenvalues, the stability constants
//! `α(n)`, `β(n)`, `d(n) = α/β`, the Weinberger centre and the radial
//! rearrangement comparison.
//!
//! Every bound is stated as `lhs ≥ rhs`; a [`BoundReport`] passes when
//! `lhs − rhs ≥ −tolerance`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::asymmetry::intersection_area;
use crate::error::{domain, Error, Result};
use crate::femlab::TriMesh;
use crate::hyperball::unit_ball_volume;
use crate::optim::NelderMead;
use crate::quadrature::{integrate, integrate_rel, integrate_triangle};
use crate::specfun::{bessel_j, p_zero, RadialProfile, MAX_DIMENSION};
use crate::Point;

/// Default verdict tolerance, relative to each bound's natural scale.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// `ω_n`, the volume of the unit ball in `ℝⁿ`.
pub fn omega(n: usize) -> f64 {
    unit_ball_volume(n)
}

fn check_volume(volume: f64) -> Result<()> {
    if volume > 0.0 && volume.is_finite() {
        Ok(())
    } else {
        domain(format!("volume must be positive, got {volume}"))
    }
}

/// Radius of the ball of the given volume.
pub fn volume_radius(volume: f64, n: usize) -> Result<f64> {
    check_volume(volume)?;
    Ok((volume / omega(n)).powf(1.0 / n as f64))
}

/// `(ω_n / |Ω|)^{2/n} p²`, the first eigenvalue of the equal-volume ball.
pub fn weinberger_rhs(volume: f64, n: usize) -> Result<f64> {
    let p = p_zero(n)?;
    let rr = (volume_radius(volume, n)?).powi(2);
    Ok(p * p / rr)
}

/// Lower bounds for sums of reciprocal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumVariant {
    /// `(n−1)(|Ω|/ω_n)^{2/n} / p²` for the first `n − 1` reciprocals.
    Thm11,
    /// `n(|Ω|/ω_n)^{2/n} / p²` for the first `n` reciprocals (conjectured).
    Conj1,
    /// `n/(n+2) (|Ω|/ω_n)^{2/n}` for the first `n` reciprocals.
    AbCrude,
}

impl SumVariant {
    /// Number of reciprocals summed on the left-hand side.
    pub fn terms(self, n: usize) -> usize {
        match self {
            SumVariant::Thm11 => n - 1,
            SumVariant::Conj1 | SumVariant::AbCrude => n,
        }
    }
}

pub fn reciprocal_sum_rhs(volume: f64, n: usize, variant: SumVariant) -> Result<f64> {
    let rr = volume_radius(volume, n)?.powi(2);
    let p = p_zero(n)?;
    let nf = n as f64;
    Ok(match variant {
        SumVariant::Thm11 => (nf - 1.0) * rr / (p * p),
        SumVariant::Conj1 => nf * rr / (p * p),
        SumVariant::AbCrude => nf / (nf + 2.0) * rr,
    })
}

/// `α(n)`, `β(n)` and the stability constant `d(n) = α(n)/β(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
}

pub fn stability_constants(n: usize) -> Result<StabilityConstants> {
    if !(2..=MAX_DIMENSION).contains(&n) {
        return domain(format!("stability constants need 2 <= n <= {MAX_DIMENSION}, got {n}"));
    }
    let nu = n as f64 / 2.0;
    let nf = n as f64;
    let p = p_zero(n)?;
    let w = omega(n);
    let jp = bessel_j(nu, p)?;
    let alpha = if n == 2 {
        w / 4.0 * jp * jp / 4.0
    } else {
        w / 4.0 * jp * jp * (nf - 1.0) * 2f64.powf(-2.0 / nf - 1.0) / nf
    };
    let mut failure = None;
    let radial = integrate(
        |t: f64| match bessel_j(nu, p * t) {
            Ok(j) => t * j * j,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        0.0,
        1e-12,
        4096,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let beta = nf * w.powf(1.0 - 2.0 / nf) * radial.value;
    Ok(StabilityConstants {
        n,
        alpha,
        beta,
        d: alpha / beta,
    })
}

/// Scale-invariant deficit `ω^{2/n}p² − (n−1)|Ω|^{2/n} / Σ_{i<n} 1/μ_i`
/// together with the floor `d(n)·asym²`.
///
/// `eigenvalues` starts at `μ_1`; the first `n − 1` entries are used.
pub fn deficit_2_1(eigenvalues: &[f64], volume: f64, n: usize, asym: f64) -> Result<(f64, f64)> {
    check_volume(volume)?;
    if eigenvalues.len() < n - 1 {
        return domain(format!("need {} eigenvalues, got {}", n - 1, eigenvalues.len()));
    }
    let used = &eigenvalues[..n - 1];
    if used.iter().any(|&m| !(m > 0.0)) {
        return domain("eigenvalues must be positive");
    }
    if !(0.0..2.0).contains(&asym) {
        return domain(format!("asymmetry must lie in [0, 2), got {asym}"));
    }
    let nf = n as f64;
    let p = p_zero(n)?;
    let sum: f64 = used.iter().map(|m| 1.0 / m).sum();
    let deficit = omega(n).powf(2.0 / nf) * p * p - (nf - 1.0) * volume.powf(2.0 / nf) / sum;
    let floor = stability_constants(n)?.d * asym * asym;
    Ok((deficit, floor))
}

/// Vector moment `V(c) = ∫_Ω G(|x−c|) (x−c)/|x−c| dx` by the 7-point rule.
pub fn center_moment(mesh: &TriMesh, profile: &RadialProfile, c: Point) -> [f64; 2] {
    let mut v = [0.0; 2];
    for i in 0..mesh.triangles().len() {
        let tri = mesh.triangle(i);
        for d in 0..2 {
            v[d] += integrate_triangle(tri, |x| {
                let y = [x[0] - c[0], x[1] - c[1]];
                profile.capped_over_t(y[0].hypot(y[1])) * y[d]
            });
        }
    }
    v
}

/// Centre at which the moment of `G` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeinbergerCenter {
    pub center: Point,
    /// `‖V(center)‖`.
    pub residual: f64,
    pub iterations: usize,
}

/// Finds `c` with `‖V(c)‖ ≤ 1e−9 |Ω| g(r)` by the damped fixed point
/// `c ← c + V(c) / (2 g(r) |Ω|)`, falling back to Nelder–Mead on `‖V‖²`.
pub fn weinberger_center(mesh: &TriMesh, profile: &RadialProfile) -> Result<WeinbergerCenter> {
    let area = mesh.area();
    if !(area > 0.0) {
        return domain("weinberger_center: mesh has no area");
    }
    let scale = profile.value(profile.radius()) * area;
    let tol = 1e-9 * scale;
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);
    let mut c = mesh.centroid();
    let mut v = center_moment(mesh, profile, c);
    let mut best = (norm(v), c);
    let mut iterations = 0;
    while iterations < 500 && norm(v) > tol {
        c = [c[0] + 0.5 * v[0] / scale, c[1] + 0.5 * v[1] / scale];
        v = center_moment(mesh, profile, c);
        iterations += 1;
        if norm(v) < best.0 {
            best = (norm(v), c);
        }
    }
    if best.0 > tol {
        let nm = NelderMead {
            initial_step: 0.01 * profile.radius(),
            x_tol: 1e-14 * profile.radius(),
            f_tol: 0.0,
            max_evals: 3000,
            restarts: 3,
        };
        let m = nm.minimize(
            |x| {
                let v = center_moment(mesh, profile, [x[0], x[1]]);
                (v[0] * v[0] + v[1] * v[1]) / (scale * scale)
            },
            &best.1,
        );
        iterations += m.evaluations;
        let r = m.value.sqrt() * scale;
        if r < best.0 {
            best = (r, [m.x[0], m.x[1]]);
        }
    }
    if best.0 > tol {
        return Err(Error::Convergence {
            method: "weinberger_center",
            residual: best.0 / scale,
        });
    }
    Ok(WeinbergerCenter {
        center: best.1,
        residual: best.0,
        iterations,
    })
}

/// Non-increasing, non-negative piecewise linear function of the radius,
/// possibly with downward jumps, constant beyond its last knot.
///
/// Stored as contiguous pieces `(t_start, t_end, value_start, value_end)`
/// covering `[0, T]`. At a jump the value is taken from the right piece.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pieces: Vec<(f64, f64, f64, f64)>,
}

impl RadialFunction {
    pub fn new(pieces: Vec<(f64, f64, f64, f64)>) -> Result<Self> {
        if pieces.is_empty() || pieces[0].0 != 0.0 {
            return domain("radial function must start at 0");
        }
        let mut prev_end: Option<(f64, f64)> = None;
        for &(a, b, fa, fb) in &pieces {
            if !(b > a) || !(fa >= 0.0) || !(fb >= 0.0) {
                return domain("radial function pieces must have positive length and values >= 0");
            }
            if fb > fa + 1e-12 {
                return domain("radial function increases on a piece");
            }
            if let Some((e, fe)) = prev_end {
                if a != e {
                    return domain("radial function pieces must be contiguous");
                }
                if fa > fe + 1e-12 {
                    return domain("radial function jumps upwards");
                }
            }
            prev_end = Some((b, fb));
        }
        Ok(Self { pieces })
    }

    /// Step function equal to `values[k]` on `[breaks[k], breaks[k+1])`,
    /// with `breaks[0] = 0`.
    pub fn step(breaks: &[f64], values: &[f64]) -> Result<Self> {
        if breaks.len() != values.len() + 1 {
            return domain("step function needs one more break than values");
        }
        Self::new(
            breaks
                .windows(2)
                .zip(values)
                .map(|(w, &v)| (w[0], w[1], v, v))
                .collect(),
        )
    }

    /// End `T` of the last piece.
    pub fn support_end(&self) -> f64 {
        self.pieces.last().unwrap().1
    }

    pub fn eval(&self, t: f64) -> f64 {
        let last = self.pieces.last().unwrap();
        if t >= last.1 {
            return last.3;
        }
        let k = self.pieces.partition_point(|p| p.1 <= t);
        let (a, b, fa, fb) = self.pieces[k];
        fa + (fb - fa) * (t - a) / (b - a)
    }

    /// `∫_s^e f(t) t dt` exactly (the function is linear on each piece).
    fn moment(&self, s: f64, e: f64, shift: f64) -> f64 {
        let mut total = 0.0;
        let mut segments: Vec<(f64, f64, f64, f64)> = self.pieces.clone();
        let last = *segments.last().unwrap();
        segments.push((last.1, f64::INFINITY, last.3, last.3));
        for (a, b, fa, fb) in segments {
            let lo = a.max(s);
            let hi = b.min(e);
            if hi <= lo {
                continue;
            }
            let slope = if b.is_finite() { (fb - fa) / (b - a) } else { 0.0 };
            let c0 = fa - slope * a - shift;
            // ∫ (c0 + slope t) t dt
            let prim = |t: f64| c0 * t * t / 2.0 + slope * t * t * t / 3.0;
            total += prim(hi) - prim(lo);
        }
        total
    }
}

/// Both sides of the planar rearrangement inequality
/// `∫_{B_r} f(|x|) − ∫_Ω f(|x−c|) ≥ 2π ∫_{ρ₁}^{ρ₂} |f(t) − f(r)| t dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RearrangementGap {
    pub lhs: f64,
    pub rhs: f64,
    pub rho1: f64,
    pub rho2: f64,
}

/// Evaluates both sides for a planar mesh with `|Ω| = π r²` (to 1%).
///
/// `∫_Ω f(|x−c|)` uses the layer-cake form
/// `f(∞)|Ω| + Σ jumps·A(t_j) + Σ (−slope)∫ A(t) dt` with the exact clipped
/// area `A(t) = |Ω ∩ B(c, t)|`.
pub fn rearrangement_gap(f: &RadialFunction, mesh: &TriMesh, r: f64, center: Point) -> Result<RearrangementGap> {
    let area = mesh.area();
    let ball = PI * r * r;
    if (ball - area).abs() > 0.01 * area {
        return domain(format!("|B_r| = {ball} differs from |Ω| = {area} by more than 1%"));
    }
    let inside = intersection_area(mesh, center, r).min(area);
    let rho1 = (inside / PI).sqrt();
    let rho2 = ((2.0 * area - inside) / PI).sqrt();
    if f.support_end() < rho2 {
        return domain(format!(
            "radial function ends at {} before rho2 = {rho2}",
            f.support_end()
        ));
    }

    let ball_integral = 2.0 * PI * f.moment(0.0, r, 0.0);

    let a_of = |t: f64| intersection_area(mesh, center, t);
    let mut omega_integral = f.pieces.last().unwrap().3 * area;
    let mut prev: Option<f64> = None;
    for &(a, b, fa, fb) in &f.pieces {
        if let Some(pv) = prev {
            let jump = pv - fa;
            if jump > 0.0 {
                omega_integral += jump * a_of(a);
            }
        }
        let descent = fa - fb;
        if descent > 0.0 {
            let q = integrate(a_of, a, b, 1e-14 * area * (b - a), 1e-13, 2000)?;
            omega_integral += descent / (b - a) * q.value;
        }
        prev = Some(fb);
    }

    let fr = f.eval(r);
    let rhs = 2.0 * PI * (f.moment(rho1, r, fr) - f.moment(r, rho2, fr));
    Ok(RearrangementGap {
        lhs: ball_integral - omega_integral,
        rhs,
        rho1,
        rho2,
    })
}

/// `(∫_Ω G(|x−c|)² dx, ∫_{B_r} g(|x|)² dx)` for a planar mesh with
/// `|Ω| = π r²` (to 1%), `r` the profile radius.
pub fn profile_mass_comparison(mesh: &TriMesh, profile: &RadialProfile, center: Point) -> Result<(f64, f64)> {
    let area = mesh.area();
    let r = profile.radius();
    let ball = PI * r * r;
    if (ball - area).abs() > 0.01 * area {
        return domain(format!("|B_r| = {ball} differs from |Ω| = {area} by more than 1%"));
    }
    let omega_mass: f64 = (0..mesh.triangles().len())
        .map(|i| {
            integrate_triangle(mesh.triangle(i), |x| {
                profile.capped_value((x[0] - center[0]).hypot(x[1] - center[1])).powi(2)
            })
        })
        .sum();
    Ok((omega_mass, ball_mass(profile)?))
}

/// `n ω_n ∫₀ʳ g(t)² t^{n−1} dt`.
pub fn ball_mass(profile: &RadialProfile) -> Result<f64> {
    let n = profile.dimension();
    let s = integrate_rel(
        |t: f64| profile.value(t).powi(2) * t.powi(n as i32 - 1),
        0.0,
        profile.radius(),
        1e-13,
    )?;
    Ok(n as f64 * omega(n) * s)
}

/// Bounds checked in verification runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    /// `ω^{2/n}p² ≥ μ₁|Ω|^{2/n}`.
    #[serde(rename = "weinberger_1_3")]
    Weinberger13,
    /// Planar form `π p² ≥ μ₁ A`.
    #[serde(rename = "szego_1_2")]
    Szego12,
    /// `(1/μ₁ + 1/μ₂)/A ≥ 2/(π p²)` for planar simply connected domains.
    #[serde(rename = "two_sum_1_4")]
    TwoSum14,
    /// `Σ_{i≤n} 1/μ_i ≥ n/(n+2) (|Ω|/ω_n)^{2/n}`.
    #[serde(rename = "ab_sum_1_7")]
    AbSum17,
    /// `Σ_{i<n} 1/μ_i ≥ (n−1)(|Ω|/ω_n)^{2/n}/p²`.
    #[serde(rename = "thm_1_10")]
    Thm110,
    /// `Σ_{i≤n} 1/μ_i ≥ n(|Ω|/ω_n)^{2/n}/p²` (conjectured).
    #[serde(rename = "conj_1_8")]
    Conj18,
    /// Deficit `≥ d(n) 𝒜²`.
    #[serde(rename = "deficit_2_1")]
    Deficit21,
    /// `ω^{2/n}p² − μ₁|Ω|^{2/n} ≥ d(n) 𝒜²`, a comparison using `d(n)`.
    #[serde(rename = "gap_1_5")]
    Gap15,
    /// Hyperbolic: `Σ_{i<n} 1/μ_i ≥ (n−1)/μ₁(B_Ω)`.
    #[serde(rename = "thm_1_12")]
    Thm112,
    /// Hyperbolic: `Σ_{i≤n} 1/μ_i ≥ n/μ₁(B_Ω)` (conjectured).
    #[serde(rename = "conj_ii_1_9")]
    ConjII19,
}

impl BoundName {
    pub const ALL: [BoundName; 10] = [
        BoundName::Weinberger13,
        BoundName::Szego12,
        BoundName::TwoSum14,
        BoundName::AbSum17,
        BoundName::Thm110,
        BoundName::Conj18,
        BoundName::Deficit21,
        BoundName::Gap15,
        BoundName::Thm112,
        BoundName::ConjII19,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Weinberger13 => "weinberger_1_3",
            BoundName::Szego12 => "szego_1_2",
            BoundName::TwoSum14 => "two_sum_1_4",
            BoundName::AbSum17 => "ab_sum_1_7",
            BoundName::Thm110 => "thm_1_10",
            BoundName::Conj18 => "conj_1_8",
            BoundName::Deficit21 => "deficit_2_1",
            BoundName::Gap15 => "gap_1_5",
            BoundName::Thm112 => "thm_1_12",
            BoundName::ConjII19 => "conj_ii_1_9",
        }
    }

    /// Whether the bound is a proven statement for the given domain class.
    pub fn is_theorem(self, n: usize, simply_connected: bool) -> bool {
        match self {
            BoundName::Weinberger13 | BoundName::AbSum17 | BoundName::Thm110 | BoundName::Deficit21 => true,
            BoundName::Thm112 => true,
            BoundName::Szego12 | BoundName::TwoSum14 => n == 2 && simply_connected,
            BoundName::Conj18 | BoundName::Gap15 | BoundName::ConjII19 => false,
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, BoundName::Thm112 | BoundName::ConjII19)
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Descriptor(format!("unknown bound `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A theorem: failures count against the run.
    Asserted,
    /// A conjecture or comparison: reported only.
    Observed,
}

/// Data a bound is evaluated from.
#[derive(Debug, Clone)]
pub struct BoundInputs<'a> {
    pub id: &'a str,
    pub n: usize,
    /// Euclidean volume, or hyperbolic area in hyperbolic mode.
    pub volume: f64,
    /// Nonzero eigenvalues `μ₁ ≤ μ₂ ≤ …`.
    pub eigenvalues: &'a [f64],
    pub asymmetry: Option<f64>,
    pub simply_connected: bool,
    /// `μ₁` of the geodesic ball of the same volume (hyperbolic mode).
    pub ball_mu1: Option<f64>,
    /// Relative tolerance; multiplied by each bound's scale.
    pub eps_rel: f64,
}

/// Outcome of one bound on one domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub domain: String,
    pub n: usize,
    pub volume: f64,
    pub eigenvalues: Vec<f64>,
    pub bound: BoundName,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub deficit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetry: Option<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub status: Status,
}

fn reciprocal_sum(eigs: &[f64], k: usize) -> Result<f64> {
    if eigs.len() < k {
        return domain(format!("need {k} nonzero eigenvalues, got {}", eigs.len()));
    }
    if eigs[..k].iter().any(|&m| !(m > 0.0)) {
        return domain("eigenvalues must be positive");
    }
    Ok(eigs[..k].iter().map(|m| 1.0 / m).sum())
}

/// Evaluates `name` on the inputs. The status is `Asserted` only when the
/// bound is a theorem for the domain and `requested_status` allows it.
pub fn evaluate_bound(name: BoundName, input: &BoundInputs<'_>, requested: Status) -> Result<BoundReport> {
    let n = input.n;
    let nf = n as f64;
    let vol = input.volume;
    let eigs = input.eigenvalues;
    let p = p_zero(n)?;
    let ball_scale = omega(n).powf(2.0 / nf) * p * p;
    let need_asym = || {
        input
            .asymmetry
            .ok_or_else(|| Error::Domain(format!("{name} needs the asymmetry")))
    };
    let need_ball = || {
        input
            .ball_mu1
            .ok_or_else(|| Error::Domain(format!("{name} needs the geodesic-ball eigenvalue")))
    };
    let (lhs, rhs, scale) = match name {
        BoundName::Weinberger13 => (ball_scale, eigs[0] * vol.powf(2.0 / nf), ball_scale),
        BoundName::Szego12 => (PI * p * p, eigs[0] * vol, PI * p * p),
        BoundName::TwoSum14 => {
            let r = 2.0 / (PI * p * p);
            (reciprocal_sum(eigs, 2)? / vol, r, r)
        }
        BoundName::AbSum17 | BoundName::Thm110 | BoundName::Conj18 => {
            let v = match name {
                BoundName::AbSum17 => SumVariant::AbCrude,
                BoundName::Thm110 => SumVariant::Thm11,
                _ => SumVariant::Conj1,
            };
            let r = reciprocal_sum_rhs(vol, n, v)?;
            (reciprocal_sum(eigs, v.terms(n))?, r, r)
        }
        BoundName::Deficit21 => {
            let (d, floor) = deficit_2_1(eigs, vol, n, need_asym()?)?;
            (d, floor, ball_scale)
        }
        BoundName::Gap15 => {
            let a = need_asym()?;
            let d = stability_constants(n)?.d;
            (ball_scale - eigs[0] * vol.powf(2.0 / nf), d * a * a, ball_scale)
        }
        BoundName::Thm112 | BoundName::ConjII19 => {
            let k = if name == BoundName::Thm112 { n - 1 } else { n };
            let r = k as f64 / need_ball()?;
            (reciprocal_sum(eigs, k)?, r, r)
        }
    };
    let tolerance = input.eps_rel * scale.abs();
    let verdict = if lhs - rhs >= -tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let status = if requested == Status::Asserted && name.is_theorem(n, input.simply_connected) {
        Status::Asserted
    } else {
        Status::Observed
    };
    Ok(BoundReport {
        domain: input.id.to_string(),
        n,
        volume: vol,
        eigenvalues: eigs.to_vec(),
        bound: name,
        lhs,
        rhs,
        deficit: lhs - rhs,
        asymmetry: input.asymmetry,
        verdict,
        tolerance,
        status,
    })
}
