//! Geodesic balls of hyperbolic space: the first Neumann eigenvalue by
//! shooting on the radial equation
//!
//! ```text
//! f'' + (n-1) coth(t) f' + (μ - (n-1)/sinh²t) f = 0,   f(0) = f'(r) = 0,
//! ```
//!
//! ball volumes, the inverse volume-to-radius map and the monotonicity of
//! `F(t)/sinh t`.
//!
//! The integrator advances `(f, P)` with `P = sinh^{n-1}(t) f'` rather than
//! `(f, f')`: the flux form removes the `coth` drift term, and the sign of
//! `f'(r)` equals the sign of `P(r)`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_rel, kronrod15};
use crate::specfun::{gamma, p_zero, RadialProfile, RadialTable};

/// Starting abscissa of the integration.
pub const T0: f64 = 1e-6;
/// Relative width at which the μ-bisection stops.
pub const MU_REL_TOL: f64 = 1e-10;
/// Number of geometric μ-grid points used to bracket the first eigenvalue.
pub const MU_GRID: usize = 200;

/// Relative step `h ≤ κ t`. RK4 errors on the power-law regime near the
/// origin scale like `κ⁴` per e-fold and feed the table's second derivative
/// through `1/h²`.
const KAPPA: f64 = 0.0005;
/// Every this many integration nodes go into the profile table; a finer
/// table lets rounding in `f` swamp the interpolated second derivative.
const TABLE_STRIDE: usize = 8;

/// First Neumann eigenpair of the geodesic ball `B(r) ⊂ ℍⁿ`.
#[derive(Debug, Clone)]
pub struct HyperbolicBallSolution {
    pub n: usize,
    pub r: f64,
    pub mu1: f64,
    /// Radial eigenfunction normalised by `f'(T0) = 1`.
    pub profile: RadialProfile,
    /// `|f'(r)|` at the returned eigenvalue.
    pub residual: f64,
}

/// Precomputed integration grid and coefficients at the RK4 stage points.
struct Grid {
    n: usize,
    t: Vec<f64>,
    /// Per step: `sinh^{n-1}` and `(n-1)/sinh²` at the left, middle and right points.
    s: Vec<[f64; 3]>,
    q: Vec<[f64; 3]>,
}

impl Grid {
    fn new(n: usize, r: f64) -> Self {
        let h_cap = (1e-3 * r).min(1e-3);
        let mut t = vec![T0];
        let mut cur = T0;
        while cur < r {
            let step = (KAPPA * cur).min(h_cap);
            // land exactly on r without leaving a sliver step
            cur = if cur + 1.5 * step >= r { r } else { cur + step };
            t.push(cur);
        }
        let m = (n - 1) as f64;
        let sw = |x: f64| x.sinh().powi(n as i32 - 1);
        let qw = |x: f64| m / (x.sinh() * x.sinh());
        let mut s = Vec::with_capacity(t.len() - 1);
        let mut q = Vec::with_capacity(t.len() - 1);
        for w in t.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            s.push([sw(w[0]), sw(mid), sw(w[1])]);
            q.push([qw(w[0]), qw(mid), qw(w[1])]);
        }
        Self { n, t, s, q }
    }

    /// Integrates from `T0` and returns `(f, P)` at every node.
    fn shoot(&self, mu: f64, mut visit: impl FnMut(usize, f64, f64)) -> (f64, f64) {
        let s0 = T0.sinh().powi(self.n as i32 - 1);
        let (mut f, mut p) = (T0, s0);
        visit(0, f, p);
        for i in 0..self.s.len() {
            let h = self.t[i + 1] - self.t[i];
            let [sa, sm, sb] = self.s[i];
            let [qa, qm, qb] = self.q[i];
            let rhs = |f: f64, p: f64, s: f64, q: f64| (p / s, -s * (mu - q) * f);
            let k1 = rhs(f, p, sa, qa);
            let k2 = rhs(f + 0.5 * h * k1.0, p + 0.5 * h * k1.1, sm, qm);
            let k3 = rhs(f + 0.5 * h * k2.0, p + 0.5 * h * k2.1, sm, qm);
            let k4 = rhs(f + h * k3.0, p + h * k3.1, sb, qb);
            f += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            p += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            visit(i + 1, f, p);
        }
        (f, p)
    }

    fn end_flux(&self, mu: f64) -> f64 {
        self.shoot(mu, |_, _, _| {}).1
    }
}

fn check_args(n: usize, r: f64) -> Result<()> {
    if !(2..=10).contains(&n) {
        return domain(format!("hyperbolic shooting supports 2 <= n <= 10, got {n}"));
    }
    if !(r > 0.0 && r <= 20.0) {
        return domain(format!("hyperbolic shooting needs 0 < r <= 20, got {r}"));
    }
    Ok(())
}

/// Upper end of the μ scan.
pub fn mu_max(n: usize, r: f64) -> Result<f64> {
    let p = p_zero(n)?;
    Ok(4.0 * (p / r) * (p / r) + (n * n) as f64)
}

/// First Neumann eigenvalue of the geodesic ball of radius `r` in `ℍⁿ`.
///
/// Scans a geometric μ-grid for the first sign change of `f'(r; μ)` and
/// bisects it to relative width [`MU_REL_TOL`].
pub fn shoot_mu1(n: usize, r: f64) -> Result<HyperbolicBallSolution> {
    check_args(n, r)?;
    let grid = Grid::new(n, r);
    let top = mu_max(n, r)?;
    let mut bottom = top * 1e-20;
    // very large balls push μ₁ towards zero; widen the scan downwards if needed
    let mut widen = 0;
    while grid.end_flux(bottom) <= 0.0 {
        widen += 1;
        if widen > 10 {
            return Err(Error::Convergence {
                method: "hyperbolic shooting (no positive flux at the bottom of the scan)",
                residual: bottom,
            });
        }
        bottom *= 1e-10;
    }
    let ratio = (top / bottom).powf(1.0 / (MU_GRID - 1) as f64);
    let mut lo = bottom;
    let mut hi = None;
    for k in 1..MU_GRID {
        let mu = if k == MU_GRID - 1 {
            top
        } else {
            bottom * ratio.powi(k as i32)
        };
        if grid.end_flux(mu) <= 0.0 {
            hi = Some(mu);
            break;
        }
        lo = mu;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Convergence {
            method: "hyperbolic shooting (no sign change below mu_max)",
            residual: top,
        });
    };
    while hi - lo > MU_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if grid.end_flux(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);

    let last = grid.t.len() - 1;
    let (mut ts, mut f, mut df, mut d2f) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let m = (n - 1) as f64;
    let mut residual = 0.0;
    grid.shoot(mu, |i, fi, pi| {
        let t = grid.t[i];
        let sh = t.sinh();
        let d = pi / sh.powi(n as i32 - 1);
        if i == last {
            residual = d.abs();
        }
        if i % TABLE_STRIDE == 0 || i == last {
            ts.push(t);
            f.push(fi);
            df.push(d);
            d2f.push(-m * (t.cosh() / sh) * d - (mu - m / (sh * sh)) * fi);
        }
    });
    let table = RadialTable::new(ts, f, df, d2f)?;
    Ok(HyperbolicBallSolution {
        n,
        r,
        mu1: mu,
        profile: RadialProfile::hyperbolic(n, r, mu, table),
        residual,
    })
}

/// Unit-ball volume `ω_n = π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
}

/// Volume `n ω_n ∫₀ʳ sinh^{n-1} t dt` of the geodesic ball of radius `r`.
pub fn hyperbolic_ball_volume(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return domain(format!("radius must be non-negative, got {r}"));
    }
    Ok(match n {
        2 => 4.0 * PI * (0.5 * r).sinh().powi(2),
        3 => {
            let x = 2.0 * r;
            let sinh_minus_x = if x < 0.1 {
                let x2 = x * x;
                x * x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)))
            } else {
                x.sinh() - x
            };
            PI * sinh_minus_x
        }
        4 => {
            let cm1 = 2.0 * (0.5 * r).sinh().powi(2);
            2.0 * PI * PI * cm1 * cm1 * (cm1 + 3.0) / 3.0
        }
        _ => {
            let s = integrate_rel(|t: f64| t.sinh().powi(n as i32 - 1), 0.0, r, 1e-14)?;
            n as f64 * unit_ball_volume(n) * s
        }
    })
}

/// Radius of the geodesic ball of volume `v`, by bisection to relative `1e-12`.
pub fn ball_radius_for_volume(n: usize, v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return domain(format!("volume must be positive, got {v}"));
    }
    // the Euclidean radius bounds the answer but can overflow sinh^{n-1}
    let mut hi = (v / unit_ball_volume(n)).powf(1.0 / n as f64).clamp(1e-300, 1.0);
    while hyperbolic_ball_volume(n, hi)? < v {
        hi *= 2.0;
        if hi > 1e3 {
            return domain(format!("volume {v} is too large"));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if hyperbolic_ball_volume(n, mid)? < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sample abscissae for the monotonicity checks: every table node plus an
/// even grid on `(r, 2r]`.
fn check_points(sol: &HyperbolicBallSolution) -> Vec<f64> {
    let table = sol.profile.table().expect("hyperbolic profiles are tabulated");
    let mut pts = table.nodes().to_vec();
    pts.extend((1..=400).map(|k| sol.r * (1.0 + k as f64 / 400.0)));
    pts
}

/// Largest increase `h(t₂) − h(t₁)`, `t₁ < t₂ ≤ 2r`, of `h(t) = F(t)/sinh t`
/// with `F(t) = f(min(t, r))`. Non-positive when `h` is decreasing.
pub fn check_h_monotone(sol: &HyperbolicBallSolution) -> f64 {
    let mut lowest = f64::INFINITY;
    let mut worst = f64::NEG_INFINITY;
    for t in check_points(sol) {
        let h = sol.profile.capped_value(t) / t.sinh();
        worst = worst.max(h - lowest);
        lowest = lowest.min(h);
    }
    worst
}

/// Largest value of `γ(t) = f'(t) − coth(t) f(t)` on the table nodes in
/// `(0, r]`, divided by `max(1, coth(t) f(t))` so that large balls are
/// measured on the scale of the solution.
pub fn check_gamma(sol: &HyperbolicBallSolution) -> f64 {
    let table = sol.profile.table().expect("hyperbolic profiles are tabulated");
    table
        .nodes()
        .iter()
        .zip(table.values())
        .zip(table.derivatives())
        .map(|((&t, &f), &df)| {
            let cf = f / t.tanh();
            (df - cf) / cf.abs().max(1.0)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Rayleigh quotient `∫(f'² + (n−1)f²/sinh²t) dv / ∫ f² dv` of the tabulated
/// profile, integrated with a 15-point Kronrod rule on every table interval.
pub fn rayleigh_quotient(sol: &HyperbolicBallSolution) -> f64 {
    let table = sol.profile.table().expect("hyperbolic profiles are tabulated");
    let n = sol.n;
    let m = (n - 1) as f64;
    let weight = |t: f64| t.sinh().powi(n as i32 - 1);
    let energy = |t: f64| {
        let (f, df, _) = table.eval(t);
        let sh = t.sinh();
        weight(t) * (df * df + m * f * f / (sh * sh))
    };
    let mass = |t: f64| weight(t) * table.eval(t).0.powi(2);
    let mut breaks = vec![0.0];
    breaks.extend_from_slice(table.nodes());
    let (mut num, mut den) = (0.0, 0.0);
    for w in breaks.windows(2) {
        num += kronrod15(energy, w[0], w[1]);
        den += kronrod15(mass, w[0], w[1]);
    }
    num / den
}

/// Scale-invariant ODE residual `|f'' + (n−1)coth f' + (μ − (n−1)/sinh²) f| / (μ max|f|)`
/// of the interpolated profile at `count` interior points.
pub fn ode_residual(sol: &HyperbolicBallSolution, count: usize) -> f64 {
    let table = sol.profile.table().expect("hyperbolic profiles are tabulated");
    let fmax = table.values().iter().fold(0.0f64, |a, &f| a.max(f.abs()));
    let m = (sol.n - 1) as f64;
    (1..=count)
        .map(|k| {
            let t = sol.r * (k as f64 - 0.5) / count as f64;
            let (f, df, d2f) = table.eval(t.max(table.first()));
            let sh = t.sinh();
            (d2f + m * t.cosh() / sh * df + (sol.mu1 - m / (sh * sh)) * f).abs()
        })
        .fold(0.0, f64::max)
        / (sol.mu1 * fmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::mu1_ball;

    #[test]
    fn volume_closed_forms() {
        for r in [1e-3, 0.3, 1.0, 2.5] {
            let v2 = hyperbolic_ball_volume(2, r).unwrap();
            let cosh_m1 = r.exp_m1().powi(2) / (2.0 * r.exp());
            assert!((v2 - 2.0 * PI * cosh_m1).abs() < 1e-13 * v2);
            let v3 = hyperbolic_ball_volume(3, r).unwrap();
            let q3 = 4.0 * PI * integrate_rel(|t: f64| t.sinh().powi(2), 0.0, r, 1e-14).unwrap();
            assert!((v3 - q3).abs() < 1e-12 * q3, "n=3 r={r}");
            let v4 = hyperbolic_ball_volume(4, r).unwrap();
            let q4 = 2.0 * PI * PI * integrate_rel(|t: f64| t.sinh().powi(3), 0.0, r, 1e-14).unwrap();
            assert!((v4 - q4).abs() < 1e-12 * q4, "n=4 r={r}");
        }
        for n in 2..=6 {
            let r = 1e-4;
            let v = hyperbolic_ball_volume(n, r).unwrap();
            assert!((v / (unit_ball_volume(n) * r.powi(n as i32)) - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn radius_inversion_round_trips() {
        for n in [2, 3, 4, 5, 7] {
            for r in [0.01, 0.5, 1.0, 3.0] {
                let v = hyperbolic_ball_volume(n, r).unwrap();
                let back = ball_radius_for_volume(n, v).unwrap();
                assert!((back - r).abs() < 1e-10 * r.max(1.0), "n={n} r={r}: {back}");
            }
        }
        let r = ball_radius_for_volume(2, 2.0 * PI * (1f64.cosh() - 1.0)).unwrap();
        assert!((r - 1.0).abs() < 1e-11);
        assert!(ball_radius_for_volume(2, 0.0).is_err());
    }

    #[test]
    fn small_balls_approach_the_euclidean_eigenvalue() {
        let sol = shoot_mu1(2, 0.01).unwrap();
        let e = mu1_ball(2, 0.01).unwrap();
        assert!((sol.mu1 / e - 1.0).abs() < 5e-3);
    }

    #[test]
    fn solution_invariants() {
        let sol = shoot_mu1(3, 1.0).unwrap();
        let t = sol.profile.table().unwrap();
        assert!(t.values().iter().all(|&f| f > 0.0));
        let d = t.derivatives();
        assert!(d[..d.len() - 1].iter().all(|&x| x > -1e-12));
        assert!(sol.residual < 1e-8);
        assert!(check_h_monotone(&sol) <= 1e-10);
        assert!(check_gamma(&sol) <= 1e-10);
        assert!((rayleigh_quotient(&sol) / sol.mu1 - 1.0).abs() < 1e-7);
        assert!(ode_residual(&sol, 200) < 1e-6);
    }

    #[test]
    fn rejects_out_of_range_arguments() {
        assert!(shoot_mu1(1, 1.0).is_err());
        assert!(shoot_mu1(11, 1.0).is_err());
        assert!(shoot_mu1(2, 0.0).is_err());
        assert!(shoot_mu1(2, 21.0).is_err());
    }
}
