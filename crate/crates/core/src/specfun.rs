//! Bessel functions of the first kind and the radial model profiles.
//!
//! The Euclidean profile is `g(t) = t^{1-n/2} J_{n/2}(p t / r)` with `p` the
//! first positive critical point of `t^{1-n/2} J_{n/2}(t)`, so that
//! `g'(r) = 0` and `(p/r)^2` is the first nonzero Neumann eigenvalue of the
//! `n`-ball of radius `r`. The hyperbolic profile is the tabulated solution
//! produced by [`crate::hyperball`]. Both are exposed through
//! [`RadialProfile`], which also provides the capped extension
//! `G(t) = g(min(t, r))`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest order accepted by [`bessel_j`]; covers `n/2` for `n <= 64`.
pub const MAX_ORDER: f64 = 34.0;

/// Largest dimension accepted by [`p_zero`].
pub const MAX_DIMENSION: usize = 64;

const SERIES_REL_STOP: f64 = 1e-18;

/// Gamma function for positive arguments.
///
/// Integer and half-integer arguments are evaluated by exact recurrence from
/// `Γ(1) = 1` and `Γ(1/2) = √π`; everything else goes through a Lanczos
/// approximation (g = 7, nine terms).
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && x <= 170.0 && twice == twice.round() {
        let (mut acc, mut z) = if twice as i64 % 2 == 0 {
            (1.0, 1.0)
        } else {
            (PI.sqrt(), 0.5)
        };
        while z < x {
            acc *= z;
            z += 1.0;
        }
        return acc;
    }
    lanczos_gamma(x)
}

fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Bessel function of the first kind `J_ν(x)` for `0 <= ν <= 32`, `x >= 0`.
///
/// The ascending power series is used while it is free of cancellation
/// (`x <= 12`, or `x²/4 <= ν + 1` where every term is smaller than the
/// first); larger arguments use Miller's backward recurrence normalised by
/// the Neumann-type sum `Σ (a+2k) Γ(a+k)/k! J_{a+2k}(x) = (x/2)^a`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("bessel_j: argument must be finite and >= 0, got {x}"));
    }
    if !(0.0..=MAX_ORDER).contains(&nu) {
        return domain(format!("bessel_j: order must lie in [0, {MAX_ORDER}], got {nu}"));
    }
    Ok(if uses_series(nu, x) {
        bessel_j_series(nu, x)
    } else {
        bessel_j_miller(nu, x)
    })
}

fn uses_series(nu: f64, x: f64) -> bool {
    x <= 12.0 || 0.25 * x * x <= nu + 1.0
}

/// Direct summation of the power series of `J_ν`.
///
/// Terms are generated by their ratio and summation stops once a term drops
/// below `1e-18` of the partial sum.
pub fn bessel_j_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let z = -half * half;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..1000 {
        let k = k as f64;
        term *= z / (k * (k + nu));
        sum += term;
        if term == 0.0 || term.abs() < SERIES_REL_STOP * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller backward recurrence for `J_ν(x)`, normalised by the even-order sum.
pub fn bessel_j_miller(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return bessel_j_series(nu, x);
    }
    let m = nu.floor() as usize;
    let a = nu - m as f64;
    let big = (m as f64).max(x);
    let mut top = (big + 30.0 + (40.0 * big).sqrt()).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }

    // even-index weights (a + 2k) Γ(a + k) / k!, with the k = 0 weight Γ(a + 1)
    let g1 = gamma(a + 1.0);
    let mut weights = Vec::with_capacity(top / 2 + 1);
    weights.push(g1);
    let mut q = g1;
    for k in 1..=top / 2 {
        if k > 1 {
            q *= (a + k as f64 - 1.0) / k as f64;
        }
        weights.push((a + 2.0 * k as f64) * q);
    }

    let mut above = 0.0;
    let mut current = 1e-30;
    let mut sum = 0.0;
    let mut target = 0.0;
    for j in (0..=top).rev() {
        if j % 2 == 0 {
            sum += weights[j / 2] * current;
        }
        if j == m {
            target = current;
        }
        if j == 0 {
            break;
        }
        let below = 2.0 * (a + j as f64) / x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            current *= 1e-250;
            above *= 1e-250;
            sum *= 1e-250;
            target *= 1e-250;
        }
    }
    target * (0.5 * x).powf(a) / sum
}

/// `d/dt [t^{1-ν} J_ν(t)]` for `ν >= 1`, using `J_ν' = (J_{ν-1} - J_{ν+1}) / 2`.
pub fn profile_slope(nu: f64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return domain("profile_slope: t must be positive");
    }
    Ok(t.powf(-nu) * slope_bracket(nu, t)?)
}

/// `t^ν · d/dt [t^{1-ν} J_ν(t)]`; same sign as the slope, no underflow.
fn slope_bracket(nu: f64, t: f64) -> Result<f64> {
    let j = bessel_j(nu, t)?;
    let jm = bessel_j(nu - 1.0, t)?;
    let jp = bessel_j(nu + 1.0, t)?;
    Ok((1.0 - nu) * j + 0.5 * t * (jm - jp))
}

static ZERO_CACHE: [OnceLock<f64>; MAX_DIMENSION + 1] = [const { OnceLock::new() }; MAX_DIMENSION + 1];

/// First positive zero `p_{n/2,1}` of `d/dt [t^{1-n/2} J_{n/2}(t)]`.
///
/// Scans `(0, 10)` with step `0.01` for the first sign change and bisects the
/// bracket to width `1e-13`. Results are memoised per dimension.
pub fn p_zero(n: usize) -> Result<f64> {
    if !(2..=MAX_DIMENSION).contains(&n) {
        return domain(format!("p_zero: dimension must lie in [2, {MAX_DIMENSION}], got {n}"));
    }
    if let Some(p) = ZERO_CACHE[n].get() {
        return Ok(*p);
    }
    let p = locate_zero(n)?;
    Ok(*ZERO_CACHE[n].get_or_init(|| p))
}

fn locate_zero(n: usize) -> Result<f64> {
    let nu = n as f64 / 2.0;
    let step = 0.01;
    let mut lo = step;
    if slope_bracket(nu, lo)? <= 0.0 {
        return Err(Error::Convergence {
            method: "p_zero bracket scan",
            residual: f64::NAN,
        });
    }
    let mut hi = None;
    for k in 2..1000 {
        let t = step * k as f64;
        if slope_bracket(nu, t)? <= 0.0 {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Convergence {
            method: "p_zero bracket scan",
            residual: f64::NAN,
        });
    };
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if slope_bracket(nu, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First nonzero Neumann eigenvalue `(p_{n/2,1} / r)^2` of the `n`-ball of radius `r`.
pub fn mu1_ball(n: usize, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return domain(format!("mu1_ball: radius must be positive, got {r}"));
    }
    let p = p_zero(n)?;
    Ok((p / r) * (p / r))
}

/// Geometry the radial profile lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Euclidean,
    Hyperbolic,
}

/// A radial function tabulated with value, first and second derivative,
/// interpolated by quintic Hermite polynomials.
#[derive(Debug, Clone)]
pub struct RadialTable {
    t: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    d2f: Vec<f64>,
}

impl RadialTable {
    /// Builds a table from strictly increasing nodes.
    pub fn new(t: Vec<f64>, f: Vec<f64>, df: Vec<f64>, d2f: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if n < 2 || f.len() != n || df.len() != n || d2f.len() != n {
            return domain("RadialTable: need at least two nodes and equal-length columns");
        }
        if t.windows(2).any(|w| w[1] <= w[0]) || t[0] <= 0.0 {
            return domain("RadialTable: nodes must be positive and strictly increasing");
        }
        Ok(Self { t, f, df, d2f })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.df
    }

    pub fn first(&self) -> f64 {
        self.t[0]
    }

    pub fn last(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    /// Value, first and second derivative at `t`.
    ///
    /// Below the first node the profile continues linearly through the
    /// origin (the regular solution behaves like `t` there); above the last
    /// node the last cubic piece is extrapolated.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let t0 = self.t[0];
        if t <= t0 {
            let slope = self.f[0] / t0;
            return (slope * t, slope, 0.0);
        }
        let i = self.t.partition_point(|&x| x <= t).clamp(1, self.t.len() - 1) - 1;
        let (a, b) = (self.t[i], self.t[i + 1]);
        let dt = b - a;
        let s = (t - a) / dt;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);

        let h = [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5),
            10.0 * s3 - 15.0 * s4 + 6.0 * s5,
            -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
            0.5 * (s3 - 2.0 * s4 + s5),
        ];
        let dh = [
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4),
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4),
        ];
        let d2h = [
            -60.0 * s + 180.0 * s2 - 120.0 * s3,
            -36.0 * s + 96.0 * s2 - 60.0 * s3,
            0.5 * (2.0 - 18.0 * s + 36.0 * s2 - 20.0 * s3),
            60.0 * s - 180.0 * s2 + 120.0 * s3,
            -24.0 * s + 84.0 * s2 - 60.0 * s3,
            0.5 * (6.0 * s - 24.0 * s2 + 20.0 * s3),
        ];
        let c = [
            self.f[i],
            dt * self.df[i],
            dt * dt * self.d2f[i],
            self.f[i + 1],
            dt * self.df[i + 1],
            dt * dt * self.d2f[i + 1],
        ];
        let dot = |w: &[f64; 6]| w.iter().zip(&c).map(|(w, c)| w * c).sum::<f64>();
        (dot(&h), dot(&dh) / dt, dot(&d2h) / (dt * dt))
    }
}

#[derive(Debug, Clone)]
enum Shape {
    /// `g(t) = a^ν t Σ c_k (a t)^{2k}` with `a = p / (2r)`.
    Bessel {
        zero: f64,
        scale: f64,
        prefactor: f64,
        coeffs: Vec<f64>,
    },
    Table(RadialTable),
}

/// Radial part of the first nonzero Neumann eigenfunction of a ball,
/// together with its capped extension `G(t) = g(min(t, r))`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    dimension: usize,
    radius: f64,
    mu1: f64,
    shape: Shape,
}

impl RadialProfile {
    /// Euclidean profile `g(t) = t^{1-n/2} J_{n/2}(p t / r)` for the ball of radius `r`.
    pub fn euclidean(n: usize, r: f64) -> Result<Self> {
        let mu1 = mu1_ball(n, r)?;
        let p = p_zero(n)?;
        let nu = n as f64 / 2.0;
        let scale = p / (2.0 * r);
        let mut coeffs = Vec::with_capacity(64);
        let mut c = 1.0 / gamma(nu + 1.0);
        coeffs.push(c);
        for k in 1..64 {
            let k = k as f64;
            c *= -1.0 / (k * (k + nu));
            coeffs.push(c);
        }
        Ok(Self {
            dimension: n,
            radius: r,
            mu1,
            shape: Shape::Bessel {
                zero: p,
                scale,
                prefactor: scale.powf(nu),
                coeffs,
            },
        })
    }

    /// Hyperbolic profile from a tabulated solution of the radial equation on `[0, r]`.
    pub fn hyperbolic(n: usize, r: f64, mu1: f64, table: RadialTable) -> Self {
        Self {
            dimension: n,
            radius: r,
            mu1,
            shape: Shape::Table(table),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// First nonzero Neumann eigenvalue of the ball the profile belongs to.
    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn space(&self) -> Space {
        match self.shape {
            Shape::Bessel { .. } => Space::Euclidean,
            Shape::Table(_) => Space::Hyperbolic,
        }
    }

    /// `p_{n/2,1}` for Euclidean profiles.
    pub fn zero(&self) -> Option<f64> {
        match self.shape {
            Shape::Bessel { zero, .. } => Some(zero),
            Shape::Table(_) => None,
        }
    }

    pub fn table(&self) -> Option<&RadialTable> {
        match &self.shape {
            Shape::Table(t) => Some(t),
            Shape::Bessel { .. } => None,
        }
    }

    /// `(g, g', g'')` at `t >= 0`. Accurate for `t` up to a few radii.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match &self.shape {
            Shape::Bessel {
                scale,
                prefactor,
                coeffs,
                ..
            } => {
                let z = (scale * t) * (scale * t);
                let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
                let mut zk = 1.0;
                let mut zprev = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    let term = c * zk;
                    let k2 = 2.0 * k as f64;
                    s0 += term;
                    s1 += (k2 + 1.0) * term;
                    // (2k+1)(2k) c_k a^{2k} t^{2k-1}
                    s2 += (k2 + 1.0) * k2 * c * zprev;
                    zprev = zk;
                    zk *= z;
                    if term.abs() < SERIES_REL_STOP * s0.abs() && k > 2 {
                        break;
                    }
                }
                (prefactor * t * s0, prefactor * s1, prefactor * scale * scale * t * s2)
            }
            Shape::Table(table) => table.eval(t),
        }
    }

    /// Profile value `g(t)`.
    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    /// Profile derivative `g'(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    /// Second derivative `g''(t)`.
    pub fn second_derivative(&self, t: f64) -> f64 {
        self.eval(t).2
    }

    /// `G(t) = g(min(t, r))`.
    pub fn capped_value(&self, t: f64) -> f64 {
        self.value(t.min(self.radius))
    }

    /// `G'(t)`, zero beyond the radius.
    pub fn capped_derivative(&self, t: f64) -> f64 {
        if t > self.radius {
            0.0
        } else {
            self.derivative(t)
        }
    }

    /// `G(t) / t`, with the removable singularity at `t = 0` filled by `g'(0)`.
    pub fn capped_over_t(&self, t: f64) -> f64 {
        if t > self.radius {
            return self.value(self.radius) / t;
        }
        match &self.shape {
            Shape::Bessel {
                scale,
                prefactor,
                coeffs,
                ..
            } => {
                let z = (scale * t) * (scale * t);
                let mut s0 = 0.0;
                let mut zk = 1.0;
                for (k, c) in coeffs.iter().enumerate() {
                    let term = c * zk;
                    s0 += term;
                    zk *= z;
                    if term.abs() < SERIES_REL_STOP * s0.abs() && k > 2 {
                        break;
                    }
                }
                prefactor * s0
            }
            Shape::Table(table) => {
                if t <= table.first() {
                    table.values()[0] / table.first()
                } else {
                    table.eval(t).0 / t
                }
            }
        }
    }

    /// Euclidean energy density `G'(t)^2 + (n-1) G(t)^2 / t^2`.
    pub fn energy_density(&self, t: f64) -> f64 {
        let dg = self.capped_derivative(t);
        let q = self.capped_over_t(t);
        dg * dg + (self.dimension as f64 - 1.0) * q * q
    }
}
