//! Quadrature rules: globally adaptive Gauss–Kronrod (7/15) on intervals and
//! the 7-point degree-5 rule on triangles.

use crate::error::{Error, Result};
use crate::Point;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Single 15-point Kronrod estimate of `∫_a^b f`.
pub fn kronrod15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    gk15(&mut f, a, b).0
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `max(abs_tol, rel_tol * |I|)`.
///
/// The interval with the largest error estimate is bisected each step; at
/// most `max_intervals` subintervals are kept. The error estimate is the raw
/// Kronrod–Gauss difference.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Quad> {
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    loop {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        if parts.len() >= max_intervals {
            return Err(Error::Convergence {
                method: "adaptive Gauss-Kronrod",
                residual: err,
            });
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, pv, pe) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
        // the running sums drift; resynchronise occasionally
        if parts.len() % 64 == 0 {
            total = parts.iter().map(|p| p.2).sum();
            err = parts.iter().map(|p| p.3).sum();
        }
    }
    let value = parts.iter().map(|p| p.2).sum();
    let error = parts.iter().map(|p| p.3).sum();
    Ok(Quad {
        value,
        error,
        intervals: parts.len(),
    })
}

/// Convenience wrapper with a relative tolerance and a generous interval budget.
pub fn integrate_rel<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    integrate(f, a, b, 0.0, rel_tol, 4096).map(|q| q.value)
}

/// Barycentric nodes and weights (summing to one) of the 7-point degree-5 triangle rule.
pub fn triangle_rule() -> [([f64; 3], f64); 7] {
    let s = 15f64.sqrt();
    let a1 = (6.0 - s) / 21.0;
    let b1 = (9.0 + 2.0 * s) / 21.0;
    let w1 = (155.0 - s) / 1200.0;
    let a2 = (6.0 + s) / 21.0;
    let b2 = (9.0 - 2.0 * s) / 21.0;
    let w2 = (155.0 + s) / 1200.0;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 0.225),
        ([b1, a1, a1], w1),
        ([a1, b1, a1], w1),
        ([a1, a1, b1], w1),
        ([b2, a2, a2], w2),
        ([a2, b2, a2], w2),
        ([a2, a2, b2], w2),
    ]
}

/// Integrates `f` over the triangle `tri` with the 7-point rule.
pub fn integrate_triangle<F: FnMut(Point) -> f64>(tri: [Point; 3], mut f: F) -> f64 {
    let area = signed_area(tri).abs();
    let mut acc = 0.0;
    for (bary, w) in triangle_rule() {
        acc += w * f(barycentric_point(tri, bary));
    }
    acc * area
}

pub(crate) fn barycentric_point(tri: [Point; 3], b: [f64; 3]) -> Point {
    [
        b[0] * tri[0][0] + b[1] * tri[1][0] + b[2] * tri[2][0],
        b[0] * tri[0][1] + b[1] * tri[1][1] + b[2] * tri[2][1],
    ]
}

pub(crate) fn signed_area(tri: [Point; 3]) -> f64 {
    let [a, b, c] = tri;
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}
