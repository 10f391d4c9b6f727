//! Fraenkel asymmetry `inf |Ω Δ B| / |Ω|` over disks `B` with `|B| = |Ω|`.
//!
//! `|Ω ∩ B|` is computed exactly from the boundary: summing the signed area
//! of `B ∩ triangle(c, a, b)` over the oriented boundary edges `a → b`
//! (with `c` the disk centre) telescopes to the clipped area of every mesh
//! triangle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::femlab::TriMesh;
use crate::optim::NelderMead;
use crate::Point;

/// Side of the coarse search grid over the bounding box.
pub const SEARCH_GRID: usize = 32;
/// Resolution of the indicator-grid quadrature.
pub const ORACLE_GRID: usize = 512;

/// How `|Ω ∩ B|` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionMethod {
    /// Exact boundary clipping against the disk.
    Exact,
    /// Midpoint indicator quadrature on a 512 × 512 grid over the bounding box.
    Grid,
}

/// Minimiser of the symmetric difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryResult {
    /// `|Ω Δ B| / |Ω|` at the optimum.
    pub value: f64,
    pub center: Point,
    /// Radius of the disk with the area of the mesh.
    pub ball_radius: f64,
    /// Objective evaluations spent (grid and simplex stages).
    pub evaluations: usize,
    /// Best value found on the coarse grid, before refinement.
    pub grid_value: f64,
}

/// Signed area of `disk(0, r) ∩ triangle(0, a, b)`.
fn wedge_area(a: Point, b: Point, r: f64) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let qa = d[0] * d[0] + d[1] * d[1];
    if qa == 0.0 {
        return 0.0;
    }
    let qb = a[0] * d[0] + a[1] * d[1];
    let qc = a[0] * a[0] + a[1] * a[1] - r * r;
    // circle crossings a + s d, 0 < s < 1
    let mut cuts = [0.0, 1.0, 1.0, 1.0];
    let mut k = 1;
    let disc = qb * qb - qa * qc;
    if disc > 0.0 {
        let sq = disc.sqrt();
        for s in [(-qb - sq) / qa, (-qb + sq) / qa] {
            if s > 0.0 && s < 1.0 {
                cuts[k] = s;
                k += 1;
            }
        }
    }
    cuts[k] = 1.0;
    let at = |s: f64| [a[0] + s * d[0], a[1] + s * d[1]];
    let mut area = 0.0;
    for w in cuts[..=k].windows(2) {
        let (p, q) = (at(w[0]), at(w[1]));
        let m = at(0.5 * (w[0] + w[1]));
        let cross = p[0] * q[1] - p[1] * q[0];
        if m[0] * m[0] + m[1] * m[1] <= r * r {
            area += 0.5 * cross;
        } else {
            let dot = p[0] * q[0] + p[1] * q[1];
            area += 0.5 * r * r * cross.atan2(dot);
        }
    }
    area
}

/// `|Ω ∩ B(center, radius)|` by exact clipping.
pub fn intersection_area(mesh: &TriMesh, center: Point, radius: f64) -> f64 {
    if radius <= 0.0 {
        return 0.0;
    }
    let v = mesh.vertices();
    mesh.boundary_edges()
        .iter()
        .map(|e| {
            let a = [v[e[0]][0] - center[0], v[e[0]][1] - center[1]];
            let b = [v[e[1]][0] - center[0], v[e[1]][1] - center[1]];
            wedge_area(a, b, radius)
        })
        .sum()
}

/// `|Ω ∩ B(center, radius)|` by indicator quadrature at cell midpoints of a
/// `res × res` grid over the bounding box of the mesh.
pub fn intersection_area_grid(mesh: &TriMesh, center: Point, radius: f64, res: usize) -> f64 {
    let (lo, hi) = mesh.bbox();
    let dx = (hi[0] - lo[0]) / res as f64;
    let dy = (hi[1] - lo[1]) / res as f64;
    let v = mesh.vertices();
    let mut count = 0usize;
    let mut xs = Vec::new();
    for row in 0..res {
        let y = lo[1] + (row as f64 + 0.5) * dy;
        xs.clear();
        for e in mesh.boundary_edges() {
            let (a, b) = (v[e[0]], v[e[1]]);
            if (a[1] > y) != (b[1] > y) {
                xs.push(a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]));
            }
        }
        xs.sort_by(f64::total_cmp);
        let ry = y - center[1];
        for pair in xs.chunks_exact(2) {
            let i0 = ((pair[0] - lo[0]) / dx - 0.5).ceil().max(0.0) as usize;
            let i1 = ((pair[1] - lo[0]) / dx - 0.5).floor().min(res as f64 - 1.0);
            if i1 < 0.0 {
                continue;
            }
            for col in i0..=(i1 as usize) {
                let rx = lo[0] + (col as f64 + 0.5) * dx - center[0];
                if rx * rx + ry * ry <= radius * radius {
                    count += 1;
                }
            }
        }
    }
    count as f64 * dx * dy
}

fn intersection(mesh: &TriMesh, center: Point, radius: f64, method: IntersectionMethod) -> f64 {
    match method {
        IntersectionMethod::Exact => intersection_area(mesh, center, radius),
        IntersectionMethod::Grid => intersection_area_grid(mesh, center, radius, ORACLE_GRID),
    }
}

/// `|Ω Δ B| = |Ω| + |B| − 2|Ω ∩ B|`.
pub fn symmetric_difference(mesh: &TriMesh, center: Point, radius: f64) -> f64 {
    symmetric_difference_with(mesh, center, radius, IntersectionMethod::Exact)
}

pub fn symmetric_difference_with(mesh: &TriMesh, center: Point, radius: f64, method: IntersectionMethod) -> f64 {
    mesh.area() + PI * radius * radius - 2.0 * intersection(mesh, center, radius, method)
}

/// Fraenkel asymmetry of a planar mesh with exact clipping.
pub fn fraenkel_asymmetry(mesh: &TriMesh) -> AsymmetryResult {
    fraenkel_asymmetry_with(mesh, IntersectionMethod::Exact)
}

/// Coarse `32 × 32` grid search over cell centres of the bounding box, then
/// Nelder–Mead from the best cell. Near-ties on the grid go to the
/// lexicographically smallest centre.
pub fn fraenkel_asymmetry_with(mesh: &TriMesh, method: IntersectionMethod) -> AsymmetryResult {
    let area = mesh.area();
    let radius = (area / PI).sqrt();
    let (lo, hi) = mesh.bbox();
    let cell = [
        (hi[0] - lo[0]) / SEARCH_GRID as f64,
        (hi[1] - lo[1]) / SEARCH_GRID as f64,
    ];
    let objective = |c: Point| symmetric_difference_with(mesh, c, radius, method);

    let mut candidates = Vec::with_capacity(SEARCH_GRID * SEARCH_GRID);
    for i in 0..SEARCH_GRID {
        for j in 0..SEARCH_GRID {
            let c = [lo[0] + (i as f64 + 0.5) * cell[0], lo[1] + (j as f64 + 0.5) * cell[1]];
            candidates.push((objective(c), c));
        }
    }
    let best = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * area;
    let (grid_value, start) = candidates
        .iter()
        .filter(|c| c.0 <= best + tie)
        .min_by(|a, b| a.1[0].total_cmp(&b.1[0]).then(a.1[1].total_cmp(&b.1[1])))
        .copied()
        .expect("grid is non-empty");

    let scale = cell[0].max(cell[1]);
    let nm = NelderMead {
        initial_step: scale,
        x_tol: 1e-11 * scale * SEARCH_GRID as f64,
        f_tol: 1e-15 * area,
        max_evals: 2000,
        restarts: 2,
    };
    let min = nm.minimize(|x| objective([x[0], x[1]]), &start);
    let (value, center) = if min.value <= grid_value {
        (min.value, [min.x[0], min.x[1]])
    } else {
        (grid_value, start)
    };
    AsymmetryResult {
        value: (value / area).max(0.0),
        center,
        ball_radius: radius,
        evaluations: candidates.len() + min.evaluations,
        grid_value: (grid_value / area).max(0.0),
    }
}
