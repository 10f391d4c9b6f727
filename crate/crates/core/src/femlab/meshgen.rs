//! Mesh generators for the supported domain shapes.
//!
//! Disks, ellipses, annuli and rectangles get structured meshes (polar rings
//! or a tensor grid). Stadiums and polygons, Euclidean or hyperbolic, are
//! sampled along the boundary, seeded with a hexagonal interior lattice and
//! handed to a constrained Delaunay refiner.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;

use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use super::domain::DomainSpec;
use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::Point;

/// Refuse to build meshes with more vertices than this.
pub const MAX_VERTICES: usize = 2_000_000;

/// Triangulates `spec` with target edge length `h` (model coordinates for
/// hyperbolic shapes).
pub fn mesh_domain(spec: &DomainSpec, h: f64) -> Result<TriMesh> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("mesh size must be positive, got {h}")));
    }
    spec.validate()?;
    // area in model coordinates
    let model_area = match spec {
        DomainSpec::HyperbolicDisk { rho } => Some(PI * (rho / 2.0).tanh().powi(2)),
        DomainSpec::HyperbolicPolygon { vertices } => Some(super::domain::polygon_area(vertices).abs()),
        _ => spec.exact_area(),
    };
    if let Some(area) = model_area {
        if area / (0.4 * h * h) > MAX_VERTICES as f64 {
            return Err(Error::Domain(format!(
                "mesh size {h} would exceed {MAX_VERTICES} vertices"
            )));
        }
    }
    let mode = spec.mode();
    let (vertices, triangles) = match spec {
        DomainSpec::Disk { r } => disk(*r, *r, h),
        DomainSpec::Ellipse { a, b } => disk(*a, *b, h),
        DomainSpec::Rectangle { a, b } => rectangle(*a, *b, h),
        DomainSpec::Annulus { r1, r2 } => annulus(*r1, *r2, h),
        DomainSpec::Stadium { l, r } => cdt(&stadium_boundary(*l, *r, h), h)?,
        DomainSpec::Polygon { vertices } => cdt(&polygon_boundary(vertices, h), h)?,
        DomainSpec::HyperbolicDisk { rho } => {
            let big_r = (rho / 2.0).tanh();
            disk(big_r, big_r, h)
        }
        DomainSpec::HyperbolicPolygon { vertices } => cdt(&hyperbolic_boundary(vertices, h), h)?,
    };
    TriMesh::new(vertices, triangles, mode, h)
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Triangulates the band between two closed rings of vertex indices whose
/// first entries are angularly aligned, always closing the triangle with the
/// shorter new diagonal.
fn stitch(inner: &[usize], outer: &[usize], pos: &[Point], out: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    if ni == 1 {
        for j in 0..no {
            out.push([inner[0], outer[j], outer[(j + 1) % no]]);
        }
        return;
    }
    let (mut i, mut j) = (0, 0);
    while i < ni || j < no {
        let a = inner[i % ni];
        let b = outer[j % no];
        let a2 = inner[(i + 1) % ni];
        let b2 = outer[(j + 1) % no];
        let advance_outer = j < no && (i == ni || dist(pos[a], pos[b2]) <= dist(pos[a2], pos[b]));
        if advance_outer {
            out.push([a, b, b2]);
            j += 1;
        } else {
            out.push([a, b, a2]);
            i += 1;
        }
    }
}

/// Polar ring mesh of the disk, mapped affinely onto the ellipse with
/// semi-axes `a`, `b`. Ring `k` of `m` carries `6k` nodes.
fn disk(a: f64, b: f64, h: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let r = a.max(b);
    let mut m = 1usize;
    while 2.0 * r * (PI / (6.0 * m as f64)).sin() > h {
        m += 1;
    }
    let mut pos = vec![[0.0, 0.0]];
    let mut rings: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..=m {
        let rho = k as f64 / m as f64;
        let count = 6 * k;
        let ring: Vec<usize> = (0..count)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / count as f64;
                pos.push([rho * th.cos(), rho * th.sin()]);
                pos.len() - 1
            })
            .collect();
        rings.push(ring);
    }
    let mut tris = Vec::new();
    for k in 1..=m {
        stitch(&rings[k - 1], &rings[k], &pos, &mut tris);
    }
    for p in pos.iter_mut() {
        *p = [a * p[0], b * p[1]];
    }
    (pos, tris)
}

fn ring_count(rho: f64, h: f64) -> usize {
    let s = (h / (2.0 * rho)).min(0.5);
    ((PI / s.asin()).ceil() as usize).max(6)
}

fn annulus(r1: f64, r2: f64, h: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let layers = ((r2 - r1) / (0.866 * h)).ceil().max(1.0) as usize;
    let mut pos = Vec::new();
    let mut rings = Vec::new();
    for l in 0..=layers {
        let rho = r1 + (r2 - r1) * l as f64 / layers as f64;
        let count = ring_count(rho, h);
        let ring: Vec<usize> = (0..count)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / count as f64;
                pos.push([rho * th.cos(), rho * th.sin()]);
                pos.len() - 1
            })
            .collect();
        rings.push(ring);
    }
    let mut tris = Vec::new();
    for l in 1..=layers {
        stitch(&rings[l - 1], &rings[l], &pos, &mut tris);
    }
    (pos, tris)
}

/// Tensor grid centred at the origin; each cell is split along the diagonal
/// selected by the parity of its indices.
fn rectangle(a: f64, b: f64, h: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let nx = (a / h).ceil().max(1.0) as usize;
    let ny = (b / h).ceil().max(1.0) as usize;
    let mut pos = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            pos.push([a * (i as f64 / nx as f64 - 0.5), b * (j as f64 / ny as f64 - 0.5)]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p01, p11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            if (i + j) % 2 == 0 {
                tris.push([p00, p10, p11]);
                tris.push([p00, p11, p01]);
            } else {
                tris.push([p00, p10, p01]);
                tris.push([p10, p11, p01]);
            }
        }
    }
    (pos, tris)
}

fn push_segment(out: &mut Vec<Point>, a: Point, b: Point, h: f64) {
    let k = (dist(a, b) / h).ceil().max(1.0) as usize;
    for i in 0..k {
        let s = i as f64 / k as f64;
        out.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
    }
}

fn push_arc(out: &mut Vec<Point>, c: Point, r: f64, from: f64, to: f64, h: f64) {
    let sweep = to - from;
    let step = 2.0 * (h / (2.0 * r)).min(1.0).asin();
    let k = (sweep / step).ceil().max(1.0) as usize;
    for i in 0..k {
        let th = from + sweep * i as f64 / k as f64;
        out.push([c[0] + r * th.cos(), c[1] + r * th.sin()]);
    }
}

fn stadium_boundary(l: f64, r: f64, h: f64) -> Vec<Point> {
    let x = 0.5 * l;
    let mut out = Vec::new();
    if l > 0.0 {
        push_segment(&mut out, [-x, -r], [x, -r], h);
    }
    push_arc(&mut out, [x, 0.0], r, -0.5 * PI, 0.5 * PI, h);
    if l > 0.0 {
        push_segment(&mut out, [x, r], [-x, r], h);
    }
    push_arc(&mut out, [-x, 0.0], r, 0.5 * PI, 1.5 * PI, h);
    out
}

fn polygon_boundary(vertices: &[Point], h: f64) -> Vec<Point> {
    let n = vertices.len();
    let mut out = Vec::new();
    for i in 0..n {
        push_segment(&mut out, vertices[i], vertices[(i + 1) % n], h);
    }
    out
}

fn mobius(z: Point, a: Point) -> Point {
    // (z - a) / (1 - conj(a) z)
    let num = [z[0] - a[0], z[1] - a[1]];
    let den = [1.0 - (a[0] * z[0] + a[1] * z[1]), -(a[0] * z[1] - a[1] * z[0])];
    let d2 = den[0] * den[0] + den[1] * den[1];
    [
        (num[0] * den[0] + num[1] * den[1]) / d2,
        (num[1] * den[0] - num[0] * den[1]) / d2,
    ]
}

/// Points of the geodesic from `a` to `b` (excluding `b`), evenly spaced in
/// hyperbolic arc length, with Euclidean spacing at most `h`.
fn geodesic(a: Point, b: Point, h: f64) -> Vec<Point> {
    let w = mobius(b, a);
    let len = 2.0 * w[0].hypot(w[1]).atanh();
    let neg_a = [-a[0], -a[1]];
    let mut k = (dist(a, b) / h).ceil().max(1.0) as usize;
    loop {
        let pts: Vec<Point> = (0..=k)
            .map(|i| {
                let s = (0.5 * len * i as f64 / k as f64).tanh() / (0.5 * len).tanh().max(f64::MIN_POSITIVE);
                let u = if len > 0.0 { [s * w[0], s * w[1]] } else { [0.0, 0.0] };
                mobius(u, neg_a)
            })
            .collect();
        if pts.windows(2).all(|p| dist(p[0], p[1]) <= h) {
            let mut pts = pts;
            pts.pop();
            pts[0] = a;
            return pts;
        }
        k *= 2;
    }
}

/// Boundary of the hyperbolic polygon with geodesic edges, sampled at
/// Euclidean spacing at most `h` in the disk model.
pub fn hyperbolic_boundary(vertices: &[Point], h: f64) -> Vec<Point> {
    let n = vertices.len();
    let mut out = Vec::new();
    for i in 0..n {
        out.extend(geodesic(vertices[i], vertices[(i + 1) % n], h));
    }
    out
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + s * d[0], a[1] + s * d[1]])
}

fn inside(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut c = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if x > p[0] {
                c = !c;
            }
        }
    }
    c
}

/// Hexagonal lattice points of spacing `h` inside the closed polygon and at
/// least `h / 2` away from it.
fn interior_lattice(poly: &[Point], h: f64) -> Vec<Point> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in poly {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    // bucket boundary segments by lattice row to keep the distance test local
    let dy = 0.5 * 3f64.sqrt() * h;
    let rows = ((hi[1] - lo[1]) / dy).floor() as usize + 1;
    let n = poly.len();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let y0 = a[1].min(b[1]) - 0.5 * h;
        let y1 = a[1].max(b[1]) + 0.5 * h;
        let r0 = ((y0 - lo[1]) / dy).floor().max(0.0) as usize;
        let r1 = (((y1 - lo[1]) / dy).ceil() as usize).min(rows - 1);
        for bucket in &mut buckets[r0..=r1] {
            bucket.push(i);
        }
    }
    let mut pts = Vec::new();
    for (row, bucket) in buckets.iter().enumerate() {
        let y = lo[1] + row as f64 * dy;
        let shift = if row % 2 == 1 { 0.5 * h } else { 0.0 };
        let mut x = lo[0] + shift;
        while x <= hi[0] {
            let p = [x, y];
            if inside(p, poly)
                && bucket
                    .iter()
                    .all(|&i| segment_distance(p, poly[i], poly[(i + 1) % n]) >= 0.5 * h)
            {
                pts.push(p);
            }
            x += h;
        }
    }
    pts
}

/// Constrained Delaunay mesh of the region bounded by the closed polyline.
fn cdt(boundary: &[Point], h: f64) -> Result<(Vec<Point>, Vec<[usize; 3]>)> {
    let n = boundary.len();
    let mut input: Vec<Point2<f64>> = boundary.iter().map(|p| Point2::new(p[0], p[1])).collect();
    input.extend(
        interior_lattice(boundary, h)
            .into_iter()
            .map(|p| Point2::new(p[0], p[1])),
    );
    let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
    let mut tri = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(input, edges)
        .map_err(|e| Error::Mesh(format!("triangulation failed: {e:?}")))?;
    let params = RefinementParameters::<f64>::new()
        .with_angle_limit(AngleLimit::from_deg(25.0))
        .with_max_allowed_area(0.45 * h * h)
        .exclude_outer_faces(true);
    let result = tri.refine(params);
    if !result.refinement_complete {
        return Err(Error::Mesh("Delaunay refinement ran out of vertices".into()));
    }
    let excluded: BTreeSet<usize> = result.excluded_faces.iter().map(|f| f.index()).collect();
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for face in tri.inner_faces() {
        if excluded.contains(&face.fix().index()) {
            continue;
        }
        let mut t = [0usize; 3];
        for (k, v) in face.vertices().iter().enumerate() {
            let idx = v.fix().index();
            t[k] = *map.entry(idx).or_insert_with(|| {
                let p = v.position();
                vertices.push([p.x, p.y]);
                vertices.len() - 1
            });
        }
        triangles.push(t);
    }
    Ok((vertices, triangles))
}
