use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::signed_area;
use crate::{json17, Point};

/// Largest admissible Euclidean radius of a vertex in the Poincaré-disk model.
pub const DISK_LIMIT: f64 = 1.0 - 1e-6;

/// Metric a mesh is interpreted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Euclidean,
    /// Poincaré-disk coordinates with metric `(2 / (1 - |x|^2))^2 |dx|^2`.
    Hyperbolic,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Euclidean => "euclidean",
            Mode::Hyperbolic => "hyperbolic",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Mode::Euclidean),
            "hyperbolic" => Ok(Mode::Hyperbolic),
            other => Err(Error::Descriptor(format!("unknown mode `{other}`"))),
        }
    }
}

/// Conforming planar triangulation.
///
/// Triangles are positively oriented. `boundary_edges` holds every edge used
/// by exactly one triangle, directed as in that triangle, so the domain lies
/// to the left of each boundary edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    mode: Mode,
    h: f64,
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    mode: Mode,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Validates the triangulation and derives its boundary.
    ///
    /// Negatively oriented triangles are flipped; degenerate ones, dangling
    /// indices, edges shared by more than two triangles and hyperbolic
    /// vertices outside the model disk are rejected.
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>, mode: Mode, h: f64) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Mesh("no triangles".into()));
        }
        if vertices.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::Mesh("non-finite vertex coordinate".into()));
        }
        if mode == Mode::Hyperbolic {
            if let Some(p) = vertices.iter().find(|p| p[0].hypot(p[1]) > DISK_LIMIT) {
                return Err(Error::Mesh(format!(
                    "hyperbolic vertex ({}, {}) lies outside |x| <= 1 - 1e-6",
                    p[0], p[1]
                )));
            }
        }
        for t in triangles.iter_mut() {
            if t.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::Mesh(format!("triangle {t:?} references a missing vertex")));
            }
            let a = signed_area([vertices[t[0]], vertices[t[1]], vertices[t[2]]]);
            if a == 0.0 || !a.is_finite() {
                return Err(Error::Mesh(format!("triangle {t:?} has zero area")));
            }
            if a < 0.0 {
                t.swap(1, 2);
            }
        }

        let mut uses: BTreeMap<(usize, usize), (u32, [usize; 2])> = BTreeMap::new();
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = uses.entry((a.min(b), a.max(b))).or_insert((0, [a, b]));
                e.0 += 1;
            }
        }
        let mut boundary_edges = Vec::new();
        for (_, (count, dir)) in uses {
            match count {
                1 => boundary_edges.push(dir),
                2 => {}
                _ => return Err(Error::Mesh("edge shared by more than two triangles".into())),
            }
        }

        let h = if h > 0.0 { h } else { 0.0 };
        let mut mesh = Self {
            vertices,
            triangles,
            boundary_edges,
            mode,
            h,
        };
        if mesh.h == 0.0 {
            mesh.h = mesh.max_edge_length();
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Target edge length the mesh was generated for.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn triangle(&self, i: usize) -> [Point; 3] {
        let t = self.triangles[i];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn triangle_area(&self, i: usize) -> f64 {
        signed_area(self.triangle(i))
    }

    /// Euclidean area of the triangulated region (model area in hyperbolic mode).
    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|i| self.triangle_area(i)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let mut c = [0.0, 0.0];
        let mut total = 0.0;
        for i in 0..self.triangles.len() {
            let tri = self.triangle(i);
            let a = signed_area(tri);
            total += a;
            for d in 0..2 {
                c[d] += a * (tri[0][d] + tri[1][d] + tri[2][d]) / 3.0;
            }
        }
        [c[0] / total, c[1] / total]
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edge_lengths().fold(0.0, f64::max)
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edge_lengths().fold(f64::INFINITY, f64::min)
    }

    fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.triangles.iter().flat_map(move |t| {
            (0..3).map(move |k| {
                let (a, b) = (self.vertices[t[k]], self.vertices[t[(k + 1) % 3]]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
        })
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for i in 0..self.triangles.len() {
            let tri = self.triangle(i);
            for k in 0..3 {
                let (p, q, r) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [r[0] - p[0], r[1] - p[1]];
                let ang = (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1]);
                worst = worst.min(ang.to_degrees());
            }
        }
        worst
    }

    pub fn num_edges(&self) -> usize {
        let mut set = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.len()
    }

    /// Number of connected components of the triangle adjacency graph.
    pub fn components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for t in &self.triangles {
            for k in 1..3 {
                let (a, b) = (find(&mut parent, t[0]), find(&mut parent, t[k]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let used: BTreeSet<usize> = self.triangles.iter().flatten().copied().collect();
        used.into_iter()
            .map(|v| find(&mut parent, v))
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Connected with Euler characteristic one, i.e. a topological disk.
    pub fn is_simply_connected(&self) -> bool {
        let used: BTreeSet<usize> = self.triangles.iter().flatten().copied().collect();
        let chi = used.len() as i64 - self.num_edges() as i64 + self.triangles.len() as i64;
        chi == 1 && self.components() == 1
    }

    /// Even–odd point-in-domain test against the boundary edges.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for e in &self.boundary_edges {
            let (a, b) = (self.vertices[e[0]], self.vertices[e[1]]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if x > p[0] {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn mapped(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        let vertices = self.vertices.iter().map(|&p| f(p)).collect();
        Self::new(vertices, self.triangles.clone(), self.mode, 0.0).map(|mut m| {
            m.h = m
                .max_edge_length()
                .max(self.h * m.max_edge_length() / self.max_edge_length());
            m
        })
    }

    pub fn translated(&self, by: Point) -> Result<Self> {
        let mut m = self.mapped(|p| [p[0] + by[0], p[1] + by[1]])?;
        m.h = self.h;
        Ok(m)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        let mut m = self.mapped(|p| [s * p[0], s * p[1]])?;
        m.h = self.h * s.abs();
        Ok(m)
    }

    /// Rotation by `angle` radians about the origin.
    pub fn rotated(&self, angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let mut m = self.mapped(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])?;
        m.h = self.h;
        Ok(m)
    }

    /// Union of two meshes with disjoint interiors and no shared vertices.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.mode != other.mode {
            return Err(Error::Mesh("cannot join meshes of different modes".into()));
        }
        let off = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
        Self::new(vertices, triangles, self.mode, self.h.max(other.h))
    }

    /// Mesh file JSON: `{"mode", "vertices", "triangles"}` with 0-based indices
    /// and coordinates at 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let file = MeshFile {
            mode: self.mode,
            vertices: self.vertices.clone(),
            triangles: self.triangles.clone(),
        };
        Ok(json17::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(s)?;
        Self::new(file.vertices, file.triangles, file.mode, 0.0)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
