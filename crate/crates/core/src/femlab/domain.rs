use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mesh::{Mode, DISK_LIMIT};
use crate::error::{Error, Result};
use crate::Point;

/// Shape of a catalog domain.
///
/// Euclidean shapes are centred at the origin. Hyperbolic shapes live in the
/// Poincaré disk; `HyperbolicDisk` is the geodesic ball of the given radius
/// about the origin and `HyperbolicPolygon` has geodesic edges.
///
/// The textual form is `kind:args`, e.g. `disk:1`, `ellipse:2,1`,
/// `polygon:0,0;1,0;0,1` or `hyperbolic_disk:1.5`; JSON objects tagged with
/// `"kind"` are accepted as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Disk {
        r: f64,
    },
    /// Semi-axes `a` (along x) and `b`.
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Side lengths `a` (along x) and `b`.
    Rectangle {
        a: f64,
        b: f64,
    },
    /// Straight segment of length `l` capped by half-disks of radius `r`.
    Stadium {
        l: f64,
        r: f64,
    },
    Annulus {
        r1: f64,
        r2: f64,
    },
    Polygon {
        vertices: Vec<Point>,
    },
    HyperbolicDisk {
        rho: f64,
    },
    HyperbolicPolygon {
        vertices: Vec<Point>,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Descriptor(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let orient = |a: Point, b: Point, c: Point| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Point, b: Point, c: Point, d: f64| {
        d == 0.0 && c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Signed shoelace area of a closed polygon.
pub fn polygon_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

/// Checks that a closed polygon is simple with non-zero area.
pub fn check_simple_polygon(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Descriptor("polygon needs at least three vertices".into()));
    }
    if vertices.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::Descriptor("polygon vertex is not finite".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if vertices[i] == vertices[j] {
                return Err(Error::Descriptor("polygon repeats a vertex".into()));
            }
            // adjacent edges share an endpoint and are skipped
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                return Err(Error::Descriptor(format!(
                    "polygon is self-intersecting (edges {i} and {j})"
                )));
            }
        }
    }
    if polygon_area(vertices).abs() < 1e-14 {
        return Err(Error::Descriptor("polygon has zero area".into()));
    }
    Ok(())
}

impl DomainSpec {
    pub fn mode(&self) -> Mode {
        match self {
            DomainSpec::HyperbolicDisk { .. } | DomainSpec::HyperbolicPolygon { .. } => Mode::Hyperbolic,
            _ => Mode::Euclidean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Disk { r } => positive("r", *r),
            DomainSpec::Ellipse { a, b } | DomainSpec::Rectangle { a, b } => {
                positive("a", *a)?;
                positive("b", *b)
            }
            DomainSpec::Stadium { l, r } => {
                positive("r", *r)?;
                if *l >= 0.0 && l.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Descriptor(format!(
                        "stadium length must be non-negative, got {l}"
                    )))
                }
            }
            DomainSpec::Annulus { r1, r2 } => {
                positive("r1", *r1)?;
                positive("r2", *r2)?;
                if r1 >= r2 {
                    return Err(Error::Descriptor(format!("annulus needs r1 < r2, got {r1} >= {r2}")));
                }
                Ok(())
            }
            DomainSpec::Polygon { vertices } => check_simple_polygon(vertices),
            DomainSpec::HyperbolicDisk { rho } => {
                positive("rho", *rho)?;
                if (rho / 2.0).tanh() > DISK_LIMIT {
                    return Err(Error::Descriptor(format!(
                        "geodesic radius {rho} maps outside |x| < 1 - 1e-6"
                    )));
                }
                Ok(())
            }
            DomainSpec::HyperbolicPolygon { vertices } => {
                if let Some(p) = vertices.iter().find(|p| p[0].hypot(p[1]) > DISK_LIMIT) {
                    return Err(Error::Descriptor(format!(
                        "hyperbolic vertex ({}, {}) lies outside |x| < 1 - 1e-6",
                        p[0], p[1]
                    )));
                }
                check_simple_polygon(vertices)?;
                // geodesic edges bow inwards or outwards; check the sampled polygon too
                let sampled = super::meshgen::hyperbolic_boundary(vertices, 0.05);
                check_simple_polygon(&sampled)
            }
        }
    }

    /// Exact Euclidean area for Euclidean shapes, exact hyperbolic area for
    /// the geodesic disk. `None` when no closed form is used.
    pub fn exact_area(&self) -> Option<f64> {
        match self {
            DomainSpec::Disk { r } => Some(PI * r * r),
            DomainSpec::Ellipse { a, b } => Some(PI * a * b),
            DomainSpec::Rectangle { a, b } => Some(a * b),
            DomainSpec::Stadium { l, r } => Some(2.0 * r * l + PI * r * r),
            DomainSpec::Annulus { r1, r2 } => Some(PI * (r2 * r2 - r1 * r1)),
            DomainSpec::Polygon { vertices } => Some(polygon_area(vertices).abs()),
            DomainSpec::HyperbolicDisk { rho } => Some(2.0 * PI * (rho.cosh() - 1.0)),
            DomainSpec::HyperbolicPolygon { .. } => None,
        }
    }

    /// Whether the shape is a topological disk.
    pub fn is_simply_connected(&self) -> bool {
        !matches!(self, DomainSpec::Annulus { .. })
    }

    /// Short tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            DomainSpec::Disk { .. } => "disk",
            DomainSpec::Ellipse { .. } => "ellipse",
            DomainSpec::Rectangle { .. } => "rectangle",
            DomainSpec::Stadium { .. } => "stadium",
            DomainSpec::Annulus { .. } => "annulus",
            DomainSpec::Polygon { .. } => "polygon",
            DomainSpec::HyperbolicDisk { .. } => "hyperbolic_disk",
            DomainSpec::HyperbolicPolygon { .. } => "hyperbolic_polygon",
        }
    }
}

fn numbers(args: &str, expect: usize, kind: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Descriptor(format!("{kind}: {e}")))?;
    if vals.len() != expect {
        return Err(Error::Descriptor(format!(
            "{kind} takes {expect} argument(s), got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn points(args: &str, kind: &str) -> Result<Vec<Point>> {
    args.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| numbers(pair, 2, kind).map(|v| [v[0], v[1]]))
        .collect()
}

impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = if s.starts_with('{') {
            serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))?
        } else {
            let (kind, args) = s
                .split_once(':')
                .ok_or_else(|| Error::Descriptor(format!("expected `kind:args`, got `{s}`")))?;
            match kind.trim() {
                "disk" => DomainSpec::Disk {
                    r: numbers(args, 1, kind)?[0],
                },
                "ellipse" => {
                    let v = numbers(args, 2, kind)?;
                    DomainSpec::Ellipse { a: v[0], b: v[1] }
                }
                "rectangle" => {
                    let v = numbers(args, 2, kind)?;
                    DomainSpec::Rectangle { a: v[0], b: v[1] }
                }
                "stadium" => {
                    let v = numbers(args, 2, kind)?;
                    DomainSpec::Stadium { l: v[0], r: v[1] }
                }
                "annulus" => {
                    let v = numbers(args, 2, kind)?;
                    DomainSpec::Annulus { r1: v[0], r2: v[1] }
                }
                "polygon" => DomainSpec::Polygon {
                    vertices: points(args, kind)?,
                },
                "hyperbolic_disk" => DomainSpec::HyperbolicDisk {
                    rho: numbers(args, 1, kind)?[0],
                },
                "hyperbolic_polygon" => DomainSpec::HyperbolicPolygon {
                    vertices: points(args, kind)?,
                },
                other => return Err(Error::Descriptor(format!("unknown domain kind `{other}`"))),
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_textual_descriptors() {
        assert_eq!("disk:1".parse::<DomainSpec>().unwrap(), DomainSpec::Disk { r: 1.0 });
        assert_eq!(
            "ellipse: 2, 1".parse::<DomainSpec>().unwrap(),
            DomainSpec::Ellipse { a: 2.0, b: 1.0 }
        );
        let p: DomainSpec = "polygon:0,0;1,0;0,1".parse().unwrap();
        assert_eq!(p.exact_area(), Some(0.5));
        assert_eq!(
            "hyperbolic_disk:1".parse::<DomainSpec>().unwrap().mode(),
            Mode::Hyperbolic
        );
    }

    #[test]
    fn parses_json_descriptors() {
        let d: DomainSpec = r#"{"kind":"annulus","r1":0.5,"r2":1}"#.parse().unwrap();
        assert_eq!(d, DomainSpec::Annulus { r1: 0.5, r2: 1.0 });
        assert!(!d.is_simply_connected());
    }

    #[test]
    fn rejects_invalid_shapes() {
        for bad in [
            "disk:-1",
            "annulus:1,0.5",
            "polygon:0,0;1,1;1,0;0,1",
            "polygon:0,0;1,0",
            "hyperbolic_disk:40",
            "hyperbolic_polygon:0,0;1,0;0,0.5",
            "blob:1",
            "disk",
            "ellipse:1",
        ] {
            assert!(bad.parse::<DomainSpec>().is_err(), "{bad}");
        }
    }
}
