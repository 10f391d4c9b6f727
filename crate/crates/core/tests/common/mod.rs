#![allow(dead_code)]

use std::f64::consts::PI;

use membrane_iso::femlab::{mesh_domain, DomainSpec, TriMesh};
use proptest::prelude::*;

/// Star-shaped polygon with `radii.len()` vertices at evenly spaced angles
/// (jittered by `jitter`, a fraction of the spacing).
pub fn star_polygon(radii: &[f64], jitter: &[f64]) -> Vec<[f64; 2]> {
    let k = radii.len();
    (0..k)
        .map(|i| {
            let th = 2.0 * PI * (i as f64 + 0.4 * jitter[i]) / k as f64;
            [radii[i] * th.cos(), radii[i] * th.sin()]
        })
        .collect()
}

pub fn star_strategy(min_r: f64, max_r: f64) -> impl Strategy<Value = Vec<[f64; 2]>> {
    (5usize..=12)
        .prop_flat_map(move |k| {
            (
                prop::collection::vec(min_r..max_r, k),
                prop::collection::vec(-1.0f64..1.0, k),
            )
        })
        .prop_map(|(r, j)| star_polygon(&r, &j))
}

pub fn polygon_mesh(vertices: Vec<[f64; 2]>, h: f64) -> TriMesh {
    mesh_domain(&DomainSpec::Polygon { vertices }, h).expect("star polygons are valid")
}

pub fn l_shape() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
}
