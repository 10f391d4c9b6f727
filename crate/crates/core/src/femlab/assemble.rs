use super::mesh::{Mode, TriMesh};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::Point;

/// Conformal density `(2 / (1 - |x|^2))^2` of the Poincaré-disk metric.
pub fn conformal_density(p: Point) -> f64 {
    let s = 1.0 - (p[0] * p[0] + p[1] * p[1]);
    4.0 / (s * s)
}

/// Element stiffness and mass matrices of triangle `i`.
pub fn element_matrices(mesh: &TriMesh, i: usize) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let p = mesh.triangle(i);
    let area = mesh.triangle_area(i);
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for k in 0..3 {
        let (q, r) = (p[(k + 1) % 3], p[(k + 2) % 3]);
        b[k] = q[1] - r[1];
        c[k] = r[0] - q[0];
    }
    let mut ke = [[0.0; 3]; 3];
    for a in 0..3 {
        for d in 0..3 {
            ke[a][d] = (b[a] * b[d] + c[a] * c[d]) / (4.0 * area);
        }
    }
    let mut me = [[0.0; 3]; 3];
    match mesh.mode() {
        Mode::Euclidean => {
            for (a, row) in me.iter_mut().enumerate() {
                for (d, m) in row.iter_mut().enumerate() {
                    *m = area / 12.0 * if a == d { 2.0 } else { 1.0 };
                }
            }
        }
        Mode::Hyperbolic => {
            // edge-midpoint rule: the midpoint of edge (k, k+1) has
            // barycentric weight 1/2 on both of its endpoints
            for k in 0..3 {
                let (u, v) = (k, (k + 1) % 3);
                let mid = [0.5 * (p[u][0] + p[v][0]), 0.5 * (p[u][1] + p[v][1])];
                let w = area / 3.0 * conformal_density(mid) * 0.25;
                me[u][u] += w;
                me[v][v] += w;
                me[u][v] += w;
                me[v][u] += w;
            }
        }
    }
    (ke, me)
}

/// P1 stiffness and mass matrices.
///
/// The stiffness matrix uses Euclidean gradients in both modes (the 2-D
/// Dirichlet energy is conformally invariant); in hyperbolic mode the mass
/// matrix carries the conformal density.
pub fn assemble(mesh: &TriMesh) -> Result<(CsrMatrix, CsrMatrix)> {
    let total = mesh.area();
    let nt = mesh.triangles().len();
    let mut kt = Vec::with_capacity(9 * nt);
    let mut mt = Vec::with_capacity(9 * nt);
    for i in 0..nt {
        if mesh.triangle_area(i) < 1e-14 * total {
            return Err(Error::Mesh(format!("triangle {i} is degenerate")));
        }
        let (ke, me) = element_matrices(mesh, i);
        let t = mesh.triangles()[i];
        for a in 0..3 {
            for d in 0..3 {
                kt.push((t[a], t[d], ke[a][d]));
                mt.push((t[a], t[d], me[a][d]));
            }
        }
    }
    let n = mesh.vertices().len();
    Ok((CsrMatrix::from_triplets(n, kt), CsrMatrix::from_triplets(n, mt)))
}

/// Measure of the meshed domain in its own metric: the sum of all mass
/// matrix entries.
pub fn mesh_volume(mass: &CsrMatrix) -> f64 {
    mass.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femlab::{mesh_domain, DomainSpec};

    #[test]
    fn reference_triangle_identities() {
        let m = TriMesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            Mode::Euclidean,
            1.0,
        )
        .unwrap();
        let (k, mm) = assemble(&m).unwrap();
        for i in 0..3 {
            let row: f64 = mm.row(i).1.iter().sum();
            assert!((row - 0.5 / 3.0).abs() < 1e-16);
            let krow: f64 = k.row(i).1.iter().sum();
            assert!(krow.abs() < 1e-15);
        }
        assert_eq!(k.get(0, 0), 1.0);
        assert_eq!(k.get(1, 2), 0.0);
    }

    #[test]
    fn stiffness_annihilates_constants() {
        let mesh = mesh_domain(&DomainSpec::Stadium { l: 1.0, r: 0.5 }, 0.1).unwrap();
        let (k, m) = assemble(&mesh).unwrap();
        let ones = vec![1.0; k.dim()];
        let kv = k.mul_vec(&ones);
        assert!(kv.iter().all(|v| v.abs() < 1e-12));
        assert!(k.is_symmetric(0.0) && m.is_symmetric(0.0));
        assert!((m.total() - mesh.area()).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_mass_is_hyperbolic_area() {
        for rho in [0.5, 1.0, 2.0] {
            let mesh = mesh_domain(&DomainSpec::HyperbolicDisk { rho }, 0.01).unwrap();
            let (_, m) = assemble(&mesh).unwrap();
            let exact = 4.0 * std::f64::consts::PI * (rho / 2.0).sinh().powi(2);
            let rel = (mesh_volume(&m) - exact).abs() / exact;
            assert!(rel < 2e-3, "rho {rho}: {rel}");
        }
    }
}
