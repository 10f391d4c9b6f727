use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use super::domain::DomainSpec;
use super::mesh::{Mode, TriMesh};
use super::meshgen::mesh_domain;
use super::sparse::{CsrMatrix, EnvelopeCholesky};
use crate::error::{Error, Result};

/// Problems up to this size are solved densely.
pub const DENSE_LIMIT: usize = 400;

/// Relative residual target `‖Kv − μMv‖ ≤ RESIDUAL_TOL · ‖Kv‖`.
pub const RESIDUAL_TOL: f64 = 1e-9;

const MAX_ITERATIONS: usize = 1000;
const SEED: u64 = 0x5eed_0f4e_0a11;

/// Lowest eigenpairs of `K v = μ M v`, ascending, with M-orthonormal
/// eigenvectors whose largest-magnitude entry is positive.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖K v − μ M v‖` for each pair.
    pub residuals: Vec<f64>,
}

/// Discrete Neumann spectrum of a mesh.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    /// `μ_0 ≤ μ_1 ≤ …`; `μ_0` is the numerically zero kernel eigenvalue.
    pub eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residuals: Vec<f64>,
    pub mesh_h: f64,
    /// Longest edge of the mesh actually used.
    pub max_edge: f64,
    pub vertices: usize,
    pub mode: Mode,
}

fn residual_floor(k: &CsrMatrix, v: &[f64]) -> f64 {
    // the kernel pair has K v = 0; measure it against the operator scale
    1e-6 * k.norm_inf() * norm(v)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(k: &CsrMatrix, m: &CsrMatrix, mu: f64, v: &[f64]) -> (f64, f64) {
    let kv = k.mul_vec(v);
    let mv = m.mul_vec(v);
    let r = kv
        .iter()
        .zip(&mv)
        .map(|(a, b)| (a - mu * b).powi(2))
        .sum::<f64>()
        .sqrt();
    (r, norm(&kv))
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        // first entry of maximal magnitude decides
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn finish(k: &CsrMatrix, m: &CsrMatrix, values: Vec<f64>, mut vectors: Vec<Vec<f64>>) -> Eigenpairs {
    let mut residuals = Vec::with_capacity(values.len());
    for (mu, v) in values.iter().zip(vectors.iter_mut()) {
        fix_sign(v);
        residuals.push(residual(k, m, *mu, v).0);
    }
    Eigenpairs {
        values,
        vectors,
        residuals,
    }
}

fn converged(k: &CsrMatrix, m: &CsrMatrix, mu: f64, v: &[f64]) -> (bool, f64) {
    let (r, kv) = residual(k, m, mu, v);
    (r <= RESIDUAL_TOL * kv.max(residual_floor(k, v)), r)
}

/// Dense generalized solve through the Cholesky factor of `M`.
pub fn solve_eigs_dense(k: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<Eigenpairs> {
    let n = k.dim();
    let count = count.min(n);
    let chol = m
        .to_dense()
        .cholesky()
        .ok_or_else(|| Error::Mesh("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Mesh("mass matrix is singular".into()))?;
    let c = &linv * k.to_dense() * linv.transpose();
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &j in idx.iter().take(count) {
        values.push(eig.eigenvalues[j]);
        let y = eig.eigenvectors.column(j).into_owned();
        let v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Mesh("mass factor is singular".into()))?;
        vectors.push(v.iter().copied().collect());
    }
    Ok(finish(k, m, values, vectors))
}

/// M-orthonormalises the columns in place (two passes of classical
/// Gram–Schmidt). Columns that collapse are replaced by fresh random ones.
fn m_orthonormalise(m: &CsrMatrix, cols: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    let n = m.dim();
    for j in 0..cols.len() {
        for attempt in 0..4 {
            let before = m.bilinear(&cols[j], &cols[j]).sqrt();
            for _ in 0..2 {
                let w = m.mul_vec(&cols[j]);
                let coeffs: Vec<f64> = cols[..j].iter().map(|q| dot(q, &w)).collect();
                let (done, rest) = cols.split_at_mut(j);
                for (q, c) in done.iter().zip(coeffs) {
                    for (x, y) in rest[0].iter_mut().zip(q) {
                        *x -= c * y;
                    }
                }
            }
            let after = m.bilinear(&cols[j], &cols[j]).sqrt();
            if after > 1e-10 * before && after > 0.0 {
                cols[j].iter_mut().for_each(|x| *x /= after);
                break;
            }
            assert!(attempt < 3, "cannot extend the M-orthonormal basis");
            cols[j] = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        }
    }
}

/// Shift-inverted block subspace iteration with Rayleigh–Ritz projection.
pub fn solve_eigs_subspace(k: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<Eigenpairs> {
    let n = k.dim();
    let p = (2 * count + 6).min(n);
    let sigma = k.trace() / m.trace() / n as f64;
    let factor = EnvelopeCholesky::new(&k.add_scaled(sigma, m))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut x: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            if j == 0 {
                vec![1.0; n]
            } else {
                (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
            }
        })
        .collect();
    m_orthonormalise(m, &mut x, &mut rng);

    let mut worst = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut y: Vec<Vec<f64>> = x.iter().map(|v| factor.solve(&m.mul_vec(v))).collect();
        m_orthonormalise(m, &mut y, &mut rng);
        let ky: Vec<Vec<f64>> = y.iter().map(|v| k.mul_vec(v)).collect();
        let mut a = DMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..=i {
                let v = 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i]));
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(a);
        let mut idx: Vec<usize> = (0..p).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        x = idx
            .iter()
            .map(|&c| {
                let s = eig.eigenvectors.column(c);
                let mut v = vec![0.0; n];
                for (yi, &w) in y.iter().zip(s.iter()) {
                    for (out, val) in v.iter_mut().zip(yi) {
                        *out += w * val;
                    }
                }
                v
            })
            .collect();
        let values: Vec<f64> = idx.iter().map(|&c| eig.eigenvalues[c]).collect();

        worst = 0.0;
        let mut all = true;
        for j in 0..count {
            let (ok, r) = converged(k, m, values[j], &x[j]);
            worst = worst.max(r);
            all &= ok;
        }
        if all {
            let vectors = x.into_iter().take(count).collect();
            return Ok(finish(k, m, values[..count].to_vec(), vectors));
        }
    }
    Err(Error::Convergence {
        method: "subspace iteration",
        residual: worst,
    })
}

/// The `count` smallest eigenpairs of `K v = μ M v`.
pub fn solve_eigs(k: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<Eigenpairs> {
    if count == 0 {
        return Err(Error::Domain("at least one eigenpair must be requested".into()));
    }
    if k.dim() != m.dim() || k.dim() == 0 {
        return Err(Error::Domain(
            "stiffness and mass must be square and of equal size".into(),
        ));
    }
    if k.dim() <= DENSE_LIMIT || 2 * count + 6 >= k.dim() {
        solve_eigs_dense(k, m, count)
    } else {
        solve_eigs_subspace(k, m, count)
    }
}

impl Spectrum {
    /// Spectrum of `mesh`: the kernel eigenvalue and the next `k`.
    pub fn of_mesh(mesh: &TriMesh, k: usize, keep_vectors: bool) -> Result<Self> {
        let (stiff, mass) = assemble(mesh)?;
        let pairs = solve_eigs(&stiff, &mass, k + 1)?;
        Ok(Self {
            eigenvalues: pairs.values,
            eigenvectors: keep_vectors.then_some(pairs.vectors),
            residuals: pairs.residuals,
            mesh_h: mesh.h(),
            max_edge: mesh.max_edge_length(),
            vertices: mesh.vertices().len(),
            mode: mesh.mode(),
        })
    }

    /// `μ_1`, the first non-trivial eigenvalue.
    pub fn mu1(&self) -> f64 {
        self.eigenvalues[1]
    }
}

/// Meshes `spec` at size `h` and returns `μ_0, …, μ_k`.
pub fn neumann_spectrum(spec: &DomainSpec, h: f64, k: usize) -> Result<Spectrum> {
    Spectrum::of_mesh(&mesh_domain(spec, h)?, k, false)
}
