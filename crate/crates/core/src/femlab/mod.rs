//! Finite-element machinery: meshing, P1 assembly and the generalized
//! symmetric eigensolver for the discrete Neumann problem.

mod assemble;
mod domain;
mod eigen;
mod mesh;
mod meshgen;
mod sparse;

pub use assemble::{assemble, conformal_density, element_matrices, mesh_volume};
pub use domain::{check_simple_polygon, polygon_area, DomainSpec};
pub use eigen::{
    neumann_spectrum, solve_eigs, solve_eigs_dense, solve_eigs_subspace, Eigenpairs, Spectrum, DENSE_LIMIT,
    RESIDUAL_TOL,
};
pub use mesh::{Mode, TriMesh, DISK_LIMIT};
pub use meshgen::{hyperbolic_boundary, mesh_domain, MAX_VERTICES};
pub use sparse::{reverse_cuthill_mckee, CsrMatrix, EnvelopeCholesky};
