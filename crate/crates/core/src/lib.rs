//! Neumann (free-membrane) eigenvalues of planar Euclidean and hyperbolic
//! domains, together with the isoperimetric machinery used to check them.
//!
//! The crate is organised by subsystem:
//!
//! * [`specfun`] – Bessel functions of the first kind, the first critical
//!   point `p_{n/2,1}` of `t^{1-n/2} J_{n/2}(t)` and the radial model profile
//!   of the ball.
//! * [`femlab`] – domain meshing, P1 assembly (with the Poincaré-disk
//!   conformal weight for hyperbolic domains) and the generalized symmetric
//!   eigensolver.
//! * [`asymmetry`] – Fraenkel asymmetry of planar meshes.
//! * [`bounds`] – ball-comparison bounds, stability constants, the
//!   Weinberger center and the radial rearrangement comparison.
//! * [`hyperball`] – geodesic balls of hyperbolic space: shooting for the
//!   first Neumann eigenvalue, volumes and radius inversion.
//!
//! [`quadrature`] and [`optim`] hold the small numerical kernels the others
//! share.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymmetry;
pub mod bounds;
mod error;
pub mod femlab;
pub mod hyperball;
pub mod json17;
pub mod optim;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};

/// A point of the plane.
pub type Point = [f64; 2];
