//! Exact residue calculus for Hamiltonian torus actions with isolated fixed
//! points.
//!
//! Given fixed-point data (moment images, isotropy weights and the one-skeleton),
//! the crate evaluates integrals over symplectic reductions through iterated
//! multivariate residues, computes the kernel of the Kirwan map at a regular
//! value degree by degree, and compares those kernels across the chambers of the
//! moment polytope.

pub mod algebra;
pub mod chambers;
pub mod error;
pub mod generators;
pub mod kirwan;
pub mod model;
pub mod residues;
pub mod rng;
pub mod wallcross;

pub use algebra::{LinearForm, Polynomial, Rational, Scalar};
pub use chambers::{ChamberArrangement, WallSegment};
pub use error::{Error, Result};
pub use kirwan::{EquivariantClass, IdealFingerprint};
pub use model::{FixedPoint, Space};
