//! Computation with nilpotent Lie algebras, their simply connected groups in
//! logarithmic coordinates, and affine motions of those groups.
//!
//! The crate is `no_std` (with `alloc`). Structure constants, brackets and the
//! group law can be evaluated exactly over the rationals; spectra, subspaces
//! and distances are computed in `f64`.

#![no_std]

extern crate alloc;

pub mod affine;
pub mod automorphism;
pub mod catalog;
pub mod dynamics;
mod error;
pub mod g54;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod obstruction;
pub mod scalar;
pub mod splitting;
pub mod subspace;

pub use error::{Error, Result};
pub use group::{GroupPoint, NilpotentGroup};
pub use lie::LieAlgebra;
pub use scalar::Rational;
pub use subspace::Subspace;
