//! Nilpotent Lie algebras of dimension at most 5.
//!
//! Indecomposable five-dimensional entries use the usual g5_k labels; bases are
//! `x1 … xn` (stored 0-based). Every entry is checked against the Jacobi
//! identity and its recorded nilpotency class when built.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::ratio;

/// A catalog row: name, dimension, class, and 1-based brackets `[x_i, x_j] = x_k`.
pub struct Entry {
    pub name: &'static str,
    pub dim: usize,
    pub class: usize,
    pub brackets: &'static [(usize, usize, usize)],
}

pub const ENTRIES: &[Entry] = &[
    Entry { name: "abelian_1", dim: 1, class: 1, brackets: &[] },
    Entry { name: "abelian_2", dim: 2, class: 1, brackets: &[] },
    Entry { name: "abelian_3", dim: 3, class: 1, brackets: &[] },
    Entry { name: "h3", dim: 3, class: 2, brackets: &[(1, 2, 3)] },
    Entry { name: "abelian_4", dim: 4, class: 1, brackets: &[] },
    Entry { name: "h3+R", dim: 4, class: 2, brackets: &[(1, 2, 3)] },
    Entry { name: "n4", dim: 4, class: 3, brackets: &[(1, 2, 3), (1, 3, 4)] },
    Entry { name: "abelian_5", dim: 5, class: 1, brackets: &[] },
    Entry { name: "h3+R2", dim: 5, class: 2, brackets: &[(1, 2, 3)] },
    Entry { name: "n4+R", dim: 5, class: 3, brackets: &[(1, 2, 3), (1, 3, 4)] },
    Entry { name: "g5_1", dim: 5, class: 2, brackets: &[(1, 2, 5), (3, 4, 5)] },
    Entry { name: "g5_2", dim: 5, class: 2, brackets: &[(1, 2, 4), (1, 3, 5)] },
    Entry { name: "g5_3", dim: 5, class: 3, brackets: &[(1, 2, 4), (1, 4, 5), (2, 3, 5)] },
    Entry { name: "g5_4", dim: 5, class: 3, brackets: &[(1, 2, 3), (1, 3, 4), (2, 3, 5)] },
    Entry { name: "g5_5", dim: 5, class: 4, brackets: &[(1, 2, 3), (1, 3, 4), (1, 4, 5)] },
    Entry { name: "g5_6", dim: 5, class: 4, brackets: &[(1, 2, 3), (1, 3, 4), (1, 4, 5), (2, 3, 5)] },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

/// Builds and validates an entry; `validate` fails on Jacobi or class mismatch.
pub fn build(entry: &Entry) -> Result<LieAlgebra> {
    let brackets = entry
        .brackets
        .iter()
        .map(|&(i, j, k)| (i - 1, j - 1, k - 1, ratio(1, 1)))
        .collect();
    let alg = LieAlgebra::from_exact(entry.dim, Some(entry.name), brackets)?;
    validate(&alg, entry.class)?;
    Ok(alg)
}

/// Load-time gate: Jacobi identity, nilpotency, expected class, nonzero center.
pub fn validate(alg: &LieAlgebra, class: usize) -> Result<()> {
    let label = || String::from(alg.name().unwrap_or("algebra"));
    if !alg.verify_jacobi().is_empty() {
        return Err(Error::InvalidStructure(alloc::format!("{}: Jacobi identity fails", label())));
    }
    let c = alg.nilpotency_class()?;
    if c != class {
        return Err(Error::InvalidStructure(alloc::format!("{}: class {c}, expected {class}", label())));
    }
    if alg.center().dim() == 0 {
        return Err(Error::InvalidStructure(alloc::format!("{}: trivial center", label())));
    }
    Ok(())
}

pub fn catalog(name: &str) -> Result<LieAlgebra> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.into()))
        .and_then(build)
}

pub fn all() -> Vec<LieAlgebra> {
    ENTRIES.iter().map(|e| build(e).expect("built-in catalog entry is valid")).collect()
}

pub fn h3() -> LieAlgebra {
    catalog("h3").expect("built-in")
}

pub fn n4() -> LieAlgebra {
    catalog("n4").expect("built-in")
}

pub fn g5_4() -> LieAlgebra {
    catalog("g5_4").expect("built-in")
}
