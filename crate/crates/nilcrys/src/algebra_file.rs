//! Algebra files and catalog lookup.
//!
//! ```json
//! {"name": "h3", "dim": 3, "class": 2, "brackets": [[1, 2, [[3, 1, 1]]]]}
//! ```
//! Each bracket row `[i, j, terms]` gives `[x_i, x_j] = Σ c·x_k` (1-based) with
//! terms `[k, num, den]` (exact) or `[k, c]` (float).

use std::path::{Path, PathBuf};

use nilcrys_core::scalar::ratio;
use nilcrys_core::{catalog, LieAlgebra};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CATALOG_ENV: &str = "NILCRYS_CATALOG";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Exact(usize, i64, i64),
    Float(usize, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    pub brackets: Vec<(usize, usize, Vec<Term>)>,
}

impl AlgebraFile {
    /// Builds the algebra without checking Jacobi or nilpotency.
    pub fn build(&self) -> CliResult<LieAlgebra> {
        let index = |i: usize| {
            if i == 0 || i > self.dim {
                Err(CliError::Input(format!("basis index {i} outside 1..={}", self.dim)))
            } else {
                Ok(i - 1)
            }
        };
        let exact = self.brackets.iter().all(|(_, _, ts)| ts.iter().all(|t| matches!(t, Term::Exact(..))));
        let mut rat = Vec::new();
        let mut flt = Vec::new();
        for (i, j, terms) in &self.brackets {
            let (i, j) = (index(*i)?, index(*j)?);
            for t in terms {
                match *t {
                    Term::Exact(_, _, 0) => return Err(CliError::Input("zero denominator".into())),
                    Term::Exact(k, n, d) => {
                        rat.push((i, j, index(k)?, ratio(n, d)));
                        flt.push((i, j, index(k)?, n as f64 / d as f64));
                    }
                    Term::Float(k, c) => flt.push((i, j, index(k)?, c)),
                }
            }
        }
        let name = self.name.as_deref();
        Ok(if exact { LieAlgebra::from_exact(self.dim, name, rat)? } else { LieAlgebra::from_float(self.dim, name, flt)? })
    }

    /// The file form of a built-in catalog entry.
    pub fn from_entry(e: &catalog::Entry) -> Self {
        AlgebraFile {
            name: Some(e.name.to_string()),
            dim: e.dim,
            class: Some(e.class),
            brackets: e.brackets.iter().map(|&(i, j, k)| (i, j, vec![Term::Exact(k, 1, 1)])).collect(),
        }
    }
}

pub fn read_algebra_file(path: &Path) -> CliResult<AlgebraFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Directory named by `NILCRYS_CATALOG`, if set.
pub fn catalog_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from)
}

/// A name is looked up in the catalog directory when one is configured and in
/// the built-in table otherwise; arguments ending in `.json` are file paths.
/// The result is unchecked.
pub fn load_unchecked(arg: &str) -> CliResult<(AlgebraFile, LieAlgebra)> {
    let file = if arg.ends_with(".json") {
        read_algebra_file(Path::new(arg))?
    } else if let Some(dir) = catalog_dir() {
        let path = dir.join(format!("{arg}.json"));
        if !path.exists() {
            return Err(CliError::Input(format!("unknown catalog entry `{arg}` in {}", dir.display())));
        }
        read_algebra_file(&path)?
    } else {
        let entry = catalog::ENTRIES
            .iter()
            .find(|e| e.name == arg)
            .ok_or_else(|| CliError::Input(format!("unknown catalog entry `{arg}`")))?;
        AlgebraFile::from_entry(entry)
    };
    let alg = file.build()?;
    Ok((file, alg))
}

/// Loads and validates: Jacobi identity, nilpotency and, when recorded, the class.
pub fn load(arg: &str) -> CliResult<LieAlgebra> {
    let (file, alg) = load_unchecked(arg)?;
    let jac = alg.verify_jacobi();
    if !jac.is_empty() {
        return Err(CliError::Input(format!("{arg}: Jacobi identity fails on {} triples", jac.violations.len())));
    }
    let class = alg.nilpotency_class().map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    if let Some(c) = file.class {
        if c != class {
            return Err(CliError::Input(format!("{arg}: class {class}, file says {c}")));
        }
    }
    Ok(alg)
}
