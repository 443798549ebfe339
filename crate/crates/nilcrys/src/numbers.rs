//! Scalars, vectors and matrices in JSON.
//!
//! A scalar is a number or a `[num, den]` pair; matrices are row-major arrays
//! of rows. Arguments may be given inline (text starting with `[` or `{`) or
//! as a path to a JSON file.

use std::path::Path;

use nalgebra::{DMatrix, DVector, Matrix2};
use nilcrys_core::affine::AffineMotion;
use nilcrys_core::automorphism::check_automorphism;
use nilcrys_core::{GroupPoint, LieAlgebra};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Float(f64),
    Ratio(i64, i64),
}

impl Scalar {
    pub fn value(self) -> CliResult<f64> {
        match self {
            Scalar::Float(x) => Ok(x),
            Scalar::Ratio(_, 0) => Err(CliError::Input("zero denominator".into())),
            Scalar::Ratio(n, d) => Ok(n as f64 / d as f64),
        }
    }
}

/// Inline JSON or the contents of a file.
pub fn read_json_arg(arg: &str) -> CliResult<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

pub fn vector_from_json(v: &Value) -> CliResult<DVector<f64>> {
    let xs: Vec<Scalar> = serde_json::from_value(v.clone())?;
    let xs = xs.into_iter().map(Scalar::value).collect::<CliResult<Vec<_>>>()?;
    Ok(DVector::from_vec(xs))
}

pub fn matrix_from_json(v: &Value) -> CliResult<DMatrix<f64>> {
    let rows: Vec<Vec<Scalar>> = serde_json::from_value(v.clone())?;
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Input("matrix rows must be non-empty and of equal length".into()));
    }
    let mut out = DMatrix::zeros(n, m);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            out[(i, j)] = x.value()?;
        }
    }
    Ok(out)
}

pub fn matrix2_from_json(v: &Value) -> CliResult<Matrix2<f64>> {
    let m = matrix_from_json(v)?;
    if m.shape() != (2, 2) {
        return Err(CliError::Input(format!("expected a 2x2 matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

pub fn matrix_to_json(m: &DMatrix<f64>) -> Value {
    Value::from((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>()).collect::<Vec<_>>())
}

pub fn vector_to_json(v: &DVector<f64>) -> Value {
    Value::from(v.iter().copied().collect::<Vec<f64>>())
}

/// A motion `{"translation": [...], "matrix": [[...]]}`; the translation is `log n`.
pub fn motion_from_json(v: &Value, alg: &LieAlgebra) -> CliResult<AffineMotion> {
    let trans = v.get("translation").ok_or_else(|| CliError::Input("motion needs `translation`".into()))?;
    let matrix = v.get("matrix").ok_or_else(|| CliError::Input("motion needs `matrix`".into()))?;
    let trans = vector_from_json(trans)?;
    let matrix = matrix_from_json(matrix)?;
    if trans.len() != alg.dim() || matrix.shape() != (alg.dim(), alg.dim()) {
        return Err(CliError::Input(format!("motion does not have dimension {}", alg.dim())));
    }
    let auto = check_automorphism(matrix, alg)?;
    Ok(AffineMotion::new(GroupPoint::from_log(trans), auto)?)
}

pub fn motion_to_json(g: &AffineMotion) -> Value {
    serde_json::json!({
        "translation": vector_to_json(g.trans.log()),
        "matrix": matrix_to_json(g.auto.matrix()),
    })
}
