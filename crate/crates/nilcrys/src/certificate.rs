//! Certificate files for the demonstrator.

use std::path::Path;

use nilcrys_core::obstruction::{CertificateData, DecayFit, ObstructionCertificate, Record};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::numbers::{motion_to_json, vector_to_json};

pub const FORMAT: &str = "nilcrys-certificate/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordJson {
    pub i: usize,
    pub s: i64,
    pub t: i64,
    pub d1: f64,
    pub d2: f64,
    pub offset1: f64,
    pub offset2: f64,
    pub iteration_residual: f64,
    pub direct_residual: Option<f64>,
    pub x_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFitJson {
    pub b_hat: f64,
    pub c_hat: f64,
    pub poly_degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub format: String,
    /// Algebra, motions, base points, `x₀`, `V` and the case-study inputs.
    pub pair_meta: Value,
    pub lambda1: f64,
    pub lambda2: f64,
    pub r0: f64,
    pub r0_2: f64,
    #[serde(rename = "M1")]
    pub m1: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
    pub records: Vec<RecordJson>,
    pub decay_fit: Option<DecayFitJson>,
    pub inverted_g2: bool,
}

impl CertificateJson {
    pub fn new(c: &ObstructionCertificate, intersection_dim: usize, inputs: Value) -> Self {
        let pair_meta = serde_json::json!({
            "algebra": c.algebra,
            "g1": motion_to_json(&c.g1),
            "g2": motion_to_json(&c.g2),
            "m1": vector_to_json(c.m1.log()),
            "m2": vector_to_json(c.m2.log()),
            "x0": vector_to_json(c.x0.log()),
            "v": vector_to_json(&c.v),
            "intersection_dim": intersection_dim,
            "inputs": inputs,
        });
        CertificateJson {
            format: FORMAT.into(),
            pair_meta,
            lambda1: c.lambda1,
            lambda2: c.lambda2,
            r0: c.r0,
            r0_2: c.r0_2,
            m1: c.bound1,
            m2: c.bound2,
            records: c
                .records
                .iter()
                .map(|r| RecordJson {
                    i: r.i,
                    s: r.s,
                    t: r.t,
                    d1: r.d1,
                    d2: r.d2,
                    offset1: r.offset1,
                    offset2: r.offset2,
                    iteration_residual: r.iteration_residual,
                    direct_residual: r.direct_residual,
                    x_norm: r.x_norm,
                })
                .collect(),
            decay_fit: c.decay_fit.map(|f| DecayFitJson { b_hat: f.b_hat, c_hat: f.c_hat, poly_degree: f.poly_degree }),
            inverted_g2: c.inverted_g2,
        }
    }

    /// The numbers the invariant checks read.
    pub fn data(&self) -> CertificateData {
        CertificateData {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            r0: self.r0,
            r0_2: self.r0_2,
            bound1: self.m1,
            bound2: self.m2,
            records: self
                .records
                .iter()
                .map(|r| Record {
                    i: r.i,
                    s: r.s,
                    t: r.t,
                    d1: r.d1,
                    d2: r.d2,
                    offset1: r.offset1,
                    offset2: r.offset2,
                    iteration_residual: r.iteration_residual,
                    direct_residual: r.direct_residual,
                    x_norm: r.x_norm,
                })
                .collect(),
            decay_fit: self.decay_fit.map(|f| DecayFit { b_hat: f.b_hat, c_hat: f.c_hat, poly_degree: f.poly_degree }),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let c: CertificateJson = serde_json::from_str(text)?;
        if c.format != FORMAT {
            return Err(CliError::Input(format!("unsupported certificate format `{}`", c.format)));
        }
        Ok(c)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_string_pretty() + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}
