//! Serialization helpers shared by the algebra, module and pair formats.

use serde::{Deserialize, Serialize};

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::linalg::Matrix;

/// `{"p": 5}` or `"Q"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldJson {
    Prime { p: u64 },
    Named(String),
}

impl FieldJson {
    pub fn from_ctx(ctx: FieldCtx) -> Self {
        match ctx {
            FieldCtx::Prime(p) => FieldJson::Prime { p: p as u64 },
            FieldCtx::Rationals => FieldJson::Named("Q".to_string()),
        }
    }

    pub fn to_ctx(&self) -> Result<FieldCtx, FieldError> {
        match self {
            FieldJson::Prime { p } => FieldCtx::prime(*p),
            FieldJson::Named(s) if s == "Q" => Ok(FieldCtx::Rationals),
            FieldJson::Named(s) => Err(FieldError::Parse(s.clone())),
        }
    }
}

/// Sparse vector as `[[index, "scalar"], ...]`.
pub type SparseJson = Vec<(usize, String)>;

pub fn sparse_to_json(v: &[(usize, Scalar)]) -> SparseJson {
    v.iter().map(|(k, c)| (*k, c.to_string())).collect()
}

pub fn sparse_from_json(ctx: FieldCtx, v: &SparseJson) -> Result<Vec<(usize, Scalar)>, FieldError> {
    v.iter().map(|(k, s)| Ok((*k, ctx.parse(s)?))).collect()
}

/// Dense matrix as a list of rows of decimal strings.
pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn matrix_from_json(ctx: FieldCtx, rows: &[Vec<String>], cols: usize) -> Result<Matrix, String> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Matrix::from_rows(ctx, cols, parsed).map_err(|e| e.to_string())
}
