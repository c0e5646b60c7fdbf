//! Named families with integer parameters, as used by the CLI and census.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::brj::{run_brj, BrjOptions};
use super::d21::{d21, D21Params};
use super::matrix_algebras::{gl, periplectic, periplectic_derived, pgl, pq, psl, psq, queer, sl, spo};
use super::sl2_family::sl2_symn_pair;
use super::ConstructionError;
use crate::field::FieldCtx;
use crate::superalg::LieSuperalgebra;

pub const FAMILY_NAMES: [&str; 13] =
    ["gl", "sl", "pgl", "psl", "spo", "p", "p_derived", "q", "pq", "psq", "d21", "sl2_symn", "brj"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Gl { m: usize, n: usize },
    Sl { m: usize, n: usize },
    Pgl { m: usize, n: usize },
    Psl { m: usize, n: usize },
    Spo { m: usize, odd: usize },
    #[serde(rename = "p")]
    Periplectic { n: usize },
    #[serde(rename = "p_derived")]
    PeriplecticDerived { n: usize },
    #[serde(rename = "q")]
    Queer { n: usize },
    Pq { n: usize },
    Psq { n: usize },
    D21 { a1: i64, a2: i64, a3: i64 },
    Sl2Symn { n: usize, a: i64 },
    Brj,
}

fn size(params: &BTreeMap<String, i64>, key: &str) -> Result<usize, ConstructionError> {
    let v = *params.get(key).ok_or_else(|| ConstructionError::InvalidParameter(format!("missing parameter {key}")))?;
    usize::try_from(v).map_err(|_| ConstructionError::InvalidParameter(format!("{key} must be non-negative")))
}

fn int(params: &BTreeMap<String, i64>, key: &str, default: Option<i64>) -> Result<i64, ConstructionError> {
    params
        .get(key)
        .copied()
        .or(default)
        .ok_or_else(|| ConstructionError::InvalidParameter(format!("missing parameter {key}")))
}

impl FamilySpec {
    /// Parameter keys accepted by each family.
    pub fn keys(name: &str) -> Option<&'static [&'static str]> {
        Some(match name {
            "gl" | "sl" | "pgl" | "psl" => &["m", "n"],
            "spo" => &["m", "odd"],
            "p" | "p_derived" | "q" | "pq" | "psq" => &["n"],
            "d21" => &["a1", "a2", "a3"],
            "sl2_symn" => &["n", "a"],
            "brj" => &[],
            _ => return None,
        })
    }

    pub fn from_params(name: &str, params: &BTreeMap<String, i64>) -> Result<Self, ConstructionError> {
        let keys = Self::keys(name).ok_or_else(|| ConstructionError::InvalidParameter(format!("unknown family {name}")))?;
        if let Some(k) = params.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(ConstructionError::InvalidParameter(format!("{name} takes no parameter {k}")));
        }
        let mn = || Ok::<_, ConstructionError>((size(params, "m")?, size(params, "n")?));
        Ok(match name {
            "gl" => mn().map(|(m, n)| FamilySpec::Gl { m, n })?,
            "sl" => mn().map(|(m, n)| FamilySpec::Sl { m, n })?,
            "pgl" => mn().map(|(m, n)| FamilySpec::Pgl { m, n })?,
            "psl" => mn().map(|(m, n)| FamilySpec::Psl { m, n })?,
            "spo" => FamilySpec::Spo { m: size(params, "m")?, odd: size(params, "odd")? },
            "p" => FamilySpec::Periplectic { n: size(params, "n")? },
            "p_derived" => FamilySpec::PeriplecticDerived { n: size(params, "n")? },
            "q" => FamilySpec::Queer { n: size(params, "n")? },
            "pq" => FamilySpec::Pq { n: size(params, "n")? },
            "psq" => FamilySpec::Psq { n: size(params, "n")? },
            "d21" => FamilySpec::D21 { a1: int(params, "a1", None)?, a2: int(params, "a2", None)?, a3: int(params, "a3", None)? },
            "sl2_symn" => FamilySpec::Sl2Symn { n: size(params, "n")?, a: int(params, "a", Some(1))? },
            _ => FamilySpec::Brj,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Gl { .. } => "gl",
            FamilySpec::Sl { .. } => "sl",
            FamilySpec::Pgl { .. } => "pgl",
            FamilySpec::Psl { .. } => "psl",
            FamilySpec::Spo { .. } => "spo",
            FamilySpec::Periplectic { .. } => "p",
            FamilySpec::PeriplecticDerived { .. } => "p_derived",
            FamilySpec::Queer { .. } => "q",
            FamilySpec::Pq { .. } => "pq",
            FamilySpec::Psq { .. } => "psq",
            FamilySpec::D21 { .. } => "d21",
            FamilySpec::Sl2Symn { .. } => "sl2_symn",
            FamilySpec::Brj => "brj",
        }
    }

    pub fn params(&self) -> BTreeMap<String, i64> {
        let v: Vec<(&str, i64)> = match *self {
            FamilySpec::Gl { m, n } | FamilySpec::Sl { m, n } | FamilySpec::Pgl { m, n } | FamilySpec::Psl { m, n } => {
                vec![("m", m as i64), ("n", n as i64)]
            }
            FamilySpec::Spo { m, odd } => vec![("m", m as i64), ("odd", odd as i64)],
            FamilySpec::Periplectic { n }
            | FamilySpec::PeriplecticDerived { n }
            | FamilySpec::Queer { n }
            | FamilySpec::Pq { n }
            | FamilySpec::Psq { n } => vec![("n", n as i64)],
            FamilySpec::D21 { a1, a2, a3 } => vec![("a1", a1), ("a2", a2), ("a3", a3)],
            FamilySpec::Sl2Symn { n, a } => vec![("n", n as i64), ("a", a)],
            FamilySpec::Brj => vec![],
        };
        v.into_iter().map(|(k, x)| (k.to_string(), x)).collect()
    }

    /// `name(k=v,...)` with keys in their declared order.
    pub fn display(&self) -> String {
        let p = self.params();
        let keys = Self::keys(self.name()).unwrap_or(&[]);
        let inner: Vec<String> = keys.iter().map(|k| format!("{k}={}", p[*k])).collect();
        format!("{}({})", self.name(), inner.join(","))
    }

    /// Fully validated algebra over `ctx`.
    pub fn build(&self, ctx: FieldCtx) -> Result<LieSuperalgebra, ConstructionError> {
        match *self {
            FamilySpec::Gl { m, n } => gl(m, n, ctx),
            FamilySpec::Sl { m, n } => sl(m, n, ctx),
            FamilySpec::Pgl { m, n } => pgl(m, n, ctx),
            FamilySpec::Psl { m, n } => psl(m, n, ctx),
            FamilySpec::Spo { m, odd } => spo(m, odd, ctx),
            FamilySpec::Periplectic { n } => periplectic(n, ctx),
            FamilySpec::PeriplecticDerived { n } => periplectic_derived(n, ctx),
            FamilySpec::Queer { n } => queer(n, ctx),
            FamilySpec::Pq { n } => pq(n, ctx),
            FamilySpec::Psq { n } => psq(n, ctx),
            FamilySpec::D21 { a1, a2, a3 } => d21(&D21Params::from_i64(ctx, [a1, a2, a3]), ctx),
            FamilySpec::Sl2Symn { n, a } => Ok(sl2_symn_pair(n, &ctx.from_i64(a), ctx)?.total().clone()),
            FamilySpec::Brj => {
                let out = run_brj(BrjOptions { p: ctx.characteristic() as u64, skip_simplicity: true, seed: 0 });
                match out.pair {
                    Some(pair) => Ok(pair.total().clone()),
                    None => Err(ConstructionError::PipelineCheck {
                        stage: "brj".into(),
                        detail: out.report.halted.unwrap_or_else(|| "no pair".into()),
                    }),
                }
            }
        }
    }
}
