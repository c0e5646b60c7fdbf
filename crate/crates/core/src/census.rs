//! Batch verdicts over parameter grids. Rows are computed in parallel and
//! sorted by `(family, params, p)`, so the output depends only on the grid
//! and the seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{pq_pair, run_brj, sl2_symn_pair, BrjOptions, ConstructionError, FamilySpec};
use crate::field::FieldCtx;
use crate::hcpair::HCPair;
use crate::superalg::{LieSuperalgebra, SDim, SimplicityOptions};

pub const THREADS_ENV: &str = "SUPERLIE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Simple,
    Solvable,
    Split,
    Sas,
    Center,
    Derived,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Simple, Check::Solvable, Check::Split, Check::Sas, Check::Center, Check::Derived];

    pub fn name(self) -> &'static str {
        match self {
            Check::Simple => "simple",
            Check::Solvable => "solvable",
            Check::Split => "split",
            Check::Sas => "sas",
            Check::Center => "center",
            Check::Derived => "derived",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Verdict columns this check fills.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Check::Simple => &["simple"],
            Check::Solvable => &["solvable"],
            Check::Split => &["split"],
            Check::Sas => &["sas_cond1", "sas_cond2"],
            Check::Center => &["center_dim"],
            Check::Derived => &["derived_codim"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CensusJob {
    pub spec: FamilySpec,
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub family: String,
    pub params: BTreeMap<String, i64>,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<(usize, usize)>,
    pub verdicts: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CensusRow {
    pub fn verdict(&self, key: &str) -> Option<&str> {
        self.verdicts.get(key).map(String::as_str)
    }

    fn sort_key(&self) -> (String, Vec<(String, i64)>, u64) {
        (self.family.clone(), self.params.clone().into_iter().collect(), self.p)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusConfig {
    pub seed: u64,
    /// Worker count; `None` reads `SUPERLIE_THREADS`, falling back to rayon's default.
    pub threads: Option<usize>,
}

pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

const NA: &str = "n/a";

fn build_pair(spec: &FamilySpec, ctx: FieldCtx) -> Option<Result<HCPair, ConstructionError>> {
    match *spec {
        FamilySpec::Sl2Symn { n, a } => Some(sl2_symn_pair(n, &ctx.from_i64(a), ctx)),
        FamilySpec::Pq { n } => Some(pq_pair(n, ctx)),
        FamilySpec::Brj => {
            let out = run_brj(BrjOptions { p: ctx.characteristic() as u64, skip_simplicity: true, seed: 0 });
            Some(out.pair.ok_or_else(|| ConstructionError::PipelineCheck {
                stage: "brj".into(),
                detail: out.report.halted.unwrap_or_default(),
            }))
        }
        _ => None,
    }
}

fn sdim(d: SDim) -> String {
    d.to_string()
}

fn evaluate(job: &CensusJob, checks: &[Check], seed: u64) -> CensusRow {
    let mut row = CensusRow {
        family: job.spec.name().to_string(),
        params: job.spec.params(),
        p: job.p,
        dims: None,
        verdicts: BTreeMap::new(),
        error: None,
    };
    let result = (|| -> Result<(), ConstructionError> {
        let ctx = FieldCtx::from_characteristic(job.p)?;
        let pair = build_pair(&job.spec, ctx).transpose()?;
        let algebra: LieSuperalgebra = match &pair {
            Some(p) => p.total().clone(),
            None => job.spec.build(ctx)?,
        };
        let d = algebra.dims();
        row.dims = Some((d.even, d.odd));
        for &c in checks {
            match c {
                Check::Simple => {
                    let v = algebra.is_graded_simple(SimplicityOptions { seed, ..SimplicityOptions::default() });
                    row.verdicts.insert("simple".into(), v.summary());
                }
                Check::Solvable => {
                    row.verdicts.insert("solvable".into(), algebra.is_solvable().to_string());
                }
                Check::Split => {
                    let v = pair.as_ref().map_or(NA.to_string(), |p| p.is_split().to_string());
                    row.verdicts.insert("split".into(), v);
                }
                Check::Sas => match &pair {
                    Some(p) => {
                        let r = p.check_sas_conditions()?;
                        row.verdicts.insert("sas_cond1".into(), r.cond1.to_string());
                        row.verdicts.insert("sas_cond2".into(), r.cond2.to_string());
                    }
                    None => {
                        row.verdicts.insert("sas_cond1".into(), NA.into());
                        row.verdicts.insert("sas_cond2".into(), NA.into());
                    }
                },
                Check::Center => {
                    row.verdicts.insert("center_dim".into(), sdim(algebra.center().dims()));
                }
                Check::Derived => {
                    let der = algebra.derived_subalgebra().dims();
                    row.verdicts.insert("derived_codim".into(), sdim(SDim::new(d.even - der.even, d.odd - der.odd)));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
        row.verdicts.clear();
    }
    row
}

/// One row per job, sorted by `(family, params, p)`. Failures are recorded
/// in the row's `error` field and do not stop the run.
pub fn run_census(jobs: &[CensusJob], checks: &[Check], cfg: CensusConfig) -> Vec<CensusRow> {
    let mut checks = checks.to_vec();
    checks.sort();
    checks.dedup();
    let threads = cfg.threads.or_else(threads_from_env);
    let work = || jobs.par_iter().map(|j| evaluate(j, &checks, cfg.seed)).collect::<Vec<_>>();
    let mut rows = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    rows.sort_by_key(CensusRow::sort_key);
    rows
}

pub const TSV_COLUMNS: [&str; 12] = [
    "family",
    "params",
    "p",
    "dims",
    "simple",
    "solvable",
    "split",
    "sas_cond1",
    "sas_cond2",
    "center_dim",
    "derived_codim",
    "error",
];

/// Tab-separated table with a header line; unrequested verdicts are `-`.
pub fn to_tsv(rows: &[CensusRow]) -> String {
    let mut out = TSV_COLUMNS.join("\t");
    out.push('\n');
    for r in rows {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let dims = r.dims.map_or("-".to_string(), |(a, b)| format!("{a}|{b}"));
        let mut fields = vec![r.family.clone(), params.join(";"), r.p.to_string(), dims];
        for col in &TSV_COLUMNS[4..11] {
            fields.push(r.verdicts.get(*col).cloned().unwrap_or_else(|| "-".into()));
        }
        fields.push(r.error.clone().unwrap_or_else(|| "-".into()).replace(['\t', '\n'], " "));
        let _ = writeln!(out, "{}", fields.join("\t"));
    }
    out
}

pub fn to_jsonl(rows: &[CensusRow]) -> String {
    rows.iter().map(|r| serde_json::to_string(r).expect("rows serialize") + "\n").collect()
}

fn jobs(specs: impl IntoIterator<Item = FamilySpec>, primes: &[u64]) -> Vec<CensusJob> {
    specs.into_iter().flat_map(|s| primes.iter().map(move |&p| CensusJob { spec: s.clone(), p })).collect()
}

/// `sl(m|n)` for `1 <= m, n <= 4`, `m + n >= 3`, `p ∈ {3, 5, 7}`, plus
/// `psl(m|n)` wherever `p | m - n`.
pub fn grid_sl() -> Vec<CensusJob> {
    let mut out = Vec::new();
    for m in 1..=4usize {
        for n in 1..=4usize {
            if m + n < 3 {
                continue;
            }
            for p in [3u64, 5, 7] {
                out.push(CensusJob { spec: FamilySpec::Sl { m, n }, p });
                if (m as i64 - n as i64).rem_euclid(p as i64) == 0 {
                    out.push(CensusJob { spec: FamilySpec::Psl { m, n }, p });
                }
            }
        }
    }
    out
}

/// `spo(2|3)`, `spo(4|5)`, `spo(2|4)`, the derived periplectic algebras for
/// `n ∈ {2, 3}` and `psq(n)` for `n ∈ {2, 3, 4}`, over `p ∈ {3, 5, 7}`.
pub fn grid_catalog() -> Vec<CensusJob> {
    let spo = [FamilySpec::Spo { m: 1, odd: 3 }, FamilySpec::Spo { m: 2, odd: 5 }, FamilySpec::Spo { m: 1, odd: 4 }];
    let per = [FamilySpec::PeriplecticDerived { n: 2 }, FamilySpec::PeriplecticDerived { n: 3 }];
    let psq = [FamilySpec::Psq { n: 2 }, FamilySpec::Psq { n: 3 }, FamilySpec::Psq { n: 4 }];
    let mut out = jobs(spo, &[3, 5, 7]);
    out.extend(jobs(per, &[3, 5, 7]));
    out.extend(jobs(psq, &[3, 5, 7]));
    out
}

/// Twenty parameter triples over 𝔽₅: `(α, 1, -1-α)`, `(α, 1, -α)`,
/// `(α, 2, -2-α)` and `(α, 1, 2-α)` for `α ∈ 𝔽₅`.
pub fn grid_d21() -> Vec<CensusJob> {
    let mut specs = Vec::new();
    for a in 0..5i64 {
        let r = |x: i64| x.rem_euclid(5);
        specs.push(FamilySpec::D21 { a1: a, a2: 1, a3: r(-1 - a) });
        specs.push(FamilySpec::D21 { a1: a, a2: 1, a3: r(-a) });
        specs.push(FamilySpec::D21 { a1: a, a2: 2, a3: r(-2 - a) });
        specs.push(FamilySpec::D21 { a1: a, a2: 1, a3: r(2 - a) });
    }
    jobs(specs, &[5])
}

pub const GRID_NAMES: [&str; 4] = ["sl", "catalog", "d21", "all"];

pub fn named_grid(name: &str) -> Option<Vec<CensusJob>> {
    Some(match name {
        "sl" => grid_sl(),
        "catalog" => grid_catalog(),
        "d21" => grid_d21(),
        "all" => {
            let mut g = grid_sl();
            g.extend(grid_catalog());
            g.extend(grid_d21());
            g
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d21_grid_has_twenty_distinct_points() {
        let g = grid_d21();
        let mut s = g.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 20);
        assert!(g.contains(&CensusJob { spec: FamilySpec::D21 { a1: 1, a2: 1, a3: 1 }, p: 5 }));
    }

    #[test]
    fn failed_rows_are_kept() {
        let jobs = vec![
            CensusJob { spec: FamilySpec::D21 { a1: 1, a2: 1, a3: 1 }, p: 5 },
            CensusJob { spec: FamilySpec::Sl { m: 2, n: 1 }, p: 3 },
        ];
        let rows = run_census(&jobs, &[Check::Simple], CensusConfig { seed: 0, threads: Some(2) });
        assert_eq!(rows[0].family, "d21");
        assert!(rows[0].error.is_some());
        assert_eq!(rows[1].verdict("simple"), Some("GradedSimple"));
        let tsv = to_tsv(&rows);
        assert_eq!(tsv.lines().count(), 3);
        assert_eq!(to_jsonl(&rows).lines().count(), 2);
    }

    #[test]
    fn every_requested_column_is_filled() {
        let jobs = vec![CensusJob { spec: FamilySpec::Sl2Symn { n: 3, a: 1 }, p: 3 }];
        let rows = run_census(&jobs, &Check::ALL, CensusConfig::default());
        for c in Check::ALL {
            for col in c.columns() {
                assert!(rows[0].verdicts.contains_key(*col), "{col}");
            }
        }
        assert_eq!(rows[0].verdict("split"), Some("false"));
    }
}
