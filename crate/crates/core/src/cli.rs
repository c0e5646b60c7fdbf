//! Command-line front end. Every command writes line-oriented output and
//! returns an exit code: 0 success, 1 check or validation failure, 2 usage or
//! input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{named_grid, run_census, to_jsonl, to_tsv, CensusConfig, Check, GRID_NAMES};
use crate::constructions::{
    adjoint_sl2, run_brj, sl2, sl2_symn_candidate, sp4, sp4_adjoint, sp4_standard, sym_n_dual, sym_n_module, BrjOptions,
    ConstructionError, FamilySpec, FAMILY_NAMES,
};
use crate::field::{FieldCtx, FieldError};
use crate::hcpair::{HCPair, HcError};
use crate::json::matrix_to_json;
use crate::modrep::{hom_space, GModule, HomMode, ModrepError, ModuleJson};
use crate::superalg::{LieSuperalgebra, SimplicityOptions, SuperalgError};

#[derive(Debug, Parser)]
#[command(name = "superlie", version, about = "Exact Lie superalgebras, modules and Harish-Chandra pairs over prime fields and Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub odd: Option<i64>,
    #[arg(long)]
    pub a1: Option<i64>,
    #[arg(long)]
    pub a2: Option<i64>,
    #[arg(long)]
    pub a3: Option<i64>,
    /// Scale of the bracket for sl2_symn (default 1).
    #[arg(long)]
    pub a: Option<i64>,
}

impl FamilyArgs {
    fn params(&self) -> BTreeMap<String, i64> {
        [("m", self.m), ("n", self.n), ("odd", self.odd), ("a1", self.a1), ("a2", self.a2), ("a3", self.a3), ("a", self.a)]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Group,
    Algebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Tsv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a catalog algebra, validate it and optionally write its JSON.
    Build {
        /// One of gl, sl, pgl, psl, spo, p, p_derived, q, pq, psq, d21, sl2_symn, brj.
        family: String,
        #[command(flatten)]
        params: FamilyArgs,
        /// Field characteristic; 0 means Q.
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run named checks (simple, solvable, center, derived, cubic, sas, split)
    /// on a catalog algebra or a JSON file.
    Check {
        #[arg(long, conflicts_with = "family")]
        file: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Expected result as check=value; the exit code is 0 iff all match.
        #[arg(long = "expect")]
        expect: Vec<String>,
        checks: Vec<String>,
    },
    /// Dimension of the space of intertwiners between two modules.
    ///
    /// Modules: sym, dual-sym, sym2-dual-sym (need --n), adjoint-sl2,
    /// sp4-standard, sp4-adjoint, or a path to a module JSON file.
    Hom {
        a: String,
        b: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Group)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Sp4 pipeline and the checks on the resulting pair.
    Brj {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        skip_simplicity: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate checks over a parameter grid.
    ///
    /// TSV columns: family, params (k=v;...), p, dims, simple, solvable, split,
    /// sas_cond1, sas_cond2, center_dim, derived_codim, error. Unrequested
    /// verdicts are "-", checks that do not apply are "n/a". JSON lines carry
    /// the same fields. Rows are sorted by (family, params, p); the worker
    /// count comes from --threads or SUPERLIE_THREADS.
    Census {
        /// One of sl, catalog, d21, all.
        #[arg(long, default_value = "all")]
        grid: String,
        #[arg(long, value_delimiter = ',', default_value = "simple,solvable,center,derived")]
        checks: Vec<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and fully validate an algebra or pair JSON file.
    ValidateFile { file: PathBuf },
}

/// Exit code and message of a failed command.
#[derive(Debug)]
struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail { code: 2, msg: msg.into() }
    }

    fn invalid(msg: impl Into<String>) -> Self {
        Fail { code: 1, msg: msg.into() }
    }
}

fn superalg_code(e: &SuperalgError) -> i32 {
    match e {
        SuperalgError::SkewViolation(..)
        | SuperalgError::GradingViolation(..)
        | SuperalgError::JacobiViolation { .. }
        | SuperalgError::CubicViolation { .. } => 1,
        _ => 2,
    }
}

fn modrep_code(e: &ModrepError) -> i32 {
    match e {
        ModrepError::NotARepresentation(..) | ModrepError::BadFamily { .. } => 1,
        ModrepError::Superalg(s) => superalg_code(s),
        _ => 2,
    }
}

fn hc_code(e: &HcError) -> i32 {
    match e {
        HcError::SymmetryViolation(..) | HcError::EquivarianceViolation { .. } | HcError::CubicViolation { .. } => 1,
        HcError::Superalg(s) => superalg_code(s),
        HcError::Modrep(m) => modrep_code(m),
        _ => 2,
    }
}

fn construction_code(e: &ConstructionError) -> i32 {
    match e {
        ConstructionError::PipelineAssertion { .. } | ConstructionError::PipelineCheck { .. } | ConstructionError::NotClosed(_) => 1,
        ConstructionError::Superalg(s) => superalg_code(s),
        ConstructionError::Modrep(m) => modrep_code(m),
        ConstructionError::Hc(h) => hc_code(h),
        _ => 2,
    }
}

impl From<ConstructionError> for Fail {
    fn from(e: ConstructionError) -> Self {
        Fail { code: construction_code(&e), msg: e.to_string() }
    }
}

impl From<SuperalgError> for Fail {
    fn from(e: SuperalgError) -> Self {
        Fail { code: superalg_code(&e), msg: e.to_string() }
    }
}

impl From<HcError> for Fail {
    fn from(e: HcError) -> Self {
        Fail { code: hc_code(&e), msg: e.to_string() }
    }
}

impl From<ModrepError> for Fail {
    fn from(e: ModrepError) -> Self {
        Fail { code: modrep_code(&e), msg: e.to_string() }
    }
}

impl From<FieldError> for Fail {
    fn from(e: FieldError) -> Self {
        Fail::usage(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::usage(e.to_string())
    }
}

pub fn field_name(ctx: FieldCtx) -> String {
    match ctx {
        FieldCtx::Prime(p) => format!("F{p}"),
        FieldCtx::Rationals => "Q".into(),
    }
}

fn spec_from(family: &str, params: &FamilyArgs) -> Result<FamilySpec, Fail> {
    if !FAMILY_NAMES.contains(&family) {
        return Err(Fail::usage(format!("unknown family `{family}`; expected one of {}", FAMILY_NAMES.join(", "))));
    }
    FamilySpec::from_params(family, &params.params()).map_err(|e| Fail::usage(e.to_string()))
}

/// An algebra together with its pair data when it comes from one.
enum Loaded {
    Algebra(LieSuperalgebra),
    Pair(Box<HCPair>),
}

impl Loaded {
    fn algebra(&self) -> &LieSuperalgebra {
        match self {
            Loaded::Algebra(a) => a,
            Loaded::Pair(p) => p.total(),
        }
    }

    fn pair(&self) -> Option<&HCPair> {
        match self {
            Loaded::Pair(p) => Some(p),
            Loaded::Algebra(_) => None,
        }
    }
}

fn load_file(path: &Path) -> Result<Loaded, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Fail::usage(format!("{}: malformed JSON: {e}", path.display())))?;
    if v.get("odd_action").is_some() {
        Ok(Loaded::Pair(Box::new(HCPair::from_json_str(&text)?)))
    } else {
        Ok(Loaded::Algebra(LieSuperalgebra::from_json_str(&text)?))
    }
}

fn load_family(spec: &FamilySpec, ctx: FieldCtx) -> Result<Loaded, Fail> {
    use crate::constructions::{pq_pair, sl2_symn_pair};
    Ok(match *spec {
        FamilySpec::Sl2Symn { n, a } => Loaded::Pair(Box::new(sl2_symn_pair(n, &ctx.from_i64(a), ctx)?)),
        FamilySpec::Pq { n } => Loaded::Pair(Box::new(pq_pair(n, ctx)?)),
        FamilySpec::Brj => {
            let out = run_brj(BrjOptions { p: ctx.characteristic() as u64, skip_simplicity: true, seed: 0 });
            match out.pair {
                Some(p) => Loaded::Pair(Box::new(p)),
                None => return Err(Fail::invalid(out.report.halted.unwrap_or_default())),
            }
        }
        _ => Loaded::Algebra(spec.build(ctx)?),
    })
}

fn cmd_build(family: &str, params: &FamilyArgs, p: u64, out_path: Option<&Path>, out: &mut dyn Write) -> Result<i32, Fail> {
    let spec = spec_from(family, params)?;
    let ctx = FieldCtx::from_characteristic(p)?;
    let head = format!("{} over {}", spec.display(), field_name(ctx));
    match load_family(&spec, ctx) {
        Ok(l) => {
            let a = l.algebra();
            if let Some(path) = out_path {
                let text = match &l {
                    Loaded::Pair(p) => p.to_json_string(),
                    Loaded::Algebra(a) => a.to_json_string(),
                };
                std::fs::write(path, text + "\n")?;
            }
            writeln!(out, "{head}: dims {}, valid", a.dims())?;
            Ok(0)
        }
        Err(f) if f.code == 1 => {
            writeln!(out, "{head}: invalid: {}", f.msg)?;
            Ok(1)
        }
        Err(f) => Err(f),
    }
}

fn check_value(name: &str, l: &Loaded, seed: u64) -> Result<Vec<String>, Fail> {
    let a = l.algebra();
    Ok(match name {
        "simple" => vec![a.is_graded_simple(SimplicityOptions { seed, ..SimplicityOptions::default() }).summary()],
        "solvable" => vec![a.is_solvable().to_string()],
        "center" => vec![a.center().dims().to_string()],
        "derived" => vec![a.derived_subalgebra().dims().to_string()],
        "cubic" => cubic_lines(a),
        "sas" => match l.pair() {
            Some(p) => {
                let r = p.check_sas_conditions()?;
                vec![format!("({}, {})", r.cond1, r.cond2)]
            }
            None => vec!["n/a".into()],
        },
        "split" => vec![l.pair().map_or("n/a".to_string(), |p| p.is_split().to_string())],
        other => return Err(Fail::usage(format!("unknown check `{other}`"))),
    })
}

fn cubic_lines(a: &LieSuperalgebra) -> Vec<String> {
    let r = a.validate_cubic_odd();
    match r.witness {
        None => vec!["holds".into()],
        Some(w) => vec!["fails".into(), format!("witness: component {} has {}", w.label, w.polynomial)],
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    file: Option<&Path>,
    family: Option<&str>,
    params: &FamilyArgs,
    p: u64,
    seed: u64,
    expect: &[String],
    checks: &[String],
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    let mut expected: BTreeMap<String, String> = BTreeMap::new();
    for e in expect {
        let (k, v) = e.split_once('=').ok_or_else(|| Fail::usage(format!("--expect takes check=value, got `{e}`")))?;
        expected.insert(k.to_string(), v.to_string());
    }
    let loaded = match (file, family) {
        (Some(f), None) => load_file(f),
        (None, Some(fam)) => {
            let spec = spec_from(fam, params)?;
            let ctx = FieldCtx::from_characteristic(p)?;
            match (load_family(&spec, ctx), &spec) {
                // an invalid pair can still be examined for the cubic identity
                (Err(f), FamilySpec::Sl2Symn { n, a }) if f.code == 1 && checks.iter().all(|c| c == "cubic") => {
                    writeln!(out, "pair: invalid: {}", f.msg)?;
                    let cand = sl2_symn_candidate(*n, &ctx.from_i64(*a), ctx)?;
                    Ok(Loaded::Algebra(cand.superalgebra_unchecked()?))
                }
                (r, _) => r,
            }
        }
        _ => return Err(Fail::usage("check needs exactly one of --file or --family")),
    };
    let loaded = match loaded {
        Ok(l) => l,
        Err(f) if f.code == 1 => {
            writeln!(out, "invalid: {}", f.msg)?;
            return Ok(1);
        }
        Err(f) => return Err(f),
    };
    let mut all_match = true;
    for c in checks {
        let lines = check_value(c, &loaded, seed)?;
        writeln!(out, "{c}: {}", lines[0])?;
        for extra in &lines[1..] {
            writeln!(out, "  {extra}")?;
        }
        if let Some(want) = expected.get(c) {
            if want != &lines[0] {
                writeln!(out, "  expected {want}")?;
                all_match = false;
            }
        }
    }
    if let Some(k) = expected.keys().find(|k| !checks.contains(k)) {
        return Err(Fail::usage(format!("--expect names check `{k}` that was not requested")));
    }
    Ok(if all_match { 0 } else { 1 })
}

struct ModuleCatalog {
    ctx: FieldCtx,
    n: Option<usize>,
    sl2: Arc<LieSuperalgebra>,
    sp4: Option<Arc<LieSuperalgebra>>,
}

impl ModuleCatalog {
    fn need_n(&self) -> Result<usize, Fail> {
        self.n.ok_or_else(|| Fail::usage("this module needs --n"))
    }

    fn sp4(&mut self) -> Result<Arc<LieSuperalgebra>, Fail> {
        if self.sp4.is_none() {
            self.sp4 = Some(sp4(self.ctx)?);
        }
        Ok(self.sp4.clone().expect("set above"))
    }

    fn get(&mut self, name: &str) -> Result<GModule, Fail> {
        let ctx = self.ctx;
        Ok(match name {
            "sym" => sym_n_module(self.need_n()?, ctx, &self.sl2)?,
            "dual-sym" => sym_n_dual(self.need_n()?, ctx, &self.sl2)?,
            "sym2-dual-sym" => sym_n_dual(self.need_n()?, ctx, &self.sl2)?.sym2()?,
            "adjoint-sl2" => adjoint_sl2(ctx, &self.sl2)?,
            "sp4-standard" => {
                let g = self.sp4()?;
                sp4_standard(ctx, &g)?
            }
            "sp4-adjoint" => {
                let g = self.sp4()?;
                sp4_adjoint(ctx, &g)?
            }
            path => {
                let text = std::fs::read_to_string(path).map_err(|e| Fail::usage(format!("unknown module `{path}`: {e}")))?;
                let j: ModuleJson = serde_json::from_str(&text).map_err(|e| Fail::usage(format!("{path}: {e}")))?;
                GModule::from_json(&j)?
            }
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_hom(
    a: &str,
    b: &str,
    n: Option<usize>,
    p: u64,
    mode: ModeArg,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    let ctx = FieldCtx::from_characteristic(p)?;
    let mut cat = ModuleCatalog { ctx, n, sl2: sl2(ctx), sp4: None };
    let ma = cat.get(a)?;
    let mb = cat.get(b)?;
    if ma.ctx() != mb.ctx() {
        return Err(Fail::usage(format!("modules live over different fields ({} and {})", field_name(ma.ctx()), field_name(mb.ctx()))));
    }
    let m = match mode {
        ModeArg::Group => HomMode::Group,
        ModeArg::Algebra => HomMode::Algebra,
    };
    let h = hom_space(&ma, &mb, m).map_err(|e| match e {
        ModrepError::AlgebraMismatch | ModrepError::Field(_) => Fail::usage(e.to_string()),
        other => Fail::from(other),
    })?;
    if let Some(path) = out_path {
        let j = serde_json::json!({
            "mode": format!("{mode:?}").to_lowercase(),
            "dim": h.dim,
            "basis": h.basis.iter().map(matrix_to_json).collect::<Vec<_>>(),
        });
        std::fs::write(path, serde_json::to_string_pretty(&j).expect("json") + "\n")?;
    }
    writeln!(out, "dim {}", h.dim)?;
    Ok(0)
}

fn cmd_brj(p: u64, report: Option<&Path>, skip_simplicity: bool, seed: u64, out: &mut dyn Write) -> Result<i32, Fail> {
    FieldCtx::from_characteristic(p)?;
    let res = run_brj(BrjOptions { p, skip_simplicity, seed });
    let r = &res.report;
    for s in &r.stages {
        writeln!(out, "stage {}: {} (expected {}){}", s.stage, s.got, s.expected, if s.ok { "" } else { " MISMATCH" })?;
    }
    for c in &r.checks {
        let detail = c.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default();
        writeln!(out, "check {}: {}{detail}", c.check, if c.ok { "ok" } else { "FAILED" })?;
    }
    if let Some(d) = r.hom_algebra_dim {
        writeln!(out, "hom algebra-mode dim: {d}")?;
    }
    if let Some(nm) = &r.normalization {
        writeln!(out, "normalization: {nm}")?;
    }
    if let Some(d) = &r.final_dims {
        writeln!(out, "final dims: {d}")?;
    }
    if let Some(t) = r.jacobi_triples {
        writeln!(out, "jacobi: holds on {t} triples")?;
    }
    if let Some(c) = r.cubic_holds {
        writeln!(out, "cubic: {}", if c { "holds" } else { "fails" })?;
    }
    if let Some(s) = &r.simplicity {
        writeln!(out, "simple: {s}")?;
    }
    if let Some((a, b)) = r.sas {
        writeln!(out, "sas: ({a}, {b})")?;
    }
    if let Some(h) = &r.halted {
        writeln!(out, "halted: {h}")?;
    }
    if let Some(path) = report {
        std::fs::write(path, serde_json::to_string_pretty(r).expect("report serializes") + "\n")?;
    }
    Ok(if r.all_pass() { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_census(
    grid: &str,
    checks: &[String],
    format: FormatArg,
    out_path: Option<&Path>,
    seed: u64,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Fail> {
    let jobs = named_grid(grid)
        .ok_or_else(|| Fail::usage(format!("unknown grid `{grid}`; expected one of {}", GRID_NAMES.join(", "))))?;
    let checks = checks
        .iter()
        .map(|c| Check::parse(c).ok_or_else(|| Fail::usage(format!("unknown census check `{c}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = run_census(&jobs, &checks, CensusConfig { seed, threads });
    let text = match format {
        FormatArg::Tsv => to_tsv(&rows),
        FormatArg::Jsonl => to_jsonl(&rows),
    };
    match out_path {
        Some(p) => {
            std::fs::write(p, &text)?;
            writeln!(out, "{} rows written to {}", rows.len(), p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_validate(file: &Path, out: &mut dyn Write) -> Result<i32, Fail> {
    match load_file(file) {
        Ok(Loaded::Algebra(a)) => {
            writeln!(out, "algebra over {}: dims {}, valid", field_name(a.ctx()), a.dims())?;
            Ok(0)
        }
        Ok(Loaded::Pair(p)) => {
            writeln!(out, "pair over {}: dims {}, valid", field_name(p.ctx()), p.total().dims())?;
            Ok(0)
        }
        Err(f) if f.code == 1 => {
            writeln!(out, "invalid: {}", f.msg)?;
            Ok(1)
        }
        Err(f) => Err(f),
    }
}

impl From<std::fmt::Error> for Fail {
    fn from(e: std::fmt::Error) -> Self {
        Fail::usage(e.to_string())
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Fail> {
    match cli.command {
        Command::Build { family, params, p, out: path } => cmd_build(&family, &params, p, path.as_deref(), out),
        Command::Check { file, family, params, p, seed, expect, checks } => {
            cmd_check(file.as_deref(), family.as_deref(), &params, p, seed, &expect, &checks, out)
        }
        Command::Hom { a, b, n, p, mode, out: path } => cmd_hom(&a, &b, n, p, mode, path.as_deref(), out),
        Command::Brj { p, report, skip_simplicity, seed } => cmd_brj(p, report.as_deref(), skip_simplicity, seed, out),
        Command::Census { grid, checks, format, out: path, seed, threads } => {
            cmd_census(&grid, &checks, format, path.as_deref(), seed, threads, out)
        }
        Command::ValidateFile { file } => cmd_validate(&file, out),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
