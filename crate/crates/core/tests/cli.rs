use std::path::PathBuf;

use superlie::cli::run;
use superlie::constructions::{adjoint_sl2, sl, sl2, sym_n_dual, FamilySpec};
use superlie::field::FieldCtx;
use superlie::modrep::{hom_space, HomMode};
use superlie::superalg::SimplicityOptions;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn sh(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("superlie").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn assert_golden(args: &[&str], code: i32, file: &str) {
    let (c, out, err) = sh(args);
    assert_eq!(out, golden(file), "stdout of {args:?}");
    assert_eq!(c, code, "exit code of {args:?}; stderr: {err}");
}

#[test]
fn build_goldens() {
    assert_golden(&["build", "sl", "--m", "2", "--n", "1", "--p", "3"], 0, "build_sl_2_1_p3.txt");
    assert_golden(&["build", "psq", "--n", "3", "--p", "5"], 0, "build_psq_3_p5.txt");
    assert_golden(&["build", "d21", "--a1", "1", "--a2", "1", "--a3", "1", "--p", "0"], 1, "build_d21_111_q.txt");
}

#[test]
fn check_goldens() {
    assert_golden(&["check", "--family", "sl", "--m", "3", "--n", "3", "--p", "5", "simple"], 0, "check_sl_3_3_p5.txt");
    assert_golden(&["check", "--family", "spo", "--m", "1", "--odd", "3", "--p", "3", "simple"], 0, "check_spo_1_3_p3.txt");
    assert_golden(
        &["check", "--family", "sl2_symn", "--n", "3", "--p", "3", "simple", "solvable", "center", "derived", "cubic", "split", "sas"],
        0,
        "check_symn_3_p3.txt",
    );
    assert_golden(&["check", "--family", "sl2_symn", "--n", "3", "--p", "5", "cubic"], 0, "check_symn_3_p5_cubic.txt");
}

#[test]
fn hom_goldens() {
    assert_golden(&["hom", "sym2-dual-sym", "--n", "3", "--p", "5", "adjoint-sl2"], 0, "hom_n3_p5.txt");
    assert_golden(&["hom", "sym2-dual-sym", "--n", "4", "--p", "7", "adjoint-sl2"], 0, "hom_n4_p7.txt");
    let (c, out, _) = sh(&["hom", "sp4-adjoint", "sp4-adjoint", "--p", "5"]);
    assert_eq!((c, out.as_str()), (0, "dim 1\n"));
}

#[test]
fn brj_goldens() {
    assert_golden(&["brj"], 0, "brj_p5.txt");
    assert_golden(&["brj", "--p", "7"], 1, "brj_p7.txt");
}

#[test]
fn census_golden() {
    assert_golden(&["census", "--grid", "catalog", "--checks", "simple,center,derived"], 0, "census_catalog.tsv");
}

#[test]
fn expectations_drive_the_exit_code() {
    let base = ["check", "--family", "sl", "--m", "3", "--n", "3", "--p", "5", "simple", "center"];
    let with = |e: &str| {
        let mut v = base.to_vec();
        v.extend(["--expect", e]);
        sh(&v).0
    };
    assert_eq!(with("center=1|0"), 0);
    assert_eq!(with("center=0|0"), 1);
    assert_eq!(with("simple=GradedSimple"), 1);
    assert_eq!(with("derived=8|0"), 2);
    assert_eq!(with("center"), 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["build", "e8", "--p", "5"][..],
        &["build", "sl", "--m", "2", "--p", "5"],
        &["build", "sl", "--m", "2", "--n", "1", "--p", "4"],
        &["build", "sl", "--m", "2", "--n", "1", "--bogus", "1"],
        &["build", "psl", "--m", "2", "--n", "1", "--p", "3"],
        &["hom", "sym", "adjoint-sl2", "--p", "5"],
        &["hom", "no-such-module", "adjoint-sl2", "--p", "5"],
        &["census", "--grid", "nope"],
        &["census", "--checks", "simple,bogus"],
        &["check", "--family", "sl", "--m", "2", "--n", "1", "--p", "5", "frobnicate"],
        &["check", "simple"],
        &[],
    ] {
        let (c, out, err) = sh(args);
        assert_eq!(c, 2, "{args:?}: {out}{err}");
        assert!(!err.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn help_and_version_go_to_stdout() {
    let (c, out, _) = sh(&["--help"]);
    assert_eq!(c, 0);
    assert!(out.contains("census"));
    let (c, out, _) = sh(&["census", "--help"]);
    assert_eq!(c, 0);
    assert!(out.contains("sas_cond1") && out.contains("SUPERLIE_THREADS"));
    let (c, out, _) = sh(&["--version"]);
    assert_eq!(c, 0);
    assert!(out.starts_with("superlie "));
}

#[test]
fn build_output_round_trips_through_validate_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl.json");
    let p = path.to_str().unwrap();
    assert_eq!(sh(&["build", "sl", "--m", "2", "--n", "1", "--p", "3", "--out", p]).0, 0);
    let (c, out, _) = sh(&["validate-file", p]);
    assert_eq!((c, out.as_str()), (0, "algebra over F3: dims 4|4, valid\n"));
    let (c, out, _) = sh(&["check", "--file", p, "simple", "--expect", "simple=GradedSimple"]);
    assert_eq!((c, out.as_str()), (0, "simple: GradedSimple\n"));

    let pair_path = dir.path().join("pair.json");
    let pp = pair_path.to_str().unwrap();
    assert_eq!(sh(&["build", "sl2_symn", "--n", "3", "--p", "3", "--out", pp]).0, 0);
    let (c, out, _) = sh(&["check", "--file", pp, "sas", "split"]);
    assert_eq!((c, out.as_str()), (0, "sas: (true, true)\nsplit: false\n"));
}

#[test]
fn corrupted_constant_is_a_skew_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl.json");
    let p = path.to_str().unwrap();
    assert_eq!(sh(&["build", "sl", "--m", "2", "--n", "1", "--p", "3", "--out", p]).0, 0);
    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // [E21, E12] with the sign of [E12, E21]
    let first = j["brackets"][0].clone();
    assert_eq!((first[0].as_u64(), first[1].as_u64()), (Some(0), Some(1)));
    let mirrored = serde_json::json!([1, 0, first[2].clone()]);
    j["brackets"].as_array_mut().unwrap().push(mirrored);
    std::fs::write(&path, serde_json::to_string(&j).unwrap()).unwrap();

    let (c, out, _) = sh(&["check", "--file", p, "simple"]);
    assert_eq!(c, 1);
    assert!(out.contains("antisymmetry") || out.contains("skew"), "{out}");
    assert_eq!(sh(&["validate-file", p]).0, 1);

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(sh(&["validate-file", p]).0, 2);
}

#[test]
fn cli_matches_library_calls() {
    let ctx = FieldCtx::prime(5).unwrap();
    let a = sl(3, 3, ctx).unwrap();
    let lib = a.is_graded_simple(SimplicityOptions::default()).summary();
    assert_eq!(sh(&["check", "--family", "sl", "--m", "3", "--n", "3", "--p", "5", "simple"]).1, format!("simple: {lib}\n"));

    let g = sl2(ctx);
    let m = sym_n_dual(5, ctx, &g).unwrap().sym2().unwrap();
    let h = hom_space(&m, &adjoint_sl2(ctx, &g).unwrap(), HomMode::Algebra).unwrap();
    let (_, out, _) = sh(&["hom", "sym2-dual-sym", "adjoint-sl2", "--n", "5", "--p", "5", "--mode", "algebra"]);
    assert_eq!(out, format!("dim {}\n", h.dim));

    let spec = FamilySpec::Psq { n: 3 };
    let b = spec.build(ctx).unwrap();
    assert_eq!(sh(&["build", "psq", "--n", "3", "--p", "5"]).1, format!("{} over F5: dims {}, valid\n", spec.display(), b.dims()));
}

#[test]
fn hom_writes_an_intertwiner_basis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hom.json");
    let p = path.to_str().unwrap();
    assert_eq!(sh(&["hom", "sym2-dual-sym", "adjoint-sl2", "--n", "3", "--p", "5", "--out", p]).0, 0);
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["dim"], 1);
    assert_eq!(j["basis"].as_array().unwrap().len(), 1);
}

#[test]
fn brj_report_file_and_skip_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let (c, out, _) = sh(&["brj", "--skip-simplicity", "--report", p]);
    assert_eq!(c, 0);
    assert!(!out.contains("simple:"));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(j["simplicity"].is_null());
    assert_eq!(j["final_dims"], "10|12");
}

#[test]
fn census_writes_jsonl_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let p = path.to_str().unwrap();
    let (c, out, _) = sh(&["census", "--grid", "catalog", "--checks", "simple", "--format", "jsonl", "--out", p, "--threads", "2"]);
    assert_eq!(c, 0);
    assert_eq!(out, format!("24 rows written to {p}\n"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 24);
    for line in text.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}
