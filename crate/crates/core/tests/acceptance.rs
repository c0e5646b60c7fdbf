//! Acceptance run: one PASS/FAIL line per criterion, each criterion made of
//! named clauses. Clauses listed in `KNOWN_FAILURES` are computed honestly and
//! reported as FAIL; the run exits nonzero if the failing set changes.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superlie::census::grid_d21;
use superlie::constructions::{
    adjoint_sl2, d21, gl, periplectic, periplectic_derived, pgl, pq, psl, psq, queer, run_brj, sl, sl2, sl2_symn_candidate,
    sl2_symn_constants, sl2_symn_pair, spo, sym_n_dual, BrjOptions, D21Params,
};
use superlie::field::{FieldCtx, Scalar};
use superlie::linalg::Subspace;
use superlie::modrep::{hom_space, HomMode};
use superlie::poly::MultiPoly;
use superlie::superalg::{LieSuperalgebra, Parity, SDim, SimplicityOptions, Verdict};

const KNOWN_FAILURES: &[&str] = &[
    "p_derived(n=2) over F3 is GradedSimple",
    "p_derived(n=2) over F5 is GradedSimple",
    "p_derived(n=2) over F7 is GradedSimple",
    "over F7 the hom stage has dimension 0",
];

struct Outcome {
    clauses: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { clauses: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.clauses.push((name.into(), ok));
    }

    fn runtime(&mut self, start: Instant, limit: u64) {
        let t = start.elapsed();
        self.check(format!("runtime under {limit} s"), t < Duration::from_secs(limit));
    }
}

fn fp(p: u64) -> FieldCtx {
    FieldCtx::prime(p).unwrap()
}

fn field_name(ctx: FieldCtx) -> String {
    match ctx {
        FieldCtx::Prime(p) => format!("F{p}"),
        FieldCtx::Rationals => "Q".into(),
    }
}

fn simple(a: &LieSuperalgebra) -> bool {
    a.is_graded_simple(SimplicityOptions::default()).is_simple()
}

fn sl_dichotomy() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    for p in [3u64, 5, 7] {
        let ctx = fp(p);
        for m in 1..=4usize {
            for n in 1..=4usize {
                if m + n < 3 {
                    continue;
                }
                let a = sl(m, n, ctx).unwrap();
                let v = a.is_graded_simple(SimplicityOptions::default());
                let divides = (m as i64 - n as i64).rem_euclid(p as i64) == 0;
                o.check(format!("sl({m}|{n}) over F{p}: simple iff p does not divide m-n"), v.is_simple() != divides);
                if !divides {
                    continue;
                }
                // a 1|0 ideal spanned by a central element supported on the
                // diagonal is the line of scalar matrices
                let scalar_line = v.witness().is_some_and(|w| {
                    let vecs = w.basis_vectors(&a);
                    w.dims() == SDim::new(1, 0)
                        && vecs.iter().all(|x| {
                            (0..a.dim()).all(|j| a.bracket(x, &a.unit(j)).unwrap().iter().all(|c| ctx.is_zero(c)))
                                && x.iter().enumerate().all(|(k, c)| ctx.is_zero(c) || a.label(k).starts_with('h'))
                        })
                });
                o.check(format!("sl({m}|{n}) over F{p}: witness is the scalar line"), scalar_line);
                o.check(format!("psl({m}|{n}) over F{p} is GradedSimple"), simple(&psl(m, n, ctx).unwrap()));
            }
        }
    }
    o.runtime(start, 30);
    o
}

fn pgl_codimension() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    for (m, n, p) in [(4usize, 1usize, 3u64), (5, 2, 3)] {
        let a = pgl(m, n, fp(p)).unwrap();
        let d = a.derived_subalgebra();
        let dims = a.dims();
        o.check(format!("pgl({m}|{n}) over F{p}: derived is a superideal"), a.is_ideal(&d));
        o.check(
            format!("pgl({m}|{n}) over F{p}: derived has codimension 1|0"),
            d.dims() == SDim::new(dims.even - 1, dims.odd),
        );
    }
    o.runtime(start, 10);
    o
}

/// Multiplicity of the 3-dimensional irreducible in the symmetric square of
/// the (n+1)-dimensional one, in characteristic 0, from weights alone.
fn adjoint_in_sym2_char0(n: i64) -> usize {
    let w: Vec<i64> = (0..=n).map(|i| n - 2 * i).collect();
    let count = |t: i64| (0..w.len()).flat_map(|i| (i..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] + w[j] == t).count();
    count(2) - count(4)
}

fn unique_form() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let mut fields: Vec<(FieldCtx, usize)> = vec![(fp(5), 5), (fp(7), 7)];
    fields.push((FieldCtx::rationals(), 7));
    for (ctx, max_n) in fields {
        let g = sl2(ctx);
        let adj = adjoint_sl2(ctx, &g).unwrap();
        for n in 1..=max_n {
            let f = field_name(ctx);
            let m = sym_n_dual(n, ctx, &g).unwrap().sym2().unwrap();
            let group = hom_space(&m, &adj, HomMode::Group).unwrap().dim;
            let alg = hom_space(&m, &adj, HomMode::Algebra).unwrap().dim;
            let want = n % 2;
            o.check(format!("n={n} over {f}: group-mode hom has dimension {want}"), group == want);
            o.check(format!("n={n} over {f}: algebra mode agrees with group mode"), alg == group);
            if ctx == FieldCtx::Rationals {
                o.check(format!("n={n} over Q: weight count agrees"), adjoint_in_sym2_char0(n as i64) == want);
            }
            let k = sl2_symn_constants(n, &ctx.one(), ctx).unwrap();
            o.check(format!("n={n} over {f}: constants satisfy the recurrences"), k.check_recurrences(ctx).is_ok());
        }
    }
    o.runtime(start, 20);
    o
}

fn poly(ctx: FieldCtx, vars: &[String], terms: &[(i64, [u8; 4])]) -> MultiPoly {
    let mut p = MultiPoly::zero(ctx, vars.to_vec());
    for (c, m) in terms {
        p.add_term(m.to_vec(), ctx.from_i64(*c)).unwrap();
    }
    p
}

/// Components of `[[v,v],v]` for n = 3 and a = 1, one per odd basis element.
fn reference_cubic_n3(ctx: FieldCtx, vars: &[String]) -> Vec<MultiPoly> {
    vec![
        poly(ctx, vars, &[(6, [0, 3, 0, 0]), (-9, [1, 1, 1, 0]), (3, [2, 0, 0, 1])]),
        poly(ctx, vars, &[(3, [0, 2, 1, 0]), (-6, [1, 0, 2, 0]), (3, [1, 1, 0, 1])]),
        poly(ctx, vars, &[(6, [0, 2, 0, 1]), (-3, [1, 0, 1, 1]), (-3, [0, 1, 2, 0])]),
        poly(ctx, vars, &[(-6, [0, 0, 3, 0]), (9, [0, 1, 1, 1]), (-3, [1, 0, 0, 2])]),
    ]
}

fn odd_labels_in_order(a: &LieSuperalgebra, n: usize) -> bool {
    a.odd_indices().iter().enumerate().all(|(k, &i)| a.label(i) == format!("s{k}*")) && a.odd_indices().len() == n + 1
}

fn cubic_trichotomy() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let unchecked = |n: usize, ctx: FieldCtx| sl2_symn_candidate(n, &ctx.one(), ctx).unwrap().superalgebra_unchecked().unwrap();
    for ctx in [fp(3), fp(5), fp(7), FieldCtx::rationals()] {
        let holds = unchecked(1, ctx).validate_cubic_odd().holds;
        o.check(format!("n=1 over {}: cubic holds", field_name(ctx)), holds);
    }
    o.check("n=3 over F3: cubic holds", unchecked(3, fp(3)).validate_cubic_odd().holds);
    for ctx in [fp(5), fp(7), FieldCtx::rationals()] {
        let a = unchecked(3, ctx);
        let r = a.validate_cubic_odd();
        let f = field_name(ctx);
        o.check(format!("n=3 over {f}: cubic fails with a witness"), !r.holds && r.witness.is_some());
        let vars = r.components[0].vars().to_vec();
        let reference = reference_cubic_n3(ctx, &vars);
        // a common nonzero scalar relates the computed and reference components
        let lambda = r.components[0].terms().next().map(|(m, c)| ctx.div(c, &reference[0].coefficient(m)).unwrap());
        let proportional = odd_labels_in_order(&a, 3)
            && lambda.as_ref().is_some_and(|l| {
                !ctx.is_zero(l)
                    && r.components.iter().zip(&reference).all(|(c, refp)| c.sub(&refp.scale(l)).unwrap().is_zero().is_zero())
            });
        o.check(format!("n=3 over {f}: components match the reference polynomials"), proportional);
    }
    let ctx = fp(7);
    let n = 5;
    let a = unchecked(n, ctx);
    let r = a.validate_cubic_odd();
    o.check("n=5 over F7: cubic fails with a witness", !r.holds && r.witness.is_some());
    // restrict to v = alpha s_0* + beta s_{n-1}*
    let restricted: Vec<Vec<(Vec<u8>, Scalar)>> = r
        .components
        .iter()
        .map(|c| {
            c.terms()
                .filter(|(m, _)| m.iter().enumerate().all(|(k, e)| *e == 0 || k == 0 || k == n - 1))
                .map(|(m, s)| (m.clone(), s.clone()))
                .collect()
        })
        .collect();
    let mut target = vec![0u8; n + 1];
    target[0] = 1;
    target[n - 1] = 2;
    let shape = odd_labels_in_order(&a, n)
        && restricted.iter().enumerate().all(|(k, terms)| {
            if k == n - 2 {
                terms.len() == 1 && terms[0].0 == target && terms[0].1 == ctx.from_i64(-4)
            } else {
                terms.is_empty()
            }
        });
    o.check("n=5 over F7: restricted to alpha s_0* + beta s_4*, only s_3* survives with -4 alpha beta^2", shape);
    o.runtime(start, 10);
    o
}

fn certain_couples() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let ctx = fp(3);
    match sl2_symn_pair(3, &ctx.one(), ctx) {
        Err(e) => o.check(format!("n=3 over F3: pair assembles ({e})"), false),
        Ok(pair) => {
            o.check("n=3 over F3: pair assembles", true);
            let sas = pair.check_sas_conditions().unwrap();
            o.check("SAS conditions are (true, true)", sas.cond1 && sas.cond2);
            let a = pair.total();
            let d = a.derived_subalgebra();
            o.check("derived subalgebra has dims 3|2", d.dims() == SDim::new(3, 2));
            o.check("derived subalgebra is a proper superideal", a.is_ideal(&d) && !d.is_whole() && !d.is_zero());
            let all = a.odd_indices().iter().all(|&i| a.ideal_closure(&[a.unit(i)]).is_ok_and(|c| d.leq(&c)));
            o.check("closure of every odd weight vector contains the derived subalgebra", all);
        }
    }
    o.runtime(start, 10);
    o
}

fn catalog() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    for p in [3u64, 5, 7] {
        let ctx = fp(p);
        for (m, odd) in [(1usize, 3usize), (2, 5), (1, 4)] {
            let a = spo(m, odd, ctx).unwrap();
            o.check(format!("spo({}|{odd}) over F{p} is GradedSimple", 2 * m), simple(&a));
        }
        for n in [2usize, 3] {
            let a = periplectic_derived(n, ctx).unwrap();
            o.check(format!("p_derived(n={n}) over F{p} has dims {}|{}", n * n - 1, n * n), a.dims() == SDim::new(n * n - 1, n * n));
            o.check(format!("p_derived(n={n}) over F{p} is GradedSimple"), simple(&a));
        }
        for n in [3usize, 4] {
            o.check(format!("psq(n={n}) over F{p} is GradedSimple"), simple(&psq(n, ctx).unwrap()));
        }
        let a = psq(2, ctx).unwrap();
        let v = a.is_graded_simple(SimplicityOptions::default());
        let exposed = match v.witness() {
            Some(w) if w.dims() == SDim::new(0, 3) => {
                let vecs = w.basis_vectors(&a);
                let zero_bracket = vecs.iter().all(|x| vecs.iter().all(|y| a.bracket(x, y).unwrap().iter().all(|c| ctx.is_zero(c))));
                zero_bracket && a.is_ideal(w)
            }
            _ => false,
        };
        o.check(format!("psq(n=2) over F{p} exposes an invariant 0|3 odd subspace with zero bracket"), exposed);
    }
    o.runtime(start, 60);
    o
}

fn d21_family() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let ctx = fp(5);
    let grid: Vec<[i64; 3]> = grid_d21()
        .iter()
        .map(|j| {
            let p = j.spec.params();
            [p["a1"].rem_euclid(5), p["a2"].rem_euclid(5), p["a3"].rem_euclid(5)]
        })
        .collect();
    let distinct: BTreeSet<[i64; 3]> = grid.iter().copied().collect();
    o.check("grid has 20 distinct points", grid.len() == 20 && distinct.len() == 20);
    o.check("grid contains (1,1,1)", distinct.contains(&[1, 1, 1]));
    o.check("grid contains (alpha,1,-1-alpha) for every alpha", (0..5i64).all(|al| distinct.contains(&[al, 1, (-1 - al).rem_euclid(5)])));
    for a in &distinct {
        let built = d21(&D21Params::from_i64(ctx, *a), ctx);
        let sum_zero = (a[0] + a[1] + a[2]) % 5 == 0;
        o.check(format!("d21{a:?}: validates iff the parameters sum to 0"), built.is_ok() == sum_zero);
        if let Ok(alg) = built {
            o.check(format!("d21{a:?}: dims 9|8"), alg.dims() == SDim::new(9, 8));
            let nondegenerate = a.iter().all(|x| x % 5 != 0);
            o.check(format!("d21{a:?}: simple iff no parameter vanishes"), simple(&alg) == nondegenerate);
        }
    }
    o.runtime(start, 20);
    o
}

fn brj() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let out = run_brj(BrjOptions::default());
    let got: Vec<usize> = out.report.stages.iter().map(|s| s.got).collect();
    o.check("stage dimensions are (4, 6, 5, 20, 16, 4, 12, 78, 1)", got == [4, 6, 5, 20, 16, 4, 12, 78, 1]);
    o.check(
        "socle equals the span of the four y-vectors",
        out.report.check("socle equals the span of the y-vectors").is_some_and(|c| c.ok),
    );
    match &out.pair {
        None => o.check("pipeline produces a pair", false),
        Some(pair) => {
            let a = pair.total();
            o.check("final algebra has dims 10|12", a.dims() == SDim::new(10, 12));
            o.check("Jacobi holds on all basis triples", a.validate_jacobi().holds);
            o.check("cubic identity holds", a.validate_cubic_odd().holds);
            o.check("final algebra is GradedSimple", matches!(a.is_graded_simple(SimplicityOptions::default()).verdict, Verdict::GradedSimple));
            let sas = pair.check_sas_conditions().unwrap();
            o.check("SAS conditions are (true, true)", sas.cond1 && sas.cond2);
        }
    }
    let f7 = run_brj(BrjOptions { p: 7, ..BrjOptions::default() });
    let hom = f7.report.stage("Hom").map(|s| s.got);
    o.check("over F7 the hom stage has dimension 0", hom == Some(0));
    o.runtime(start, 120);
    o
}

fn check_skew_and_grading(a: &LieSuperalgebra) -> bool {
    let ctx = a.ctx();
    (0..a.dim()).all(|i| {
        (0..a.dim()).all(|j| {
            let both_odd = a.parity(i) == Parity::Odd && a.parity(j) == Parity::Odd;
            let x = a.bracket_basis(i, j);
            let y = a.bracket_basis(j, i);
            let mirrored = x.len() == y.len()
                && x.iter().all(|(k, c)| {
                    let want = if both_odd { c.clone() } else { ctx.neg(c) };
                    y.iter().any(|(k2, c2)| k2 == k && *c2 == want)
                });
            let graded = x.iter().all(|(k, _)| a.parity(*k) == a.parity(i).add(a.parity(j)));
            mirrored && graded
        })
    })
}

fn random_vector(rng: &mut ChaCha8Rng, ctx: FieldCtx, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| ctx.from_i64(rng.gen_range(-3..4))).collect()
}

fn properties() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let q = FieldCtx::rationals();
    let mut algebras: Vec<(String, LieSuperalgebra)> = vec![
        ("sl(2|1) over F3".into(), sl(2, 1, fp(3)).unwrap()),
        ("sl(3|3) over F5".into(), sl(3, 3, fp(5)).unwrap()),
        ("gl(2|2) over F7".into(), gl(2, 2, fp(7)).unwrap()),
        ("gl(1|1) over Q".into(), gl(1, 1, q).unwrap()),
        ("pgl(4|1) over F3".into(), pgl(4, 1, fp(3)).unwrap()),
        ("psl(3|3) over F3".into(), psl(3, 3, fp(3)).unwrap()),
        ("spo(2|3) over F5".into(), spo(1, 3, fp(5)).unwrap()),
        ("spo(2|4) over F3".into(), spo(1, 4, fp(3)).unwrap()),
        ("p(3) over F7".into(), periplectic(3, fp(7)).unwrap()),
        ("p_derived(3) over F5".into(), periplectic_derived(3, fp(5)).unwrap()),
        ("q(3) over F5".into(), queer(3, fp(5)).unwrap()),
        ("pq(3) over F7".into(), pq(3, fp(7)).unwrap()),
        ("psq(3) over F5".into(), psq(3, fp(5)).unwrap()),
        ("psq(2) over Q".into(), psq(2, q).unwrap()),
        ("d21(1,1,3) over F5".into(), d21(&D21Params::from_i64(fp(5), [1, 1, 3]), fp(5)).unwrap()),
        ("d21(1,2,-3) over Q".into(), d21(&D21Params::from_i64(q, [1, 2, -3]), q).unwrap()),
        ("sl2 + Sym1 over Q".into(), sl2_symn_pair(1, &q.one(), q).unwrap().total().clone()),
        ("sl2 + Sym3 over F3".into(), sl2_symn_pair(3, &fp(3).one(), fp(3)).unwrap().total().clone()),
    ];
    if let Some(p) = run_brj(BrjOptions { skip_simplicity: true, ..BrjOptions::default() }).pair {
        algebras.push(("10|12 algebra over F5".into(), p.total().clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, a) in &algebras {
        let ctx = a.ctx();
        o.check(format!("{name}: super-skew and grading"), check_skew_and_grading(a));
        let jacobi = a.validate_jacobi().holds;
        o.check(format!("{name}: Jacobi on all basis triples"), jacobi);
        if ctx.characteristic() != 3 {
            o.check(format!("{name}: Jacobi implies cubic"), !jacobi || a.validate_cubic_odd().holds);
        }
        let seed = random_vector(&mut rng, ctx, a.dim());
        let i = a.ideal_closure(&[seed]).unwrap();
        let again = a.ideal_closure(&i.basis_vectors(a)).unwrap();
        o.check(format!("{name}: ideal closure is idempotent"), again == i && a.is_ideal(&i));
        let quotient = a.quotient(&i).unwrap();
        let qd = quotient.algebra.dims();
        let (ad, id) = (a.dims(), i.dims());
        o.check(format!("{name}: quotient dimensions subtract"), qd == SDim::new(ad.even - id.even, ad.odd - id.odd));
    }
    for ctx in [fp(3), fp(7), q] {
        let mut ok = true;
        for _ in 0..200 {
            let n = rng.gen_range(1..9);
            let sub = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(0..=n);
                Subspace::from_vectors(ctx, n, (0..k).map(|_| random_vector(rng, ctx, n)).collect()).unwrap()
            };
            let u = sub(&mut rng);
            let w = sub(&mut rng);
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            ok &= s.dim() + i.dim() == u.dim() + w.dim();
        }
        o.check(format!("dim(U+W) + dim(U∩W) = dim U + dim W on 200 random pairs over {}", field_name(ctx)), ok);
    }
    o.runtime(start, 60);
    o
}

fn census_run(threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_superlie"))
        .args(["census", "--grid", "all", "--checks", "simple,solvable,split,sas,center,derived"])
        .env("SUPERLIE_THREADS", threads)
        .output()
        .expect("census runs");
    assert!(out.status.success(), "census failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let a = census_run("1");
    let b = census_run("1");
    let c = census_run("4");
    let d = census_run("4");
    o.check("census output is nonempty", a.len() > 100);
    o.check("two single-thread runs are byte-identical", a == b);
    o.check("four-thread runs match the single-thread run", a == c && c == d);
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sl dichotomy", sl_dichotomy),
        ("pgl/psl codimension", pgl_codimension),
        ("unique-form family", unique_form),
        ("cubic trichotomy", cubic_trichotomy),
        ("certain-couples SAS", certain_couples),
        ("family catalog", catalog),
        ("D(2,1;alpha)", d21_family),
        ("10|12 pipeline", brj),
        ("property suites", properties),
        ("determinism", determinism),
    ];
    let mut failing = BTreeSet::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let bad: Vec<&str> = o.clauses.iter().filter(|(_, ok)| !ok).map(|(c, _)| c.as_str()).collect();
        let secs = start.elapsed().as_secs_f64();
        if bad.is_empty() {
            println!("criterion {:>2} {name}: PASS ({} clauses, {secs:.1} s)", k + 1, o.clauses.len());
        } else {
            println!("criterion {:>2} {name}: FAIL ({} of {} clauses, {secs:.1} s)", k + 1, bad.len(), o.clauses.len());
            for c in &bad {
                let tag = if KNOWN_FAILURES.contains(c) { "documented deviation" } else { "unexpected" };
                println!("    failed: {c} [{tag}]");
            }
        }
        failing.extend(bad.into_iter().map(String::from));
    }
    let known: BTreeSet<String> = KNOWN_FAILURES.iter().map(|s| s.to_string()).collect();
    let unexpected: Vec<_> = failing.difference(&known).collect();
    let resolved: Vec<_> = known.difference(&failing).collect();
    if !resolved.is_empty() {
        println!("documented deviations that now pass: {resolved:?}");
    }
    if !unexpected.is_empty() || !resolved.is_empty() {
        std::process::exit(1);
    }
}
