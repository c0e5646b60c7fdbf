//! C ABI over `superlie`. Objects are opaque heap handles released with the
//! matching `_free` function; every fallible call returns an [`SlStatus`] and
//! leaves a message for [`sl_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use superlie::constructions::{pq_pair, run_brj, sl2_symn_pair, BrjOptions, ConstructionError, FamilySpec};
use superlie::field::FieldCtx;
use superlie::hcpair::HCPair;
use superlie::superalg::{LieSuperalgebra, SimplicityOptions, SuperalgError, Verdict};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ValidationFailed = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlVerdict {
    GradedSimple = 0,
    NotSimple = 1,
    Abelian = 2,
    Zero = 3,
}

/// Opaque validated Lie superalgebra.
pub struct SlAlgebra(LieSuperalgebra);

/// Opaque validated Harish-Chandra pair.
pub struct SlPair(HCPair);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

type Failure = (SlStatus, String);

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SlStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err((SlStatus::Internal, msg))
    });
    let (status, msg) = match result {
        Ok(()) => (SlStatus::Ok, String::new()),
        Err(e) => e,
    };
    LAST_ERROR.with(|l| *l.borrow_mut() = msg);
    status
}

fn null() -> Failure {
    (SlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (SlStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

fn superalg_failure(e: SuperalgError) -> Failure {
    let status = match e {
        SuperalgError::Input(_) => SlStatus::ParseError,
        SuperalgError::SkewViolation(..)
        | SuperalgError::GradingViolation(..)
        | SuperalgError::JacobiViolation { .. }
        | SuperalgError::CubicViolation { .. } => SlStatus::ValidationFailed,
        _ => SlStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::Superalg(s) => superalg_failure(s),
        ConstructionError::InvalidParameter(_) | ConstructionError::CenterNotInside { .. } | ConstructionError::Field(_) => {
            (SlStatus::InvalidArgument, e.to_string())
        }
        _ => (SlStatus::ValidationFailed, e.to_string()),
    }
}

/// Parses `k=v` pairs separated by `,` or `;`.
fn parse_params(s: &str) -> Result<BTreeMap<String, i64>, Failure> {
    let bad = |m: String| (SlStatus::InvalidArgument, m);
    s.split([',', ';'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (k, v) = t.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{t}`")))?;
            let v = v.trim().parse::<i64>().map_err(|_| bad(format!("`{v}` is not an integer")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

unsafe fn spec_and_field(family: *const c_char, params: *const c_char, p: u64) -> Result<(FamilySpec, FieldCtx), Failure> {
    let family = text(family)?;
    let params = if params.is_null() { BTreeMap::new() } else { parse_params(text(params)?)? };
    let spec = FamilySpec::from_params(family, &params).map_err(construction_failure)?;
    let ctx = FieldCtx::from_characteristic(p).map_err(|e| (SlStatus::InvalidArgument, e.to_string()))?;
    Ok((spec, ctx))
}

/// Copies `s` with a trailing NUL into `buf` when it fits; `needed` receives
/// the full size including the NUL either way.
unsafe fn copy_out(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Failure> {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || cap < s.len() + 1 {
        return Err((SlStatus::BufferTooSmall, format!("{} bytes needed", s.len() + 1)));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the message of the last failed call on this thread into `buf`.
/// Returns the size needed including the NUL; nothing is written when `cap`
/// is too small.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|l| {
        let s = l.borrow();
        if !buf.is_null() && cap > s.len() {
            ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
            *buf.add(s.len()) = 0;
        }
        s.len() + 1
    })
}

/// Builds a catalog algebra. `params` is `k=v` pairs such as `"m=2,n=1"`
/// (may be NULL); `p` is the characteristic, 0 for the rationals.
#[no_mangle]
pub unsafe extern "C" fn sl_algebra_build(
    family: *const c_char,
    params: *const c_char,
    p: u64,
    result: *mut *mut SlAlgebra,
) -> SlStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = ptr::null_mut();
        let (spec, ctx) = spec_and_field(family, params, p)?;
        let a = spec.build(ctx).map_err(construction_failure)?;
        *slot = Box::into_raw(Box::new(SlAlgebra(a)));
        Ok(())
    })
}

/// Parses and fully validates an algebra from its JSON form.
#[no_mangle]
pub unsafe extern "C" fn sl_algebra_from_json(json: *const c_char, result: *mut *mut SlAlgebra) -> SlStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = ptr::null_mut();
        let a = LieSuperalgebra::from_json_str(text(json)?).map_err(superalg_failure)?;
        *slot = Box::into_raw(Box::new(SlAlgebra(a)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sl_algebra_free(a: *mut SlAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sl_algebra_dims(a: *const SlAlgebra, even: *mut usize, odd: *mut usize) -> SlStatus {
    guard(|| {
        let d = handle(a)?.0.dims();
        *out(even)? = d.even;
        *out(odd)? = d.odd;
        Ok(())
    })
}

/// Runs the simplicity search. For `NotSimple` the witness dimensions are
/// written to `witness_even`/`witness_odd` (either may be NULL).
#[no_mangle]
pub unsafe extern "C" fn sl_algebra_simplicity(
    a: *const SlAlgebra,
    seed: u64,
    verdict: *mut SlVerdict,
    witness_even: *mut usize,
    witness_odd: *mut usize,
) -> SlStatus {
    guard(|| {
        let a = &handle(a)?.0;
        let slot = out(verdict)?;
        let v = a.is_graded_simple(SimplicityOptions { seed, ..SimplicityOptions::default() });
        *slot = match &v.verdict {
            Verdict::GradedSimple => SlVerdict::GradedSimple,
            Verdict::NotSimple(w) => {
                if let Some(e) = witness_even.as_mut() {
                    *e = w.dims().even;
                }
                if let Some(o) = witness_odd.as_mut() {
                    *o = w.dims().odd;
                }
                SlVerdict::NotSimple
            }
            Verdict::Abelian => SlVerdict::Abelian,
            Verdict::Zero => SlVerdict::Zero,
        };
        Ok(())
    })
}

/// Whether `[[v,v],v] = 0` holds identically for odd `v`.
#[no_mangle]
pub unsafe extern "C" fn sl_algebra_cubic_holds(a: *const SlAlgebra, holds: *mut bool) -> SlStatus {
    guard(|| {
        let r = handle(a)?.0.validate_cubic_odd().holds;
        *out(holds)? = r;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sl_algebra_center_dims(a: *const SlAlgebra, even: *mut usize, odd: *mut usize) -> SlStatus {
    guard(|| {
        let d = handle(a)?.0.center().dims();
        *out(even)? = d.even;
        *out(odd)? = d.odd;
        Ok(())
    })
}

/// Writes the JSON form and a NUL into `buf`. `needed` (may be NULL) receives
/// the required size; a short buffer gives `BufferTooSmall`.
#[no_mangle]
pub unsafe extern "C" fn sl_algebra_to_json(a: *const SlAlgebra, buf: *mut c_char, cap: usize, needed: *mut usize) -> SlStatus {
    guard(|| {
        let s = handle(a)?.0.to_json_string();
        copy_out(&s, buf, cap, needed)
    })
}

/// Builds a pair family: `sl2_symn` (params `n`, optional `a`), `pq` (`n`)
/// or `brj` (no params).
#[no_mangle]
pub unsafe extern "C" fn sl_pair_build(family: *const c_char, params: *const c_char, p: u64, result: *mut *mut SlPair) -> SlStatus {
    guard(|| {
        let slot = out(result)?;
        *slot = ptr::null_mut();
        let (spec, ctx) = spec_and_field(family, params, p)?;
        let pair = match spec {
            FamilySpec::Sl2Symn { n, a } => sl2_symn_pair(n, &ctx.from_i64(a), ctx).map_err(construction_failure)?,
            FamilySpec::Pq { n } => pq_pair(n, ctx).map_err(construction_failure)?,
            FamilySpec::Brj => {
                let r = run_brj(BrjOptions { p, skip_simplicity: true, seed: 0 });
                r.pair.ok_or_else(|| (SlStatus::ValidationFailed, r.report.halted.unwrap_or_default()))?
            }
            other => return Err((SlStatus::InvalidArgument, format!("{} is not a pair family", other.name()))),
        };
        *slot = Box::into_raw(Box::new(SlPair(pair)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sl_pair_free(p: *mut SlPair) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// New algebra handle holding the total superalgebra of the pair.
#[no_mangle]
pub unsafe extern "C" fn sl_pair_total(p: *const SlPair, result: *mut *mut SlAlgebra) -> SlStatus {
    guard(|| {
        let a = handle(p)?.0.total().clone();
        *out(result)? = Box::into_raw(Box::new(SlAlgebra(a)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sl_pair_sas(p: *const SlPair, cond1: *mut bool, cond2: *mut bool) -> SlStatus {
    guard(|| {
        let r = handle(p)?.0.check_sas_conditions().map_err(|e| (SlStatus::ValidationFailed, e.to_string()))?;
        *out(cond1)? = r.cond1;
        *out(cond2)? = r.cond2;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sl_pair_is_split(p: *const SlPair, split: *mut bool) -> SlStatus {
    guard(|| {
        let s = handle(p)?.0.is_split();
        *out(split)? = s;
        Ok(())
    })
}
