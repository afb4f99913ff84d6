//! C ABI over the `bruhat` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns one of the
//! `BRUHAT_*` status codes; on failure a message is kept per thread and can be
//! fetched with [`bruhat_last_error_message`]. Strings handed out by this
//! library must be released with [`bruhat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bruhat::admissibility::{check_admissible, Bounds, EmbeddingSpec};
use bruhat::cli::{classify_json, pipeline_report, to_json};
use bruhat::gallery;
use bruhat::padic::FieldSpec;
use bruhat::pgl2::Pgl2;
use bruhat::realization::{branch_report, build_orbit_tree};
use bruhat::Error;

pub const BRUHAT_OK: i32 = 0;
/// A required pointer argument was null.
pub const BRUHAT_ERR_NULL: i32 = -1;
/// A string argument was not valid UTF-8.
pub const BRUHAT_ERR_UTF8: i32 = -2;
/// Malformed input: bad field parameters, literals, JSON or group data.
pub const BRUHAT_ERR_INVALID: i32 = -3;
/// More p-adic digits were needed than the field stores.
pub const BRUHAT_ERR_PRECISION: i32 = -4;
/// A bounded audit produced a witness against admissibility.
pub const BRUHAT_ERR_NOT_ADMISSIBLE: i32 = -5;
/// Word enumeration exceeded its cap; lower the length bound.
pub const BRUHAT_ERR_EXPLOSION: i32 = -6;
/// A Rust panic was caught at the boundary.
pub const BRUHAT_ERR_PANIC: i32 = -7;

/// A p-adic field `K` with fixed residue degree, ramification and precision.
pub struct BruhatField {
    inner: FieldSpec,
}

/// A tree of groups embedded in the tree of `K`, with matrix groups.
pub struct BruhatSpec {
    inner: EmbeddingSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted(_) | Error::DivisionByZero => BRUHAT_ERR_PRECISION,
        Error::NotAdmissible(_) => BRUHAT_ERR_NOT_ADMISSIBLE,
        Error::Explosion(_) => BRUHAT_ERR_EXPLOSION,
        _ => BRUHAT_ERR_INVALID,
    }
}

/// Failure of a boundary call: status code and message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(code_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BRUHAT_OK,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            BRUHAT_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(BRUHAT_ERR_NULL, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(BRUHAT_ERR_UTF8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(BRUHAT_ERR_NULL, format!("{name} is null")))
}

fn out_arg<T>(p: *mut T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(BRUHAT_ERR_NULL, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn string_out(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text).map(CString::into_raw).map_err(|_| Failure(BRUHAT_ERR_INVALID, "interior NUL in output".into()))
}

fn bounds_for(spec: &EmbeddingSpec, length: u32, radius: u32) -> Result<Bounds, Failure> {
    let d = spec.default_bounds()?;
    Ok(Bounds {
        length: if length == 0 { d.length } else { length as usize },
        radius: if radius == 0 { d.radius } else { u64::from(radius) },
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bruhat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The returned
/// string is a copy owned by the caller.
#[no_mangle]
pub extern "C" fn bruhat_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn bruhat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the field with residue degree `f`, ramification `e` and
/// `precision` stored digits over Q_p.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn bruhat_field_new(p: u64, f: u32, e: u32, precision: u32, out: *mut *mut BruhatField) -> i32 {
    guard(|| {
        out_arg(out, "out")?;
        let inner = FieldSpec::new(p, f, e, precision)?;
        *out = Box::into_raw(Box::new(BruhatField { inner }));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`bruhat_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bruhat_field_free(field: *mut BruhatField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Classifies the matrix literal `"a, b; c, d"` over `field` and writes the
/// report as JSON.
///
/// # Safety
/// `field` must be a live handle, `matrix` a NUL-terminated string and
/// `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_classify_json(
    field: *const BruhatField,
    matrix: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let k = &ref_arg(field, "field")?.inner;
        let text = str_arg(matrix, "matrix")?;
        out_arg(out_json, "out_json")?;
        let g = Pgl2::parse(k, text)?;
        *out_json = string_out(to_json(&classify_json(&g)?)?)?;
        Ok(())
    })
}

/// Parses an embedding spec from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_spec_from_json(json: *const c_char, out: *mut *mut BruhatSpec) -> i32 {
    guard(|| {
        let text = str_arg(json, "json")?;
        out_arg(out, "out")?;
        let inner = EmbeddingSpec::from_json(text)?;
        *out = Box::into_raw(Box::new(BruhatSpec { inner }));
        Ok(())
    })
}

/// The free product `Z_n * Z_m` over the smallest unramified extension of Q_p
/// holding both roots of unity, mirrors at distance `2r`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_spec_free_product(p: u64, n: u64, m: u64, r: u32, out: *mut *mut BruhatSpec) -> i32 {
    guard(|| {
        out_arg(out, "out")?;
        let inner = gallery::free_product(p, n, m, r)?;
        *out = Box::into_raw(Box::new(BruhatSpec { inner }));
        Ok(())
    })
}

/// The dyadic triangle group `D_n *_{Z_2} Z_{2m}` with ramification `e`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_spec_triangle(n: u64, m: u64, e: u32, out: *mut *mut BruhatSpec) -> i32 {
    guard(|| {
        out_arg(out, "out")?;
        let inner = gallery::triangle_dyadic(n, m, e)?;
        *out = Box::into_raw(Box::new(BruhatSpec { inner }));
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or a live spec handle.
#[no_mangle]
pub unsafe extern "C" fn bruhat_spec_free(spec: *mut BruhatSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// The embedding spec in its JSON exchange form.
///
/// # Safety
/// `spec` must be a live handle and `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_spec_to_json(spec: *const BruhatSpec, out_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = &ref_arg(spec, "spec")?.inner;
        out_arg(out_json, "out_json")?;
        *out_json = string_out(to_json(&s.to_json()?)?)?;
        Ok(())
    })
}

/// Bounded admissibility check. Zero `length` or `radius` selects the
/// default. `out_overall` (optional) receives 0 verified, 1 refuted,
/// 2 inconclusive.
///
/// # Safety
/// `spec` must be a live handle, `out_json` valid for writes and
/// `out_overall` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_check_json(
    spec: *const BruhatSpec,
    length: u32,
    radius: u32,
    out_json: *mut *mut c_char,
    out_overall: *mut i32,
) -> i32 {
    guard(|| {
        let s = &ref_arg(spec, "spec")?.inner;
        out_arg(out_json, "out_json")?;
        let report = check_admissible(s, bounds_for(s, length, radius)?)?;
        if !out_overall.is_null() {
            *out_overall = match report.overall {
                bruhat::admissibility::Overall::Verified => 0,
                bruhat::admissibility::Overall::Refuted => 1,
                bruhat::admissibility::Overall::Inconclusive => 2,
            };
        }
        *out_json = string_out(to_json(&report)?)?;
        Ok(())
    })
}

/// Branch report of the orbit tree: ends, cyclic stabilizer orders and genus.
///
/// # Safety
/// As for [`bruhat_check_json`].
#[no_mangle]
pub unsafe extern "C" fn bruhat_branch_report_json(
    spec: *const BruhatSpec,
    length: u32,
    radius: u32,
    out_json: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let s = &ref_arg(spec, "spec")?.inner;
        out_arg(out_json, "out_json")?;
        let ot = build_orbit_tree(s, bounds_for(s, length, radius)?)?;
        *out_json = string_out(to_json(&branch_report(&ot)?)?)?;
        Ok(())
    })
}

/// Check, audits, quotient and branch report in one JSON document, as printed
/// by the gallery commands. `out_dot` (optional) receives the orbit tree DOT,
/// or null when the check refuted the embedding spec.
///
/// # Safety
/// `spec` must be a live handle, `out_json` valid for writes and `out_dot`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bruhat_pipeline_json(
    spec: *const BruhatSpec,
    length: u32,
    radius: u32,
    out_json: *mut *mut c_char,
    out_dot: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let s = &ref_arg(spec, "spec")?.inner;
        out_arg(out_json, "out_json")?;
        let (doc, dot, _) = pipeline_report(s, bounds_for(s, length, radius)?)?;
        let json = string_out(to_json(&doc)?)?;
        if !out_dot.is_null() {
            *out_dot = match dot {
                Some(d) => string_out(d)?,
                None => ptr::null_mut(),
            };
        }
        *out_json = json;
        Ok(())
    })
}
