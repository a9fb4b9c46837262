//! C ABI for `bcgauge`.
//!
//! Every function returns a [`BcgStatus`]; outputs go through pointer
//! arguments. Sets, vectors and seminorm families are opaque handles created
//! from JSON and released with their `_free` function. After a non-OK status
//! the message is available from [`bcg_last_error`] on the same thread.
//! Strings returned by the library must be released with [`bcg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bcgauge::battery::{self, BatteryConfig, Suite};
use bcgauge::json::{parse_family, parse_set, parse_vector};
use bcgauge::seminorm::{self, SeminormFamily};
use bcgauge::sets::SetRep;
use bcgauge::{gauge, BcError, Bicomplex, Complex, Hyperbolic, ModuleVector};

/// Status codes; the nonzero values match the exit codes of the CLI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcgStatus {
    Ok = 0,
    CheckFailed = 1,
    NullCone = 2,
    Unsupported = 3,
    NotAbsorbed = 4,
    Mismatch = 5,
    Invalid = 64,
    NullPointer = 65,
    Panic = 66,
}

/// `w1 + j·w2` with `w1, w2` in `C(i)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BcgBicomplex {
    pub w1_re: f64,
    pub w1_im: f64,
    pub w2_re: f64,
    pub w2_im: f64,
}

/// `e1·a1 + e2·a2`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BcgHyperbolic {
    pub e1: f64,
    pub e2: f64,
}

/// Opaque set handle.
pub struct BcgSet {
    inner: SetRep,
}

/// Opaque vector handle.
pub struct BcgVector {
    inner: ModuleVector,
}

/// Opaque seminorm family handle.
pub struct BcgFamily {
    inner: SeminormFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &BcError) -> BcgStatus {
    match e.exit_code() {
        2 => BcgStatus::NullCone,
        3 => BcgStatus::Unsupported,
        4 => BcgStatus::NotAbsorbed,
        5 => BcgStatus::Mismatch,
        _ => BcgStatus::Invalid,
    }
}

enum Fail {
    Lib(BcError),
    Null(&'static str),
}

impl From<BcError> for Fail {
    fn from(e: BcError) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<BcgStatus, Fail>) -> BcgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            BcgStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".into());
            BcgStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(BcError::InvalidArgument(format!("{what} is not UTF-8"))))
}

fn to_bc(z: &BcgBicomplex) -> Result<Bicomplex, Fail> {
    Ok(Bicomplex::from_parts(z.w1_re, z.w1_im, z.w2_re, z.w2_im)?)
}

fn from_bc(z: Bicomplex) -> BcgBicomplex {
    let [w1_re, w1_im, w2_re, w2_im] = z.parts();
    BcgBicomplex { w1_re, w1_im, w2_re, w2_im }
}

fn from_hyp(h: Hyperbolic) -> BcgHyperbolic {
    BcgHyperbolic { e1: h.a1(), e2: h.a2() }
}

fn into_handle<T>(value: T, slot: *mut *mut T) -> Result<BcgStatus, Fail> {
    let slot = unsafe { out(slot, "out")? };
    *slot = Box::into_raw(Box::new(value));
    Ok(BcgStatus::Ok)
}

/// The message of the last failed call on this thread, or NULL. Release
/// with `bcg_string_free`.
#[no_mangle]
pub extern "C" fn bcg_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bcg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `result = a·b`.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_bicomplex_mul(a: *const BcgBicomplex, b: *const BcgBicomplex, result: *mut BcgBicomplex) -> BcgStatus {
    guard(|| {
        let z = to_bc(deref(a, "a")?)? * to_bc(deref(b, "b")?)?;
        *out(result, "result")? = from_bc(z);
        Ok(BcgStatus::Ok)
    })
}

/// `result = 1/a`; `BCG_STATUS_NULL_CONE` for non-invertible `a`.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_bicomplex_inverse(a: *const BcgBicomplex, result: *mut BcgBicomplex) -> BcgStatus {
    guard(|| {
        let z = to_bc(deref(a, "a")?)?.inverse()?;
        *out(result, "result")? = from_bc(z);
        Ok(BcgStatus::Ok)
    })
}

/// The hyperbolic modulus `|a|_k`.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_bicomplex_knorm(a: *const BcgBicomplex, result: *mut BcgHyperbolic) -> BcgStatus {
    guard(|| {
        *out(result, "result")? = from_hyp(to_bc(deref(a, "a")?)?.knorm());
        Ok(BcgStatus::Ok)
    })
}

/// Idempotent components as `[z1.re, z1.im, z2.re, z2.im]`.
///
/// # Safety
/// `a` must be valid or NULL; `parts` must point to 4 writable doubles or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_bicomplex_idempotent(a: *const BcgBicomplex, parts: *mut f64) -> BcgStatus {
    guard(|| {
        let (z1, z2) = to_bc(deref(a, "a")?)?.idempotent();
        if parts.is_null() {
            return Err(Fail::Null("parts"));
        }
        std::slice::from_raw_parts_mut(parts, 4).copy_from_slice(&[z1.re, z1.im, z2.re, z2.im]);
        Ok(BcgStatus::Ok)
    })
}

/// `e1·z1 + e2·z2`.
///
/// # Safety
/// `result` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_bicomplex_from_idempotent(
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    result: *mut BcgBicomplex,
) -> BcgStatus {
    guard(|| {
        let z = Bicomplex::from_idempotent(Complex::new(z1_re, z1_im), Complex::new(z2_re, z2_im))?;
        *out(result, "result")? = from_bc(z);
        Ok(BcgStatus::Ok)
    })
}

/// Evaluates an expression in the calculator language.
///
/// # Safety
/// `expr` must be a NUL-terminated string or NULL; `result` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_eval(expr: *const c_char, result: *mut BcgBicomplex) -> BcgStatus {
    guard(|| {
        let z = bcgauge::expr::eval_expr(str_arg(expr, "expr")?)?;
        *out(result, "result")? = from_bc(z);
        Ok(BcgStatus::Ok)
    })
}

/// Builds a vector from `len` entries.
///
/// # Safety
/// `entries` must point to `len` values; `vector` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_vector_new(entries: *const BcgBicomplex, len: usize, vector: *mut *mut BcgVector) -> BcgStatus {
    guard(|| {
        if entries.is_null() {
            return Err(Fail::Null("entries"));
        }
        let v = std::slice::from_raw_parts(entries, len).iter().map(to_bc).collect::<Result<Vec<_>, _>>()?;
        into_handle(BcgVector { inner: ModuleVector::new(v)? }, vector)
    })
}

/// Parses a vector from `{"dim":n,"entries":[...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string or NULL; `vector` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_vector_from_json(json: *const c_char, vector: *mut *mut BcgVector) -> BcgStatus {
    guard(|| into_handle(BcgVector { inner: parse_vector(str_arg(json, "json")?)? }, vector))
}

/// # Safety
/// `vector` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_vector_dim(vector: *const BcgVector, dim: *mut usize) -> BcgStatus {
    guard(|| {
        *out(dim, "dim")? = deref(vector, "vector")?.inner.dim();
        Ok(BcgStatus::Ok)
    })
}

/// # Safety
/// `vector` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bcg_vector_free(vector: *mut BcgVector) {
    if !vector.is_null() {
        drop(Box::from_raw(vector));
    }
}

/// Parses and validates a set description.
///
/// # Safety
/// `json` must be a NUL-terminated string or NULL; `set` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_set_from_json(json: *const c_char, set: *mut *mut BcgSet) -> BcgStatus {
    guard(|| into_handle(BcgSet { inner: parse_set(str_arg(json, "json")?)? }, set))
}

/// # Safety
/// `set` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bcg_set_free(set: *mut BcgSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// Handles must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_set_contains(set: *const BcgSet, x: *const BcgVector, contained: *mut bool) -> BcgStatus {
    guard(|| {
        *out(contained, "contained")? = deref(set, "set")?.inner.contains(&deref(x, "x")?.inner)?;
        Ok(BcgStatus::Ok)
    })
}

/// Closed-form Minkowski gauge.
///
/// # Safety
/// Handles must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_set_gauge(set: *const BcgSet, x: *const BcgVector, result: *mut BcgHyperbolic) -> BcgStatus {
    guard(|| {
        let g = gauge::gauge(&deref(set, "set")?.inner, &deref(x, "x")?.inner)?;
        *out(result, "result")? = from_hyp(g.value);
        Ok(BcgStatus::Ok)
    })
}

/// Gauge by componentwise bisection to width `tol`.
///
/// # Safety
/// Handles must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_set_gauge_bisect(
    set: *const BcgSet,
    x: *const BcgVector,
    tol: f64,
    result: *mut BcgHyperbolic,
) -> BcgStatus {
    guard(|| {
        let g = gauge::gauge_bisect(&deref(set, "set")?.inner, &deref(x, "x")?.inner, tol)?;
        *out(result, "result")? = from_hyp(g.value);
        Ok(BcgStatus::Ok)
    })
}

/// Parses a seminorm family `{"seminorms":[...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string or NULL; `family` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_family_from_json(json: *const c_char, family: *mut *mut BcgFamily) -> BcgStatus {
    guard(|| into_handle(BcgFamily { inner: parse_family(str_arg(json, "json")?)? }, family))
}

/// # Safety
/// `family` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bcg_family_free(family: *mut BcgFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// The D-metric truncated to `terms` terms; the remainder is at most `2^-terms`.
///
/// # Safety
/// Handles must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_family_dmetric(
    family: *const BcgFamily,
    x: *const BcgVector,
    y: *const BcgVector,
    terms: usize,
    result: *mut BcgHyperbolic,
) -> BcgStatus {
    guard(|| {
        let d = seminorm::dmetric(&deref(family, "family")?.inner, &deref(x, "x")?.inner, &deref(y, "y")?.inner, terms)?;
        *out(result, "result")? = from_hyp(d);
        Ok(BcgStatus::Ok)
    })
}

/// Runs a check suite (`scalar`, `sets`, `gauge`, `seminorm`, `metric` or
/// `all`) and stores the JSON-lines report in `report`. Returns
/// `BCG_STATUS_CHECK_FAILED` when any check fails; the report is written
/// either way.
///
/// # Safety
/// `suite` must be a NUL-terminated string or NULL; `report` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn bcg_run_checks(
    suite: *const c_char,
    seed: u64,
    samples: usize,
    dimension: usize,
    report: *mut *mut c_char,
) -> BcgStatus {
    guard(|| {
        let name = str_arg(suite, "suite")?;
        let suite: Suite = serde_json::from_value(serde_json::Value::String(name.to_string()))
            .map_err(|_| BcError::InvalidArgument(format!("unknown suite {name:?}")))?;
        let config = BatteryConfig { seed, samples, dimension, ..Default::default() };
        let r = battery::run_suite(&config, suite)?;
        let slot = out(report, "report")?;
        *slot = CString::new(r.to_jsonl()).expect("json has no nul").into_raw();
        Ok(if r.all_pass() { BcgStatus::Ok } else { BcgStatus::CheckFailed })
    })
}
