//! C ABI over the perclab core.
//!
//! Every fallible function returns a [`PerclabStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and can
//! be read with [`perclab_last_error`]. Strings handed out by the library must
//! be released with [`perclab_string_free`], patches with [`perclab_patch_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use perclab::estimators::{est_piv, est_sphere_connection, est_two_point, McEstimate};
use perclab::experiments::{run, ExperimentConfig};
use perclab::graph::export_patch;
use perclab::percolation::{delta, sprinkle};
use perclab::{Error, GraphFamily, GraphPatch};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerclabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parameter = 3,
    Domain = 4,
    OutOfPatch = 5,
    Argument = 6,
    Truncation = 7,
    Criterion = 8,
    NonMonotone = 9,
    Invariant = 10,
    Parse = 11,
    Config = 12,
    Io = 13,
    Panic = 14,
}

/// A scalar Monte Carlo estimate with its 95% half-width.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerclabEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub replicas: u64,
}

impl From<&McEstimate> for PerclabEstimate {
    fn from(e: &McEstimate) -> Self {
        PerclabEstimate { mean: e.mean, ci_halfwidth: e.ci_halfwidth, replicas: e.replicas }
    }
}

/// Opaque handle to a patch.
pub struct PerclabPatch {
    inner: GraphPatch,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> PerclabStatus {
    match err {
        Error::Parameter(_) => PerclabStatus::Parameter,
        Error::Domain(_) => PerclabStatus::Domain,
        Error::OutOfPatch { .. } => PerclabStatus::OutOfPatch,
        Error::Argument(_) => PerclabStatus::Argument,
        Error::Truncation { .. } => PerclabStatus::Truncation,
        Error::Criterion(_) => PerclabStatus::Criterion,
        Error::NonMonotone(_) => PerclabStatus::NonMonotone,
        Error::Invariant(_) => PerclabStatus::Invariant,
        Error::Parse(_) => PerclabStatus::Parse,
        Error::Config(_) => PerclabStatus::Config,
        Error::Io(_) => PerclabStatus::Io,
    }
}

/// Failures inside the wrapper itself.
enum Fail {
    Core(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> PerclabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PerclabStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            PerclabStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            PerclabStatus::InvalidUtf8
        }
        Err(_) => {
            set_error("internal panic".into());
            PerclabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn patch_arg<'a>(p: *const PerclabPatch) -> Result<&'a GraphPatch, Fail> {
    p.as_ref().map(|p| &p.inner).ok_or(Fail::Null("patch"))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn perclab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn perclab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn perclab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds the ball of the given radius in a family such as "hypercubic(2)".
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_new(
    family: *const c_char,
    radius: usize,
    out: *mut *mut PerclabPatch,
) -> PerclabStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let fam: GraphFamily = str_arg(family, "family")?.parse()?;
        let inner = GraphPatch::build(fam, radius)?;
        *out = Box::into_raw(Box::new(PerclabPatch { inner }));
        Ok(())
    })
}

/// Releases a patch. NULL is ignored.
///
/// # Safety
/// `patch` must come from [`perclab_patch_new`] and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_free(patch: *mut PerclabPatch) {
    if !patch.is_null() {
        drop(Box::from_raw(patch));
    }
}

/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_vertex_count(patch: *const PerclabPatch, out: *mut usize) -> PerclabStatus {
    guard(|| {
        *out_arg(out, "out")? = patch_arg(patch)?.vertex_count();
        Ok(())
    })
}

/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_edge_count(patch: *const PerclabPatch, out: *mut usize) -> PerclabStatus {
    guard(|| {
        *out_arg(out, "out")? = patch_arg(patch)?.graph().edges().len();
        Ok(())
    })
}

/// |B_n| for n up to the patch radius.
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_growth(patch: *const PerclabPatch, n: usize, out: *mut u64) -> PerclabStatus {
    guard(|| {
        let g = patch_arg(patch)?.growth(n)?;
        *out_arg(out, "out")? = u64::try_from(g).unwrap_or(u64::MAX);
        Ok(())
    })
}

/// Graph distance from the root.
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_dist(patch: *const PerclabPatch, v: usize, out: *mut usize) -> PerclabStatus {
    guard(|| {
        let p = patch_arg(patch)?;
        p.check_vertex(v)?;
        *out_arg(out, "out")? = p.dist(v);
        Ok(())
    })
}

/// The patch in the text exchange format; free with [`perclab_string_free`].
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_patch_export(patch: *const PerclabPatch, out: *mut *mut c_char) -> PerclabStatus {
    guard(|| {
        let text = export_patch(patch_arg(patch)?);
        *out_arg(out, "out")? = into_c_string(text);
        Ok(())
    })
}

/// 1 - (1-p)^{e^lambda}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_sprinkle(p: f64, lambda: f64, out: *mut f64) -> PerclabStatus {
    guard(|| {
        *out_arg(out, "out")? = sprinkle(p, lambda)?;
        Ok(())
    })
}

/// The sprinkling amount between p and q.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_delta(p: f64, q: f64, out: *mut f64) -> PerclabStatus {
    guard(|| {
        *out_arg(out, "out")? = delta(p, q)?;
        Ok(())
    })
}

/// P_p(u <-> v) in the whole patch.
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_two_point(
    patch: *const PerclabPatch,
    p: f64,
    u: usize,
    v: usize,
    replicas: u64,
    seed: u64,
    out: *mut PerclabEstimate,
) -> PerclabStatus {
    guard(|| {
        let e = est_two_point(patch_arg(patch)?, p, &[u], &[v], None, replicas, seed)?;
        *out_arg(out, "out")? = (&e).into();
        Ok(())
    })
}

/// P_p(o <-> S_r).
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_sphere_connection(
    patch: *const PerclabPatch,
    p: f64,
    r: usize,
    replicas: u64,
    seed: u64,
    out: *mut PerclabEstimate,
) -> PerclabStatus {
    guard(|| {
        let e = est_sphere_connection(patch_arg(patch)?, p, r, replicas, seed)?;
        *out_arg(out, "out")? = (&e).into();
        Ok(())
    })
}

/// P_p(Piv[m, n]).
///
/// # Safety
/// `patch` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_piv(
    patch: *const PerclabPatch,
    p: f64,
    m: usize,
    n: usize,
    replicas: u64,
    seed: u64,
    out: *mut PerclabEstimate,
) -> PerclabStatus {
    guard(|| {
        let e = est_piv(patch_arg(patch)?, p, m, n, replicas, seed, None)?.estimate;
        *out_arg(out, "out")? = (&e).into();
        Ok(())
    })
}

/// Runs an experiment config file without writing output files; the records
/// come back as JSON lines. Free the string with [`perclab_string_free`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn perclab_run_config(path: *const c_char, out: *mut *mut c_char) -> PerclabStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let cfg = ExperimentConfig::load(Path::new(str_arg(path, "path")?))?;
        let mut text = String::new();
        for r in run(&cfg)? {
            text.push_str(&serde_json::to_string(&r).map_err(|e| Error::Io(e.to_string()))?);
            text.push('\n');
        }
        *out = into_c_string(text);
        Ok(())
    })
}
