//! C interface to `lenard`.
//!
//! Every entry point returns a [`LenardStatus`]. On failure a message is kept per thread and
//! can be read with [`lenard_last_error`] until the next call on that thread. Handles are opaque
//! and released with their `_free` function; strings handed out are released with
//! [`lenard_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use lenard::cli::{
    load_spec, parse_spec, potential_spec, run_suite, CliError, RunConfig, SpecErrorKind, SpecFile,
    Suite, SuiteReport,
};
use lenard::expr::{parse_expr, vars, RationalExpr};
use lenard::wdvv::{wdvv_residual, Prepotential};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenardStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Io = 4,
    /// The input is well formed but the requested operation does not apply to it.
    Inapplicable = 5,
    OutOfRange = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LenardSuite {
    H1 = 0,
    Hm = 1,
    F = 2,
    Frobenius = 3,
    Wdvv = 4,
    Pipeline = 5,
    Series = 6,
}

impl From<LenardSuite> for Suite {
    fn from(s: LenardSuite) -> Self {
        match s {
            LenardSuite::H1 => Suite::H1,
            LenardSuite::Hm => Suite::Hm,
            LenardSuite::F => Suite::F,
            LenardSuite::Frobenius => Suite::Frobenius,
            LenardSuite::Wdvv => Suite::Wdvv,
            LenardSuite::Pipeline => Suite::Pipeline,
            LenardSuite::Series => Suite::Series,
        }
    }
}

/// A canonical rational function.
pub struct LenardExpr(RationalExpr);

/// A parsed spec file or inline potential.
pub struct LenardSpec(SpecFile);

/// Outcome of one suite run.
pub struct LenardReport(SuiteReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (LenardStatus, String);

fn set_last_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LenardStatus {
    set_last_error(None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LenardStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(_) => {
            set_last_error(Some("internal failure".into()));
            LenardStatus::Internal
        }
    }
}

fn null(name: &str) -> Failure {
    (LenardStatus::NullArgument, format!("`{name}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        (
            LenardStatus::InvalidUtf8,
            format!("`{name}` is not valid UTF-8"),
        )
    })
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn put<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

fn cli_failure(e: CliError) -> Failure {
    let status = match &e {
        CliError::Spec { err, .. } if matches!(err.kind, SpecErrorKind::Io(_)) => LenardStatus::Io,
        CliError::Spec { .. } => LenardStatus::Parse,
        _ => LenardStatus::Inapplicable,
    };
    (status, e.to_string())
}

/// Message of the last failed call on this thread, or null. Owned by the library and valid
/// until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lenard_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lenard_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `source` over the whitespace-separated coordinate names in `coords`.
///
/// # Safety
/// `source` and `coords` are nul-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_expr_parse(
    source: *const c_char,
    coords: *const c_char,
    out: *mut *mut LenardExpr,
) -> LenardStatus {
    guard(|| {
        let source = str_arg(source, "source")?;
        let names: Vec<&str> = str_arg(coords, "coords")?.split_whitespace().collect();
        if out.is_null() {
            return Err(null("out"));
        }
        let e =
            parse_expr(source, &vars(&names)).map_err(|e| (LenardStatus::Parse, e.to_string()))?;
        put(out, "out", Box::into_raw(Box::new(LenardExpr(e))))
    })
}

/// Canonical text of an expression; free the result with `lenard_string_free`.
///
/// # Safety
/// `expr` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_expr_to_string(
    expr: *const LenardExpr,
    out: *mut *mut c_char,
) -> LenardStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, "out", c_string(e.0.to_string()))
    })
}

/// # Safety
/// `expr` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_expr_is_zero(
    expr: *const LenardExpr,
    out: *mut bool,
) -> LenardStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        put(out, "out", e.0.is_zero())
    })
}

/// Partial derivative with respect to the coordinate at `index`.
///
/// # Safety
/// `expr` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_expr_derivative(
    expr: *const LenardExpr,
    index: usize,
    out: *mut *mut LenardExpr,
) -> LenardStatus {
    guard(|| {
        let e = handle(expr, "expr")?;
        let n = e.0.vars().len();
        if index >= n {
            return Err((
                LenardStatus::OutOfRange,
                format!("coordinate index {index} out of range for {n} coordinates"),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        put(
            out,
            "out",
            Box::into_raw(Box::new(LenardExpr(e.0.derivative(index)))),
        )
    })
}

/// # Safety
/// `expr` is null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn lenard_expr_free(expr: *mut LenardExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// WDVV residual of a potential written in `A, B, C`.
///
/// # Safety
/// `potential` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_wdvv_residual(
    potential: *const c_char,
    out: *mut *mut LenardExpr,
) -> LenardStatus {
    guard(|| {
        let src = str_arg(potential, "potential")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = Prepotential::parse(src).map_err(|e| (LenardStatus::Parse, e.to_string()))?;
        put(
            out,
            "out",
            Box::into_raw(Box::new(LenardExpr(wdvv_residual(&f)))),
        )
    })
}

/// Parses spec-file text.
///
/// # Safety
/// `text` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_spec_parse(
    text: *const c_char,
    out: *mut *mut LenardSpec,
) -> LenardStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = parse_spec(text, None).map_err(|e| (LenardStatus::Parse, e.to_string()))?;
        put(out, "out", Box::into_raw(Box::new(LenardSpec(spec))))
    })
}

/// Reads and parses a spec file.
///
/// # Safety
/// `path` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_spec_load(
    path: *const c_char,
    out: *mut *mut LenardSpec,
) -> LenardStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = load_spec(Path::new(path)).map_err(|e| {
            let status = match e.kind {
                SpecErrorKind::Io(_) => LenardStatus::Io,
                _ => LenardStatus::Parse,
            };
            (status, format!("{path}: {e}"))
        })?;
        put(out, "out", Box::into_raw(Box::new(LenardSpec(spec))))
    })
}

/// A spec holding only a potential: an expression in `A, B, C`, or the path of a spec file.
///
/// # Safety
/// `potential` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_spec_from_potential(
    potential: *const c_char,
    out: *mut *mut LenardSpec,
) -> LenardStatus {
    guard(|| {
        let src = str_arg(potential, "potential")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = potential_spec(src).map_err(cli_failure)?;
        put(out, "out", Box::into_raw(Box::new(LenardSpec(spec))))
    })
}

/// # Safety
/// `spec` is null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn lenard_spec_free(spec: *mut LenardSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs a suite. `m` and `order` are ignored by suites that take no such parameter; zero
/// means unset. A report whose axioms fail is still `LENARD_STATUS_OK`; ask the report.
///
/// # Safety
/// `spec` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_run_suite(
    spec: *const LenardSpec,
    suite: LenardSuite,
    m: u32,
    order: u32,
    out: *mut *mut LenardReport,
) -> LenardStatus {
    guard(|| {
        let spec = handle(spec, "spec")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = RunConfig::new(suite.into());
        cfg.m = (m > 0).then_some(m as usize);
        cfg.order = (order > 0).then_some(order as usize);
        let report = run_suite(&spec.0, &cfg).map_err(cli_failure)?;
        put(out, "out", Box::into_raw(Box::new(LenardReport(report))))
    })
}

/// Exit code the command-line tool would use: 0 all pass, 1 some axiom fails.
///
/// # Safety
/// `report` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_report_exit_code(
    report: *const LenardReport,
    out: *mut i32,
) -> LenardStatus {
    guard(|| {
        let r = handle(report, "report")?;
        put(out, "out", r.0.exit_code())
    })
}

/// # Safety
/// `report` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_report_json(
    report: *const LenardReport,
    out: *mut *mut c_char,
) -> LenardStatus {
    guard(|| {
        let r = handle(report, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, "out", c_string(r.0.to_json()))
    })
}

/// # Safety
/// `report` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lenard_report_text(
    report: *const LenardReport,
    out: *mut *mut c_char,
) -> LenardStatus {
    guard(|| {
        let r = handle(report, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, "out", c_string(r.0.to_text()))
    })
}

/// # Safety
/// `report` is null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn lenard_report_free(report: *mut LenardReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
