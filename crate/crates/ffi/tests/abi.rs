use std::ffi::{c_char, CStr, CString};
use std::ptr;

use lenard_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = lenard_last_error();
    assert!(!p.is_null(), "no error recorded");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    lenard_string_free(s);
    out
}

#[test]
fn expression_round_trip_and_derivative() {
    unsafe {
        let mut e = ptr::null_mut();
        let st = lenard_expr_parse(c("x^2*y/(1 + y)").as_ptr(), c("x y").as_ptr(), &mut e);
        assert_eq!(st, LenardStatus::Ok);
        assert!(lenard_last_error().is_null());

        let mut d = ptr::null_mut();
        assert_eq!(lenard_expr_derivative(e, 0, &mut d), LenardStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(lenard_expr_to_string(d, &mut s), LenardStatus::Ok);
        assert_eq!(take(s), "2*x*y/(y + 1)");

        let mut zero = true;
        assert_eq!(lenard_expr_is_zero(d, &mut zero), LenardStatus::Ok);
        assert!(!zero);

        let mut bad = ptr::null_mut();
        assert_eq!(
            lenard_expr_derivative(e, 2, &mut bad),
            LenardStatus::OutOfRange
        );
        assert!(bad.is_null());
        assert!(last_error().contains("out of range"));

        lenard_expr_free(d);
        lenard_expr_free(e);
    }
}

#[test]
fn parse_errors_set_the_message() {
    unsafe {
        let mut e = ptr::null_mut();
        let st = lenard_expr_parse(c("x + z").as_ptr(), c("x y").as_ptr(), &mut e);
        assert_eq!(st, LenardStatus::Parse);
        assert!(e.is_null());
        assert!(last_error().contains('z'));
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(
            lenard_expr_parse(ptr::null(), c("x").as_ptr(), &mut e),
            LenardStatus::NullArgument
        );
        assert!(last_error().contains("source"));
        assert_eq!(
            lenard_expr_parse(c("x").as_ptr(), c("x").as_ptr(), ptr::null_mut()),
            LenardStatus::NullArgument
        );
        let bytes = [0xffu8, 0];
        assert_eq!(
            lenard_expr_parse(bytes.as_ptr().cast(), c("x").as_ptr(), &mut e),
            LenardStatus::InvalidUtf8
        );
        let mut z = false;
        assert_eq!(
            lenard_expr_is_zero(ptr::null(), &mut z),
            LenardStatus::NullArgument
        );
        // freeing null is a no-op
        lenard_expr_free(ptr::null_mut());
        lenard_spec_free(ptr::null_mut());
        lenard_report_free(ptr::null_mut());
        lenard_string_free(ptr::null_mut());
    }
}

#[test]
fn wdvv_residual_of_a_non_solution() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(
            lenard_wdvv_residual(c("A^3/6").as_ptr(), &mut w),
            LenardStatus::Ok
        );
        let mut s = ptr::null_mut();
        lenard_expr_to_string(w, &mut s);
        assert_eq!(take(s), "1");
        lenard_expr_free(w);
    }
}

#[test]
fn pipeline_report_through_handles() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(
            lenard_spec_from_potential(c("A^2*B/2").as_ptr(), &mut spec),
            LenardStatus::Ok
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            lenard_run_suite(spec, LenardSuite::Pipeline, 0, 0, &mut report),
            LenardStatus::Ok
        );
        let mut code = -1;
        assert_eq!(lenard_report_exit_code(report, &mut code), LenardStatus::Ok);
        assert_eq!(code, 0);
        let mut json = ptr::null_mut();
        assert_eq!(lenard_report_json(report, &mut json), LenardStatus::Ok);
        let json = take(json);
        assert!(json.contains("\"schema\": 1"));
        let mut text = ptr::null_mut();
        assert_eq!(lenard_report_text(report, &mut text), LenardStatus::Ok);
        assert!(take(text).starts_with("suite pipeline"));
        lenard_report_free(report);
        lenard_spec_free(spec);
    }
}

#[test]
fn inapplicable_suites_and_failing_axioms() {
    let z3 = "dim 3\ncoords A B C\nX = (0,0,1)\ntheta = (1,0,0)\nK1 = [[0,1,0],[0,0,1],[1,0,0]]\n";
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(
            lenard_spec_parse(c(z3).as_ptr(), &mut spec),
            LenardStatus::Ok
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            lenard_run_suite(spec, LenardSuite::Hm, 2, 0, &mut report),
            LenardStatus::Inapplicable
        );
        assert!(report.is_null());
        assert_eq!(
            lenard_run_suite(spec, LenardSuite::Frobenius, 0, 0, &mut report),
            LenardStatus::Inapplicable
        );
        assert!(last_error().contains("metric"));
        assert_eq!(
            lenard_run_suite(spec, LenardSuite::H1, 0, 0, &mut report),
            LenardStatus::Ok
        );
        let mut code = -1;
        lenard_report_exit_code(report, &mut code);
        assert_eq!(code, 0);
        lenard_report_free(report);
        lenard_spec_free(spec);

        let mut cubic = ptr::null_mut();
        lenard_spec_from_potential(c("A^3/6").as_ptr(), &mut cubic);
        let mut report = ptr::null_mut();
        assert_eq!(
            lenard_run_suite(cubic, LenardSuite::Wdvv, 0, 0, &mut report),
            LenardStatus::Ok
        );
        lenard_report_exit_code(report, &mut code);
        assert_eq!(code, 1);
        lenard_report_free(report);
        lenard_spec_free(cubic);
    }
}

#[test]
fn spec_load_distinguishes_io_and_parse() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(
            lenard_spec_load(c("/nonexistent/lenard.spec").as_ptr(), &mut spec),
            LenardStatus::Io
        );
        let bad =
            tempfile_with("dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, Z)\nK1 = [[1,0],[0,1]]\n");
        assert_eq!(
            lenard_spec_load(c(bad.to_str().unwrap()).as_ptr(), &mut spec),
            LenardStatus::Parse
        );
        assert!(last_error().contains("line 4, column 13"));
        std::fs::remove_file(bad).unwrap();
    }
}

fn tempfile_with(body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("lenard-ffi-{}.spec", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut e = ptr::null_mut();
        lenard_expr_parse(c("(").as_ptr(), c("x").as_ptr(), &mut e);
        assert!(!lenard_last_error().is_null());
        std::thread::spawn(|| assert!(lenard_last_error().is_null()))
            .join()
            .unwrap();
        assert!(!lenard_last_error().is_null());
    }
}
