use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use rauzy_lab_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = rl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    rl_string_free(s);
    out
}

#[test]
fn golden_drive_through_handles() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(rl_iet_new(c("[2,1]").as_ptr(), c("golden").as_ptr(), &mut t), RlStatus::Ok);
        assert_eq!(rl_iet_n(t), 2);
        let mut trace = ptr::null_mut();
        assert_eq!(rl_iet_drive(t, c("right").as_ptr(), 3, &mut trace), RlStatus::Ok);
        assert_eq!(rl_trace_len(trace), 3);
        let types: Vec<u8> = (1..=3)
            .map(|k| {
                let (mut side, mut kind) = (9u8, 9u8);
                assert_eq!(rl_trace_step(trace, k, &mut side, &mut kind), RlStatus::Ok);
                assert_eq!(side, 0);
                kind
            })
            .collect();
        assert_eq!(types, vec![1, 0, 1]);
        let mut k = 0;
        assert_eq!(rl_trace_first_positive_window(trace, 1, &mut k), RlStatus::Ok);
        assert_eq!(k, 2);
        let mut m = [0i64; 4];
        assert_eq!(rl_trace_matrix(trace, 1, m.as_mut_ptr(), 4), RlStatus::Ok);
        assert_eq!(m, [1, 1, 0, 1]);
        assert_eq!(rl_trace_matrix(trace, 1, m.as_mut_ptr(), 3), RlStatus::BufferTooSmall);
        assert_eq!(rl_trace_matrix(trace, 4, m.as_mut_ptr(), 4), RlStatus::OutOfRange);
        let json = take(rl_trace_to_json(trace));
        assert!(json.starts_with("{\"pi0\""));
        rl_trace_free(trace);
        rl_iet_free(t);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(rl_iet_new(c("[2,1,3]").as_ptr(), c("golden").as_ptr(), &mut t), RlStatus::Reducible);
        assert!(t.is_null());
        assert!(last_error().starts_with("reducible"));
        assert_eq!(rl_iet_new(c("[2,1]").as_ptr(), c("nope").as_ptr(), &mut t), RlStatus::Parse);
        assert_eq!(rl_iet_new(ptr::null(), c("golden").as_ptr(), &mut t), RlStatus::NullArgument);
        assert_eq!(rl_iet_new(c("[2,1]").as_ptr(), c("3/2,1").as_ptr(), &mut t), RlStatus::Ok);
        let mut trace = ptr::null_mut();
        assert_eq!(rl_iet_drive(t, c("right").as_ptr(), 5, &mut trace), RlStatus::Tie);
        assert!(trace.is_null());
        rl_iet_free(t);
        rl_iet_free(ptr::null_mut());
        rl_trace_free(ptr::null_mut());
        rl_report_free(ptr::null_mut());
        rl_string_free(ptr::null_mut());
        assert_eq!(rl_iet_n(ptr::null()), 0);
    }
}

#[test]
fn recovery_from_trace_json() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(rl_iet_new(c("[3,2,1]").as_ptr(), c("golden").as_ptr(), &mut t), RlStatus::Ok);
        let mut trace = ptr::null_mut();
        assert_eq!(rl_iet_drive(t, c("alternate").as_ptr(), 20, &mut trace), RlStatus::Ok);
        let mut k = 0;
        assert_eq!(rl_trace_first_positive_window(trace, 1, &mut k), RlStatus::Ok);
        assert!(k > 0);
        let json = c(&take(rl_trace_to_json(trace)));
        let mut report = ptr::null_mut();
        assert_eq!(rl_recover(json.as_ptr(), c("strict").as_ptr(), &mut report), RlStatus::Ok);
        assert_eq!(rl_report_candidate_count(report), 1);
        let mut img = [0usize; 3];
        assert_eq!(rl_report_candidate(report, 0, img.as_mut_ptr(), 3), RlStatus::Ok);
        assert_eq!(img, [3, 2, 1]);
        assert_eq!(rl_report_candidate(report, 1, img.as_mut_ptr(), 3), RlStatus::OutOfRange);
        assert!(take(rl_report_to_json(report)).starts_with("{\"candidates\""));
        rl_report_free(report);
        let bad = c(r#"{"n":2,"products":[{"rows":2,"cols":2,"entries":[[2,0],[0,1]]}]}"#);
        assert_eq!(rl_recover(bad.as_ptr(), ptr::null(), &mut report), RlStatus::InvalidProduct);
        rl_trace_free(trace);
        rl_iet_free(t);
    }
}

#[test]
fn command_line_entry_point() {
    let args: Vec<CString> = ["rauzy-lab", "induce", "--pi", "[2,1]", "--lambda", "golden", "--steps", "3"]
        .iter()
        .map(|s| c(s))
        .collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut code: c_int = -1;
    let out = unsafe { take(rl_run(argv.len() as c_int, argv.as_ptr(), &mut code)) };
    assert_eq!(code, 0);
    assert!(out.contains("\"type\":1"));

    let args: Vec<CString> = ["rauzy-lab", "induce", "--bogus"].iter().map(|s| c(s)).collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let out = unsafe { take(rl_run(argv.len() as c_int, argv.as_ptr(), &mut code)) };
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(last_error().contains("--bogus"));
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
