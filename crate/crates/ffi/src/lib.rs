//! C interface to `rauzy-lab`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns an
//! [`RlStatus`]; on failure `rl_last_error` describes the problem until the
//! next failing call on the same thread. Strings returned to the caller are
//! released with `rl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rauzy_lab::cli::{dispatch, parse_lengths, parse_permutation};
use rauzy_lab::rauzy::{drive, first_positive_window, InductionTrace, Policy, Side};
use rauzy_lab::recovery::{recover, Mode, RecoveryReport};
use rauzy_lab::wire::{to_json, RecoveryInput, ReportJson, TraceJson};
use rauzy_lab::{Error, Iet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Reducible = 4,
    Tie = 5,
    StepCap = 6,
    ReturnOverflow = 7,
    InvalidProduct = 8,
    NotAdmissible = 9,
    OutOfRange = 10,
    BufferTooSmall = 11,
    Domain = 12,
    Panic = 13,
}

impl From<&Error> for RlStatus {
    fn from(e: &Error) -> RlStatus {
        match e {
            Error::Parse(_) | Error::InvalidPermutation(_) | Error::BadDiscriminant(_) => RlStatus::Parse,
            Error::Reducible(_) => RlStatus::Reducible,
            Error::Tie { .. } => RlStatus::Tie,
            Error::StepCapExceeded { .. } => RlStatus::StepCap,
            Error::ReturnOverflow { .. } => RlStatus::ReturnOverflow,
            Error::InvalidProduct { .. } => RlStatus::InvalidProduct,
            Error::NotAdmissible { .. } => RlStatus::NotAdmissible,
            _ => RlStatus::Domain,
        }
    }
}

/// An interval exchange transformation.
pub struct RlIet {
    inner: Iet,
}

/// A finite run of Rauzy induction.
pub struct RlTrace {
    inner: InductionTrace,
}

/// Candidates produced by permutation recovery.
pub struct RlReport {
    inner: RecoveryReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: RlStatus, msg: impl Into<String>) -> RlStatus {
    set_error(msg.into());
    status
}

fn fail_with(e: Error) -> RlStatus {
    fail(RlStatus::from(&e), format!("{}: {e}", e.code()))
}

fn guard(f: impl FnOnce() -> RlStatus) -> RlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(RlStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, RlStatus> {
    if p.is_null() {
        return Err(fail(RlStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(RlStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! try_lib {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail_with(e),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run the command-line front end on `argv` (including the program name)
/// and return its standard output. `exit_code` receives 0, 1 (usage) or 2
/// (domain error). On a usage error the output is empty and the message is
/// available from `rl_last_error`.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings; `exit_code`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_run(argc: c_int, argv: *const *const c_char, exit_code: *mut c_int) -> *mut c_char {
    let mut out = ptr::null_mut();
    let status = guard(|| {
        if argv.is_null() || exit_code.is_null() || argc < 0 {
            return fail(RlStatus::NullArgument, "argv and exit_code are required");
        }
        let mut args = Vec::with_capacity(argc as usize);
        for k in 0..argc as usize {
            args.push(try_status!(text(*argv.add(k), "argv entry")).to_owned());
        }
        let result = dispatch(args);
        if !result.stderr.is_empty() {
            set_error(result.stderr.trim_end().to_owned());
        }
        *exit_code = result.code;
        out = into_c_string(result.stdout);
        RlStatus::Ok
    });
    if status != RlStatus::Ok && !exit_code.is_null() {
        *exit_code = 1;
    }
    out
}

/// Build an IET from a permutation (`"[3,2,1]"` or permutation JSON) and
/// lengths (`"golden"`, `"silver"`, a JSON array of scalars or
/// `"p/q,p/q,..."`).
///
/// # Safety
/// String arguments must be valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_iet_new(pi: *const c_char, lambda: *const c_char, out: *mut *mut RlIet) -> RlStatus {
    guard(|| {
        if out.is_null() {
            return fail(RlStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let pi = try_lib!(parse_permutation(try_status!(text(pi, "pi"))));
        let lambda = try_lib!(parse_lengths(try_status!(text(lambda, "lambda")), pi.n()));
        let inner = try_lib!(Iet::new(pi, lambda));
        *out = Box::into_raw(Box::new(RlIet { inner }));
        RlStatus::Ok
    })
}

/// Number of intervals, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle from `rl_iet_new`.
#[no_mangle]
pub unsafe extern "C" fn rl_iet_n(t: *const RlIet) -> usize {
    t.as_ref().map_or(0, |t| t.inner.n())
}

/// # Safety
/// `t` must be null or a live handle from `rl_iet_new`.
#[no_mangle]
pub unsafe extern "C" fn rl_iet_free(t: *mut RlIet) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Run `steps` steps of induction under `policy` (`"right"`, `"left"`,
/// `"alternate"`, `"seed:N"` or `"R,L,..."`).
///
/// # Safety
/// `t` must be a live handle, `policy` a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_iet_drive(
    t: *const RlIet,
    policy: *const c_char,
    steps: usize,
    out: *mut *mut RlTrace,
) -> RlStatus {
    guard(|| {
        if out.is_null() {
            return fail(RlStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let Some(t) = t.as_ref() else {
            return fail(RlStatus::NullArgument, "iet is null");
        };
        let policy: Policy = try_lib!(try_status!(text(policy, "policy")).parse());
        let inner = try_lib!(drive(&t.inner, &policy, steps));
        *out = Box::into_raw(Box::new(RlTrace { inner }));
        RlStatus::Ok
    })
}

/// Number of steps, or 0 for a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_len(trace: *const RlTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.len())
}

/// Side (0 right, 1 left) and type (0 or 1) of step `k`, counted from 1.
///
/// # Safety
/// `trace` must be a live handle; `side` and `kind` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_step(trace: *const RlTrace, k: usize, side: *mut u8, kind: *mut u8) -> RlStatus {
    guard(|| {
        let (Some(t), false, false) = (trace.as_ref(), side.is_null(), kind.is_null()) else {
            return fail(RlStatus::NullArgument, "trace, side and kind are required");
        };
        if k == 0 || k > t.inner.len() {
            return fail(RlStatus::OutOfRange, format!("step {k} of {}", t.inner.len()));
        }
        let s = t.inner.steps[k - 1].kind;
        *side = match s.side {
            Side::Right => 0,
            Side::Left => 1,
        };
        *kind = s.kind;
        RlStatus::Ok
    })
}

/// Copy the `n x n` matrix of step `k` (from 1) row-major into `buf`, which
/// must hold `cap >= n * n` entries.
///
/// # Safety
/// `trace` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_matrix(trace: *const RlTrace, k: usize, buf: *mut i64, cap: usize) -> RlStatus {
    guard(|| {
        let (Some(t), false) = (trace.as_ref(), buf.is_null()) else {
            return fail(RlStatus::NullArgument, "trace and buf are required");
        };
        if k == 0 || k > t.inner.len() {
            return fail(RlStatus::OutOfRange, format!("step {k} of {}", t.inner.len()));
        }
        let m = &t.inner.steps[k - 1].matrix;
        let entries: Vec<i64> = m.to_rows().into_iter().flatten().collect();
        if cap < entries.len() {
            return fail(RlStatus::BufferTooSmall, format!("need {} entries", entries.len()));
        }
        ptr::copy_nonoverlapping(entries.as_ptr(), buf, entries.len());
        RlStatus::Ok
    })
}

/// Smallest `k >= j` whose window product `A_j ... A_k` is positive, or 0
/// when the trace ends first.
///
/// # Safety
/// `trace` must be a live handle and `out_k` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_first_positive_window(trace: *const RlTrace, j: usize, out_k: *mut usize) -> RlStatus {
    guard(|| {
        let (Some(t), false) = (trace.as_ref(), out_k.is_null()) else {
            return fail(RlStatus::NullArgument, "trace and out_k are required");
        };
        *out_k = try_lib!(first_positive_window(&t.inner, j)).unwrap_or(0);
        RlStatus::Ok
    })
}

/// Trace JSON, to be released with `rl_string_free`; null on a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_to_json(trace: *const RlTrace) -> *mut c_char {
    match trace.as_ref() {
        Some(t) => into_c_string(to_json(&TraceJson::from_trace(&t.inner))),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_trace_free(trace: *mut RlTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Recover candidate permutations from recovery input JSON (explicit
/// products or a trace). `mode` is `"weak"`, `"strict"` or null for the
/// input's own mode (strict by default).
///
/// # Safety
/// `input` must be a valid string, `mode` null or a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_recover(input: *const c_char, mode: *const c_char, out: *mut *mut RlReport) -> RlStatus {
    guard(|| {
        if out.is_null() {
            return fail(RlStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let parsed = try_lib!(RecoveryInput::parse(try_status!(text(input, "input"))));
        let (n, products, file_mode) = try_lib!(parsed.resolve(None));
        let mode = if mode.is_null() {
            file_mode.unwrap_or(Mode::Strict)
        } else {
            try_lib!(try_status!(text(mode, "mode")).parse())
        };
        let inner = try_lib!(recover(&products, n, mode));
        *out = Box::into_raw(Box::new(RlReport { inner }));
        RlStatus::Ok
    })
}

/// Number of candidates, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_report_candidate_count(report: *const RlReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.candidates.len())
}

/// Write candidate `idx` (from 0) as 1-based images into `buf`, which must
/// hold `cap >= n` entries.
///
/// # Safety
/// `report` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn rl_report_candidate(report: *const RlReport, idx: usize, buf: *mut usize, cap: usize) -> RlStatus {
    guard(|| {
        let (Some(r), false) = (report.as_ref(), buf.is_null()) else {
            return fail(RlStatus::NullArgument, "report and buf are required");
        };
        let Some(c) = r.inner.candidates.get(idx) else {
            return fail(RlStatus::OutOfRange, format!("candidate {idx} of {}", r.inner.candidates.len()));
        };
        let image = c.pi.image();
        if cap < image.len() {
            return fail(RlStatus::BufferTooSmall, format!("need {} entries", image.len()));
        }
        ptr::copy_nonoverlapping(image.as_ptr(), buf, image.len());
        RlStatus::Ok
    })
}

/// Report JSON, to be released with `rl_string_free`; null on a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_report_to_json(report: *const RlReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(to_json(&ReportJson::new(&r.inner))),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_report_free(report: *mut RlReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
