//! C ABI over the phase-core pipeline.
//!
//! All entry points return an error code (`PHASE_OK` = 0 on success) and
//! communicate results through out-parameters. Scenario handles are opaque;
//! strings returned through out-parameters are NUL-terminated, UTF-8, and
//! owned by the caller, who must release them with [`phase_string_free`].
//! On failure the thread-local message from [`phase_last_error_message`]
//! describes what went wrong.

use phase_core::error::PhaseError;
use phase_core::interferometry::write_csv;
use phase_core::scenario::{
    gauge_demo, parse_scenario, random_windings, run_interferogram, run_report, Scenario,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Success.
pub const PHASE_OK: i32 = 0;
/// Null pointer, invalid UTF-8, or an internal panic.
pub const PHASE_ERR_ARGUMENT: i32 = 1;
/// Scenario failed to parse or validate.
pub const PHASE_ERR_VALIDATION: i32 = 2;
/// The state does not return to itself at the end of the path.
pub const PHASE_ERR_NONCYCLIC: i32 = 3;
/// Fully degenerate spectrum; no level structure to track.
pub const PHASE_ERR_DEGENERATE: i32 = 4;
/// Filesystem or serialization failure.
pub const PHASE_ERR_IO: i32 = 5;

/// Opaque parsed scenario.
pub struct PhaseScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL stripped");
    });
}

fn code_of(err: &PhaseError) -> i32 {
    err.exit_code()
}

fn fail(err: PhaseError) -> i32 {
    set_last_error(&err.to_string());
    code_of(&err)
}

/// Run `body` with panics converted to `PHASE_ERR_ARGUMENT`.
fn guarded(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_last_error("internal panic");
            PHASE_ERR_ARGUMENT
        }
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_last_error(&format!("{what} is null"));
        return Err(PHASE_ERR_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        PHASE_ERR_ARGUMENT
    })
}

unsafe fn scenario_ref<'a>(handle: *const PhaseScenario) -> Result<&'a Scenario, i32> {
    if handle.is_null() {
        set_last_error("scenario handle is null");
        return Err(PHASE_ERR_ARGUMENT);
    }
    Ok(&(*handle).inner)
}

fn emit_string(out: *mut *mut c_char, body: String) -> i32 {
    if out.is_null() {
        set_last_error("output pointer is null");
        return PHASE_ERR_ARGUMENT;
    }
    match CString::new(body) {
        Ok(cstr) => {
            unsafe { *out = cstr.into_raw() };
            PHASE_OK
        }
        Err(_) => {
            set_last_error("result contained an interior NUL");
            PHASE_ERR_IO
        }
    }
}

fn steps_option(steps: usize) -> Option<usize> {
    if steps == 0 {
        None
    } else {
        Some(steps)
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn phase_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent error on this thread; valid until the next
/// failing call. Do not free.
#[no_mangle]
pub extern "C" fn phase_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse and validate a scenario JSON document. On success stores a new
/// handle in `out`; release it with [`phase_scenario_free`].
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn phase_scenario_parse(
    json: *const c_char,
    out: *mut *mut PhaseScenario,
) -> i32 {
    guarded(|| {
        let text = match read_utf8(json, "scenario JSON") {
            Ok(t) => t,
            Err(code) => return code,
        };
        if out.is_null() {
            set_last_error("output pointer is null");
            return PHASE_ERR_ARGUMENT;
        }
        match parse_scenario(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PhaseScenario { inner }));
                PHASE_OK
            }
            Err(err) => fail(err),
        }
    })
}

/// Release a scenario handle. Passing null is a no-op.
///
/// # Safety
/// `handle` must come from [`phase_scenario_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn phase_scenario_free(handle: *mut PhaseScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Compute the phase report and store it in `out` as a JSON string.
/// `steps` = 0 uses the scenario's grid (or the built-in default).
///
/// # Safety
/// `handle` must be a live scenario handle, `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn phase_run_report_json(
    handle: *const PhaseScenario,
    steps: usize,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let scenario = match scenario_ref(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match run_report(scenario, steps_option(steps)) {
            Ok(report) => {
                let body = serde_json::to_string_pretty(&report).expect("report serializes");
                emit_string(out, body)
            }
            Err(err) => fail(err),
        }
    })
}

/// Run one gauge-comparison trial with explicit windings (one per retained
/// level) and store the comparison report in `out` as JSON.
///
/// # Safety
/// `windings` must point to `winding_count` values; `handle` and `out` as
/// in [`phase_run_report_json`].
#[no_mangle]
pub unsafe extern "C" fn phase_gauge_demo_json(
    handle: *const PhaseScenario,
    windings: *const i64,
    winding_count: usize,
    tolerance: f64,
    steps: usize,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let scenario = match scenario_ref(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        if windings.is_null() && winding_count > 0 {
            set_last_error("windings pointer is null");
            return PHASE_ERR_ARGUMENT;
        }
        let set = std::slice::from_raw_parts(windings, winding_count).to_vec();
        match gauge_demo(scenario, &[set], tolerance, steps_option(steps)) {
            Ok(report) => {
                let body = serde_json::to_string_pretty(&report).expect("report serializes");
                emit_string(out, body)
            }
            Err(err) => fail(err),
        }
    })
}

/// Run `trial_count` seeded random gauge-comparison trials and store the
/// comparison report in `out` as JSON.
///
/// # Safety
/// `handle` and `out` as in [`phase_run_report_json`].
#[no_mangle]
pub unsafe extern "C" fn phase_gauge_demo_random_json(
    handle: *const PhaseScenario,
    trial_count: usize,
    seed: u64,
    tolerance: f64,
    steps: usize,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let scenario = match scenario_ref(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let steps = steps_option(steps);
        let base = match run_report(scenario, steps) {
            Ok(report) => report,
            Err(err) => return fail(err),
        };
        let sets = random_windings(base.levels.len(), trial_count, seed);
        match gauge_demo(scenario, &sets, tolerance, steps) {
            Ok(report) => {
                let body = serde_json::to_string_pretty(&report).expect("report serializes");
                emit_string(out, body)
            }
            Err(err) => fail(err),
        }
    })
}

/// Sample the scenario's interference profile and store it in `out` as CSV
/// (`chi,intensity` header, 17 significant digits).
///
/// # Safety
/// `handle` and `out` as in [`phase_run_report_json`].
#[no_mangle]
pub unsafe extern "C" fn phase_interferogram_csv(
    handle: *const PhaseScenario,
    steps: usize,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let scenario = match scenario_ref(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match run_interferogram(scenario, steps_option(steps)) {
            Ok(run) => {
                let mut csv = Vec::new();
                write_csv(&run.interferogram, &mut csv).expect("in-memory write");
                emit_string(out, String::from_utf8(csv).expect("CSV is ASCII"))
            }
            Err(err) => fail(err),
        }
    })
}

/// Release a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must come from a `phase_*` out-parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn phase_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
