//! Exercises the C entry points through raw pointers, the way a foreign
//! caller would.

use phase_capi::*;
use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::ptr;

fn qubit_scenario_json() -> CString {
    // ρ = diag(w, 1−w) rotated to polar angle π/3, full z-precession
    let theta: f64 = PI / 3.0;
    let (c2, s2) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let w = 0.75;
    let p = [[c2 * c2, c2 * s2], [s2 * c2, s2 * s2]];
    let rho = |i: usize, j: usize| {
        let id = if i == j { 1.0 } else { 0.0 };
        w * p[i][j] + (1.0 - w) * (id - p[i][j])
    };
    let doc = serde_json::json!({
        "name": "ffi qubit",
        "rho0": [
            [[rho(0,0), 0.0], [rho(0,1), 0.0]],
            [[rho(1,0), 0.0], [rho(1,1), 0.0]],
        ],
        "evolution": {
            "type": "hamiltonian",
            "segments": [
                {"H": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
                 "dt": 2.0 * PI}
            ]
        },
        "steps": 4096
    });
    CString::new(doc.to_string()).unwrap()
}

unsafe fn parse_ok(json: &CString) -> *mut PhaseScenario {
    let mut handle = ptr::null_mut();
    let code = phase_scenario_parse(json.as_ptr(), &mut handle);
    assert_eq!(code, PHASE_OK, "{:?}", last_error());
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(phase_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(ptr).to_string_lossy().into_owned();
    phase_string_free(ptr);
    s
}

#[test]
fn version_is_nonempty() {
    let v = unsafe { CStr::from_ptr(phase_version()) };
    assert!(!v.to_bytes().is_empty());
}

#[test]
fn report_round_trip() {
    unsafe {
        let json = qubit_scenario_json();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        let code = phase_run_report_json(handle, 0, &mut out);
        assert_eq!(code, PHASE_OK, "{}", last_error());
        let body = take_string(out);
        let report: serde_json::Value = serde_json::from_str(&body).unwrap();
        let gamma = report["gamma"].as_f64().unwrap();
        let visibility = report["visibility"].as_f64().unwrap();
        assert!((gamma + PI / 2.0).abs() < 1e-6, "gamma = {gamma}");
        assert!((visibility - 0.5).abs() < 1e-6, "visibility = {visibility}");
        phase_scenario_free(handle);
    }
}

#[test]
fn steps_override_is_honored() {
    unsafe {
        let json = qubit_scenario_json();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        assert_eq!(phase_run_report_json(handle, 512, &mut out), PHASE_OK);
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["grid_steps"].as_u64().unwrap(), 512);
        phase_scenario_free(handle);
    }
}

#[test]
fn gauge_demo_with_explicit_windings() {
    unsafe {
        let json = qubit_scenario_json();
        let handle = parse_ok(&json);
        let windings: [i64; 2] = [1, 0];
        let mut out = ptr::null_mut();
        let code =
            phase_gauge_demo_json(handle, windings.as_ptr(), windings.len(), 1e-6, 0, &mut out);
        assert_eq!(code, PHASE_OK, "{}", last_error());
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(report["all_pass"].as_bool().unwrap());
        let shift = report["trials"][0]["measured_shift"].as_f64().unwrap();
        assert!((shift - 3.0 * PI / 2.0).abs() < 1e-6, "shift = {shift}");
        phase_scenario_free(handle);
    }
}

#[test]
fn gauge_demo_random_trials() {
    unsafe {
        let json = qubit_scenario_json();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        let code = phase_gauge_demo_random_json(handle, 5, 42, 1e-6, 0, &mut out);
        assert_eq!(code, PHASE_OK, "{}", last_error());
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["trials"].as_array().unwrap().len(), 5);
        assert!(report["all_pass"].as_bool().unwrap());
        phase_scenario_free(handle);
    }
}

#[test]
fn interferogram_csv_has_header() {
    unsafe {
        let json = qubit_scenario_json();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        assert_eq!(phase_interferogram_csv(handle, 0, &mut out), PHASE_OK);
        let csv = take_string(out);
        assert!(csv.starts_with("chi,intensity\n"));
        assert_eq!(csv.lines().count(), 361);
        phase_scenario_free(handle);
    }
}

#[test]
fn null_and_bad_inputs_report_argument_errors() {
    unsafe {
        let mut handle = ptr::null_mut();
        assert_eq!(
            phase_scenario_parse(ptr::null(), &mut handle),
            PHASE_ERR_ARGUMENT
        );
        assert!(last_error().contains("null"));
        let mut out = ptr::null_mut();
        assert_eq!(
            phase_run_report_json(ptr::null(), 0, &mut out),
            PHASE_ERR_ARGUMENT
        );
    }
}

#[test]
fn parse_failure_sets_validation_code_and_message() {
    unsafe {
        let bad = CString::new("{\"name\": ").unwrap();
        let mut handle = ptr::null_mut();
        assert_eq!(phase_scenario_parse(bad.as_ptr(), &mut handle), 2);
        assert!(!last_error().is_empty());
        assert!(handle.is_null());
    }
}

#[test]
fn degenerate_spectrum_maps_to_code_4() {
    unsafe {
        let doc = serde_json::json!({
            "name": "degenerate",
            "rho0": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
            "evolution": {
                "type": "hamiltonian",
                "segments": [{"H": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
                              "dt": 1.0}]
            }
        });
        let json = CString::new(doc.to_string()).unwrap();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        assert_eq!(phase_run_report_json(handle, 0, &mut out), 4);
        phase_scenario_free(handle);
    }
}

#[test]
fn noncyclic_path_maps_to_code_3() {
    unsafe {
        let theta: f64 = PI / 3.0;
        let (c2, s2) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let p = [[c2 * c2, c2 * s2], [s2 * c2, s2 * s2]];
        let rho = |i: usize, j: usize| 0.75 * p[i][j] + 0.25 * ((i == j) as u8 as f64 - p[i][j]);
        let doc = serde_json::json!({
            "name": "half turn",
            "rho0": [
                [[rho(0,0), 0.0], [rho(0,1), 0.0]],
                [[rho(1,0), 0.0], [rho(1,1), 0.0]],
            ],
            "evolution": {
                "type": "hamiltonian",
                "segments": [{"H": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
                              "dt": PI}]
            }
        });
        let json = CString::new(doc.to_string()).unwrap();
        let handle = parse_ok(&json);
        let mut out = ptr::null_mut();
        assert_eq!(phase_run_report_json(handle, 256, &mut out), 3);
        phase_scenario_free(handle);
    }
}
