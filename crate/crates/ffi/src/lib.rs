//! C ABI for the flagqec toolkit.
//!
//! Objects cross the boundary as opaque handles; every fallible call
//! returns a status code and reports detail through
//! [`fq_last_error_message`]. Strings returned through out-parameters are
//! owned by the caller and must be released with [`fq_string_free`].

use flagqec::circuit::{cnot_depth, estimate_runtime, gate_counts};
use flagqec::experiment::{run_experiment, ExperimentConfig};
use flagqec::transpile::{route, CouplingGraph};
use flagqec::{Circuit, DeviceModel};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqStatus {
    FqOk = 0,
    FqInvalidArgument = 1,
    FqParseError = 2,
    FqConfigError = 3,
    FqNumericalError = 4,
    FqPanic = 5,
}

/// Opaque circuit handle.
pub struct FqCircuit {
    inner: Circuit,
}

/// Opaque device-model handle.
pub struct FqDevice {
    inner: DeviceModel,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
}

fn clear_error() {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
}

fn guarded<F: FnOnce() -> FqStatus>(f: F) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            FqStatus::FqPanic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, FqStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(FqStatus::FqInvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        FqStatus::FqInvalidArgument
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> FqStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            FqStatus::FqOk
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            FqStatus::FqNumericalError
        }
    }
}

/// Toolkit version as a static string; never freed.
#[no_mangle]
pub extern "C" fn fq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the most recent error message on this thread (caller frees).
///
/// # Safety
/// `out` must be a valid pointer to a writable `char *` slot.
#[no_mangle]
pub unsafe extern "C" fn fq_last_error_message(out: *mut *mut c_char) -> FqStatus {
    if out.is_null() {
        return FqStatus::FqInvalidArgument;
    }
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    give_string(message, out)
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must originate from this library and must not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse circuit text into an opaque handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_parse(
    text: *const c_char,
    out: *mut *mut FqCircuit,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if out.is_null() {
            set_error("null output pointer");
            return FqStatus::FqInvalidArgument;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match flagqec::qasm::parse(text) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(FqCircuit { inner: circuit }));
                FqStatus::FqOk
            }
            Err(e) => {
                set_error(e.to_string());
                FqStatus::FqParseError
            }
        }
    })
}

/// # Safety
/// `circuit` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_free(circuit: *mut FqCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Serialize a circuit to its canonical text form.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_serialize(
    circuit: *const FqCircuit,
    out: *mut *mut c_char,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if circuit.is_null() || out.is_null() {
            set_error("null argument");
            return FqStatus::FqInvalidArgument;
        }
        give_string(flagqec::qasm::serialize(&(*circuit).inner), out)
    })
}

/// Number of qubits, or -1 on a null handle.
///
/// # Safety
/// `circuit` must be a live handle (or null).
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_num_qubits(circuit: *const FqCircuit) -> i64 {
    if circuit.is_null() {
        return -1;
    }
    (*circuit).inner.num_qubits as i64
}

/// Longest two-qubit-gate dependency chain, or -1 on a null handle.
///
/// # Safety
/// `circuit` must be a live handle (or null).
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_cnot_depth(circuit: *const FqCircuit) -> i64 {
    if circuit.is_null() {
        return -1;
    }
    cnot_depth(&(*circuit).inner) as i64
}

/// Gate counts rendered as a JSON object string.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_gate_counts_json(
    circuit: *const FqCircuit,
    out: *mut *mut c_char,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if circuit.is_null() || out.is_null() {
            set_error("null argument");
            return FqStatus::FqInvalidArgument;
        }
        let counts = gate_counts(&(*circuit).inner);
        give_string(serde_json::to_string(&counts).unwrap_or_default(), out)
    })
}

/// Load a device model from JSON text.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_device_load_json(
    json: *const c_char,
    out: *mut *mut FqDevice,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if out.is_null() {
            set_error("null output pointer");
            return FqStatus::FqInvalidArgument;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match DeviceModel::from_json_str(text) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(FqDevice { inner: model }));
                FqStatus::FqOk
            }
            Err(e) => {
                set_error(e.to_string());
                FqStatus::FqConfigError
            }
        }
    })
}

/// # Safety
/// `device` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn fq_device_free(device: *mut FqDevice) {
    if !device.is_null() {
        drop(Box::from_raw(device));
    }
}

/// ASAP-schedule runtime estimate in microseconds.
///
/// # Safety
/// `circuit` and `device` must be live handles; `out_us` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_estimate_runtime_us(
    circuit: *const FqCircuit,
    device: *const FqDevice,
    out_us: *mut f64,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if circuit.is_null() || device.is_null() || out_us.is_null() {
            set_error("null argument");
            return FqStatus::FqInvalidArgument;
        }
        match estimate_runtime(&(*circuit).inner, &(*device).inner) {
            Ok(v) => {
                *out_us = v;
                FqStatus::FqOk
            }
            Err(e) => {
                set_error(e.to_string());
                FqStatus::FqNumericalError
            }
        }
    })
}

/// Route a circuit onto the device coupling map with the given initial
/// layout (logical index -> physical qubit, `layout_len` entries).
///
/// # Safety
/// Handles must be live; `layout` must point to `layout_len` readable
/// entries; `out` and `out_swap_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_route(
    circuit: *const FqCircuit,
    device: *const FqDevice,
    layout: *const usize,
    layout_len: usize,
    out: *mut *mut FqCircuit,
    out_swap_count: *mut usize,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if circuit.is_null() || device.is_null() || layout.is_null() || out.is_null() {
            set_error("null argument");
            return FqStatus::FqInvalidArgument;
        }
        let layout = std::slice::from_raw_parts(layout, layout_len);
        let graph = CouplingGraph::from_device(&(*device).inner);
        match route(&(*circuit).inner, &graph, layout) {
            Ok(routed) => {
                if !out_swap_count.is_null() {
                    *out_swap_count = routed.swap_count;
                }
                *out = Box::into_raw(Box::new(FqCircuit {
                    inner: routed.circuit,
                }));
                FqStatus::FqOk
            }
            Err(e) => {
                set_error(e.to_string());
                FqStatus::FqConfigError
            }
        }
    })
}

/// Run a full experiment from a JSON configuration and return the report
/// as JSON. The configuration schema matches the CLI config file format.
///
/// # Safety
/// `config_json` must be NUL-terminated; `out_report_json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fq_run_experiment_json(
    config_json: *const c_char,
    out_report_json: *mut *mut c_char,
) -> FqStatus {
    guarded(|| {
        clear_error();
        if out_report_json.is_null() {
            set_error("null output pointer");
            return FqStatus::FqInvalidArgument;
        }
        let text = match read_str(config_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let cfg: ExperimentConfig = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(format!("config: {e}"));
                return FqStatus::FqConfigError;
            }
        };
        match run_experiment(&cfg) {
            Ok(report) => give_string(report.to_json(), out_report_json),
            Err(e) => {
                set_error(e.to_string());
                match e.exit_code() {
                    2 => FqStatus::FqConfigError,
                    _ => FqStatus::FqNumericalError,
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let s = CStr::from_ptr(ptr).to_string_lossy().into_owned();
        fq_string_free(ptr);
        s
    }

    #[test]
    fn parse_metrics_serialize_roundtrip() {
        unsafe {
            let text = cstr("qreg q[2]; creg c[2]; h q[0]; cx q[0],q[1]; measure q[1] -> c[0];");
            let mut handle: *mut FqCircuit = ptr::null_mut();
            assert_eq!(fq_circuit_parse(text.as_ptr(), &mut handle), FqStatus::FqOk);
            assert_eq!(fq_circuit_num_qubits(handle), 2);
            assert_eq!(fq_circuit_cnot_depth(handle), 1);
            let mut counts: *mut c_char = ptr::null_mut();
            assert_eq!(
                fq_circuit_gate_counts_json(handle, &mut counts),
                FqStatus::FqOk
            );
            assert!(take_string(counts).contains("\"cx\":1"));
            let mut serialized: *mut c_char = ptr::null_mut();
            assert_eq!(
                fq_circuit_serialize(handle, &mut serialized),
                FqStatus::FqOk
            );
            let round = take_string(serialized);
            let text2 = cstr(&round);
            let mut handle2: *mut FqCircuit = ptr::null_mut();
            assert_eq!(fq_circuit_parse(text2.as_ptr(), &mut handle2), FqStatus::FqOk);
            assert_eq!(fq_circuit_cnot_depth(handle2), 1);
            fq_circuit_free(handle);
            fq_circuit_free(handle2);
        }
    }

    #[test]
    fn parse_error_reports_message() {
        unsafe {
            let text = cstr("qreg q[1]; foo q[0];");
            let mut handle: *mut FqCircuit = ptr::null_mut();
            assert_eq!(
                fq_circuit_parse(text.as_ptr(), &mut handle),
                FqStatus::FqParseError
            );
            let mut msg: *mut c_char = ptr::null_mut();
            assert_eq!(fq_last_error_message(&mut msg), FqStatus::FqOk);
            let message = take_string(msg);
            assert!(message.contains("foo"), "got: {message}");
        }
    }

    #[test]
    fn device_and_routing() {
        unsafe {
            let dev_json = cstr(flagqec::transpile::builtin_device("melbourne").unwrap());
            let mut dev: *mut FqDevice = ptr::null_mut();
            assert_eq!(fq_device_load_json(dev_json.as_ptr(), &mut dev), FqStatus::FqOk);
            let text = cstr("qreg q[2]; creg c[0]; cx q[0],q[1];");
            let mut circ: *mut FqCircuit = ptr::null_mut();
            assert_eq!(fq_circuit_parse(text.as_ptr(), &mut circ), FqStatus::FqOk);
            let layout = [0usize, 2usize];
            let mut routed: *mut FqCircuit = ptr::null_mut();
            let mut swaps = 0usize;
            assert_eq!(
                fq_route(circ, dev, layout.as_ptr(), 2, &mut routed, &mut swaps),
                FqStatus::FqOk
            );
            assert_eq!(swaps, 1);
            let mut us = 0.0f64;
            assert_eq!(fq_estimate_runtime_us(routed, dev, &mut us), FqStatus::FqOk);
            assert!(us > 0.0);
            fq_circuit_free(circ);
            fq_circuit_free(routed);
            fq_device_free(dev);
        }
    }

    #[test]
    fn experiment_from_json_config() {
        unsafe {
            let cfg = cstr(
                r#"{"experiment": "prep", "exact": true, "replicas": 1}"#,
            );
            let mut report: *mut c_char = ptr::null_mut();
            assert_eq!(
                fq_run_experiment_json(cfg.as_ptr(), &mut report),
                FqStatus::FqOk
            );
            let json = take_string(report);
            let value: serde_json::Value = serde_json::from_str(&json).unwrap();
            let fid = value["fidelity"]["mean"].as_f64().unwrap();
            assert!((fid - 1.0).abs() < 1e-6);
        }
    }
}
