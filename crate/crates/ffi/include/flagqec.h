#ifndef FLAGQEC_H
#define FLAGQEC_H

/* Generated by cbindgen from the flagqec-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  FQ_OK = 0,
  FQ_INVALID_ARGUMENT = 1,
  FQ_PARSE_ERROR = 2,
  FQ_CONFIG_ERROR = 3,
  FQ_NUMERICAL_ERROR = 4,
  FQ_PANIC = 5,
} FqStatus;

/**
 * Opaque circuit handle.
 */
typedef struct FqCircuit FqCircuit;

/**
 * Opaque device-model handle.
 */
typedef struct FqDevice FqDevice;

/**
 * Toolkit version as a static string; never freed.
 */
const char *fq_version(void);

/**
 * Copy of the most recent error message on this thread (caller frees).
 *
 * # Safety
 * `out` must be a valid pointer to a writable `char *` slot.
 */
FqStatus fq_last_error_message(char **out);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must originate from this library and must not have been freed.
 */
void fq_string_free(char *s);

/**
 * Parse circuit text into an opaque handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
FqStatus fq_circuit_parse(const char *text, FqCircuit **out);

/**
 * # Safety
 * `circuit` must be a live handle from this library (or null).
 */
void fq_circuit_free(FqCircuit *circuit);

/**
 * Serialize a circuit to its canonical text form.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
FqStatus fq_circuit_serialize(const FqCircuit *circuit, char **out);

/**
 * Number of qubits, or -1 on a null handle.
 *
 * # Safety
 * `circuit` must be a live handle (or null).
 */
int64_t fq_circuit_num_qubits(const FqCircuit *circuit);

/**
 * Longest two-qubit-gate dependency chain, or -1 on a null handle.
 *
 * # Safety
 * `circuit` must be a live handle (or null).
 */
int64_t fq_circuit_cnot_depth(const FqCircuit *circuit);

/**
 * Gate counts rendered as a JSON object string.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
FqStatus fq_circuit_gate_counts_json(const FqCircuit *circuit, char **out);

/**
 * Load a device model from JSON text.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
FqStatus fq_device_load_json(const char *json, FqDevice **out);

/**
 * # Safety
 * `device` must be a live handle from this library (or null).
 */
void fq_device_free(FqDevice *device);

/**
 * ASAP-schedule runtime estimate in microseconds.
 *
 * # Safety
 * `circuit` and `device` must be live handles; `out_us` must be writable.
 */
FqStatus fq_estimate_runtime_us(const FqCircuit *circuit, const FqDevice *device, double *out_us);

/**
 * Route a circuit onto the device coupling map with the given initial
 * layout (logical index -> physical qubit, `layout_len` entries).
 *
 * # Safety
 * Handles must be live; `layout` must point to `layout_len` readable
 * entries; `out` and `out_swap_count` must be writable.
 */
FqStatus fq_route(const FqCircuit *circuit,
                  const FqDevice *device,
                  const uintptr_t *layout,
                  uintptr_t layout_len,
                  FqCircuit **out,
                  uintptr_t *out_swap_count);

/**
 * Run a full experiment from a JSON configuration and return the report
 * as JSON. The configuration schema matches the CLI config file format.
 *
 * # Safety
 * `config_json` must be NUL-terminated; `out_report_json` must be
 * writable.
 */
FqStatus fq_run_experiment_json(const char *config_json, char **out_report_json);

#endif  /* FLAGQEC_H */
