#ifndef PHASE_H
#define PHASE_H

/* Generated by cbindgen from phase-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define PHASE_OK 0

/**
 * Null pointer, invalid UTF-8, or an internal panic.
 */
#define PHASE_ERR_ARGUMENT 1

/**
 * Scenario failed to parse or validate.
 */
#define PHASE_ERR_VALIDATION 2

/**
 * The state does not return to itself at the end of the path.
 */
#define PHASE_ERR_NONCYCLIC 3

/**
 * Fully degenerate spectrum; no level structure to track.
 */
#define PHASE_ERR_DEGENERATE 4

/**
 * Filesystem or serialization failure.
 */
#define PHASE_ERR_IO 5

/**
 * Opaque parsed scenario.
 */
typedef struct PhaseScenario PhaseScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *phase_version(void);

/**
 * Message for the most recent error on this thread; valid until the next
 * failing call. Do not free.
 */
const char *phase_last_error_message(void);

/**
 * Parse and validate a scenario JSON document. On success stores a new
 * handle in `out`; release it with [`phase_scenario_free`].
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to a writable
 * pointer slot.
 */
int32_t phase_scenario_parse(const char *json, struct PhaseScenario **out);

/**
 * Release a scenario handle. Passing null is a no-op.
 *
 * # Safety
 * `handle` must come from [`phase_scenario_parse`] and not be freed twice.
 */
void phase_scenario_free(struct PhaseScenario *handle);

/**
 * Compute the phase report and store it in `out` as a JSON string.
 * `steps` = 0 uses the scenario's grid (or the built-in default).
 *
 * # Safety
 * `handle` must be a live scenario handle, `out` a writable pointer slot.
 */
int32_t phase_run_report_json(const struct PhaseScenario *handle, size_t steps, char **out);

/**
 * Run one gauge-comparison trial with explicit windings (one per retained
 * level) and store the comparison report in `out` as JSON.
 *
 * # Safety
 * `windings` must point to `winding_count` values; `handle` and `out` as
 * in [`phase_run_report_json`].
 */
int32_t phase_gauge_demo_json(const struct PhaseScenario *handle,
                              const int64_t *windings,
                              size_t winding_count,
                              double tolerance,
                              size_t steps,
                              char **out);

/**
 * Run `trial_count` seeded random gauge-comparison trials and store the
 * comparison report in `out` as JSON.
 *
 * # Safety
 * `handle` and `out` as in [`phase_run_report_json`].
 */
int32_t phase_gauge_demo_random_json(const struct PhaseScenario *handle,
                                     size_t trial_count,
                                     uint64_t seed,
                                     double tolerance,
                                     size_t steps,
                                     char **out);

/**
 * Sample the scenario's interference profile and store it in `out` as CSV
 * (`chi,intensity` header, 17 significant digits).
 *
 * # Safety
 * `handle` and `out` as in [`phase_run_report_json`].
 */
int32_t phase_interferogram_csv(const struct PhaseScenario *handle, size_t steps, char **out);

/**
 * Release a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `s` must come from a `phase_*` out-parameter and not be freed twice.
 */
void phase_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASE_H */
