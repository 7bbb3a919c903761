/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RAUZY_LAB_H
#define RAUZY_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_ARGUMENT = 1,
  RL_STATUS_INVALID_UTF8 = 2,
  RL_STATUS_PARSE = 3,
  RL_STATUS_REDUCIBLE = 4,
  RL_STATUS_TIE = 5,
  RL_STATUS_STEP_CAP = 6,
  RL_STATUS_RETURN_OVERFLOW = 7,
  RL_STATUS_INVALID_PRODUCT = 8,
  RL_STATUS_NOT_ADMISSIBLE = 9,
  RL_STATUS_OUT_OF_RANGE = 10,
  RL_STATUS_BUFFER_TOO_SMALL = 11,
  RL_STATUS_DOMAIN = 12,
  RL_STATUS_PANIC = 13,
} RlStatus;

// An interval exchange transformation.
typedef struct RlIet RlIet;

// Candidates produced by permutation recovery.
typedef struct RlReport RlReport;

// A finite run of Rauzy induction.
typedef struct RlTrace RlTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rl_version(void);

// Message for the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *rl_last_error(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void rl_string_free(char *s);

// Run the command-line front end on `argv` (including the program name)
// and return its standard output. `exit_code` receives 0, 1 (usage) or 2
// (domain error). On a usage error the output is empty and the message is
// available from `rl_last_error`.
//
// # Safety
// `argv` must point to `argc` valid NUL-terminated strings; `exit_code`
// must be writable.
char *rl_run(int argc, const char *const *argv, int *exit_code);

// Build an IET from a permutation (`"[3,2,1]"` or permutation JSON) and
// lengths (`"golden"`, `"silver"`, a JSON array of scalars or
// `"p/q,p/q,..."`).
//
// # Safety
// String arguments must be valid NUL-terminated strings; `out` must be writable.
enum RlStatus rl_iet_new(const char *pi, const char *lambda, struct RlIet **out);

// Number of intervals, or 0 for a null handle.
//
// # Safety
// `t` must be null or a live handle from `rl_iet_new`.
size_t rl_iet_n(const struct RlIet *t);

// # Safety
// `t` must be null or a live handle from `rl_iet_new`.
void rl_iet_free(struct RlIet *t);

// Run `steps` steps of induction under `policy` (`"right"`, `"left"`,
// `"alternate"`, `"seed:N"` or `"R,L,..."`).
//
// # Safety
// `t` must be a live handle, `policy` a valid string, `out` writable.
enum RlStatus rl_iet_drive(const struct RlIet *t,
                           const char *policy,
                           size_t steps,
                           struct RlTrace **out);

// Number of steps, or 0 for a null handle.
//
// # Safety
// `trace` must be null or a live handle.
size_t rl_trace_len(const struct RlTrace *trace);

// Side (0 right, 1 left) and type (0 or 1) of step `k`, counted from 1.
//
// # Safety
// `trace` must be a live handle; `side` and `kind` writable.
enum RlStatus rl_trace_step(const struct RlTrace *trace, size_t k, uint8_t *side, uint8_t *kind);

// Copy the `n x n` matrix of step `k` (from 1) row-major into `buf`, which
// must hold `cap >= n * n` entries.
//
// # Safety
// `trace` must be a live handle and `buf` valid for `cap` writes.
enum RlStatus rl_trace_matrix(const struct RlTrace *trace, size_t k, int64_t *buf, size_t cap);

// Smallest `k >= j` whose window product `A_j ... A_k` is positive, or 0
// when the trace ends first.
//
// # Safety
// `trace` must be a live handle and `out_k` writable.
enum RlStatus rl_trace_first_positive_window(const struct RlTrace *trace, size_t j, size_t *out_k);

// Trace JSON, to be released with `rl_string_free`; null on a null handle.
//
// # Safety
// `trace` must be null or a live handle.
char *rl_trace_to_json(const struct RlTrace *trace);

// # Safety
// `trace` must be null or a live handle.
void rl_trace_free(struct RlTrace *trace);

// Recover candidate permutations from recovery input JSON (explicit
// products or a trace). `mode` is `"weak"`, `"strict"` or null for the
// input's own mode (strict by default).
//
// # Safety
// `input` must be a valid string, `mode` null or a valid string, `out` writable.
enum RlStatus rl_recover(const char *input, const char *mode, struct RlReport **out);

// Number of candidates, or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
size_t rl_report_candidate_count(const struct RlReport *report);

// Write candidate `idx` (from 0) as 1-based images into `buf`, which must
// hold `cap >= n` entries.
//
// # Safety
// `report` must be a live handle and `buf` valid for `cap` writes.
enum RlStatus rl_report_candidate(const struct RlReport *report,
                                  size_t idx,
                                  size_t *buf,
                                  size_t cap);

// Report JSON, to be released with `rl_string_free`; null on a null handle.
//
// # Safety
// `report` must be null or a live handle.
char *rl_report_to_json(const struct RlReport *report);

// # Safety
// `report` must be null or a live handle.
void rl_report_free(struct RlReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAUZY_LAB_H */
