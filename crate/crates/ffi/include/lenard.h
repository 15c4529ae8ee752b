/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef LENARD_H
#define LENARD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum LenardStatus {
  LENARD_STATUS_OK = 0,
  LENARD_STATUS_NULL_ARGUMENT = 1,
  LENARD_STATUS_INVALID_UTF8 = 2,
  LENARD_STATUS_PARSE = 3,
  LENARD_STATUS_IO = 4,
  // The input is well formed but the requested operation does not apply to it.
  LENARD_STATUS_INAPPLICABLE = 5,
  LENARD_STATUS_OUT_OF_RANGE = 6,
  LENARD_STATUS_INTERNAL = 7,
} LenardStatus;

typedef enum LenardSuite {
  LENARD_SUITE_H1 = 0,
  LENARD_SUITE_HM = 1,
  LENARD_SUITE_F = 2,
  LENARD_SUITE_FROBENIUS = 3,
  LENARD_SUITE_WDVV = 4,
  LENARD_SUITE_PIPELINE = 5,
  LENARD_SUITE_SERIES = 6,
} LenardSuite;

// A canonical rational function.
typedef struct LenardExpr LenardExpr;

// Outcome of one suite run.
typedef struct LenardReport LenardReport;

// A parsed spec file or inline potential.
typedef struct LenardSpec LenardSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the library and valid
// until the next call on the same thread.
const char *lenard_last_error(void);

// # Safety
// `s` is null or a string returned by this library that has not been freed.
void lenard_string_free(char *s);

// Parses `source` over the whitespace-separated coordinate names in `coords`.
//
// # Safety
// `source` and `coords` are nul-terminated strings; `out` is writable.
enum LenardStatus lenard_expr_parse(const char *source,
                                    const char *coords,
                                    struct LenardExpr **out);

// Canonical text of an expression; free the result with `lenard_string_free`.
//
// # Safety
// `expr` is a live handle; `out` is writable.
enum LenardStatus lenard_expr_to_string(const struct LenardExpr *expr, char **out);

// # Safety
// `expr` is a live handle; `out` is writable.
enum LenardStatus lenard_expr_is_zero(const struct LenardExpr *expr, bool *out);

// Partial derivative with respect to the coordinate at `index`.
//
// # Safety
// `expr` is a live handle; `out` is writable.
enum LenardStatus lenard_expr_derivative(const struct LenardExpr *expr,
                                         uintptr_t index,
                                         struct LenardExpr **out);

// # Safety
// `expr` is null or a live handle, which is invalid afterwards.
void lenard_expr_free(struct LenardExpr *expr);

// WDVV residual of a potential written in `A, B, C`.
//
// # Safety
// `potential` is a nul-terminated string; `out` is writable.
enum LenardStatus lenard_wdvv_residual(const char *potential, struct LenardExpr **out);

// Parses spec-file text.
//
// # Safety
// `text` is a nul-terminated string; `out` is writable.
enum LenardStatus lenard_spec_parse(const char *text, struct LenardSpec **out);

// Reads and parses a spec file.
//
// # Safety
// `path` is a nul-terminated string; `out` is writable.
enum LenardStatus lenard_spec_load(const char *path, struct LenardSpec **out);

// A spec holding only a potential: an expression in `A, B, C`, or the path of a spec file.
//
// # Safety
// `potential` is a nul-terminated string; `out` is writable.
enum LenardStatus lenard_spec_from_potential(const char *potential, struct LenardSpec **out);

// # Safety
// `spec` is null or a live handle, which is invalid afterwards.
void lenard_spec_free(struct LenardSpec *spec);

// Runs a suite. `m` and `order` are ignored by suites that take no such parameter; zero
// means unset. A report whose axioms fail is still `LENARD_STATUS_OK`; ask the report.
//
// # Safety
// `spec` is a live handle; `out` is writable.
enum LenardStatus lenard_run_suite(const struct LenardSpec *spec,
                                   enum LenardSuite suite,
                                   uint32_t m,
                                   uint32_t order,
                                   struct LenardReport **out);

// Exit code the command-line tool would use: 0 all pass, 1 some axiom fails.
//
// # Safety
// `report` is a live handle; `out` is writable.
enum LenardStatus lenard_report_exit_code(const struct LenardReport *report, int32_t *out);

// # Safety
// `report` is a live handle; `out` is writable.
enum LenardStatus lenard_report_json(const struct LenardReport *report, char **out);

// # Safety
// `report` is a live handle; `out` is writable.
enum LenardStatus lenard_report_text(const struct LenardReport *report, char **out);

// # Safety
// `report` is null or a live handle, which is invalid afterwards.
void lenard_report_free(struct LenardReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LENARD_H */
