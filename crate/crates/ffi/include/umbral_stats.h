/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef UMBRAL_STATS_H
#define UMBRAL_STATS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum {
  US_STATUS_OK = 0,
  // A required pointer argument was NULL.
  US_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  US_STATUS_INVALID_UTF8 = 2,
  // An argument was outside its documented range.
  US_STATUS_INVALID_ARGUMENT = 3,
  // A mathematical precondition failed (constant term, order, ...).
  US_STATUS_DOMAIN = 4,
  // Unknown catalog entry.
  US_STATUS_UNKNOWN_ENTRY = 5,
  // A rational or JSON string could not be parsed.
  US_STATUS_PARSE = 6,
  // A check ran and reported failure.
  US_STATUS_CHECK_FAILED = 7,
  // The engine panicked; this is a bug.
  US_STATUS_PANIC = 99,
} UsStatus;

// Binary series operations.
typedef enum {
  US_BINARY_OP_ADD = 0,
  US_BINARY_OP_SUB = 1,
  US_BINARY_OP_MUL = 2,
  US_BINARY_OP_DIV = 3,
  // `a(b(X))`; requires `b(0) = 0`.
  US_BINARY_OP_COMPOSE = 4,
} UsBinaryOp;

// Unary series operations.
typedef enum {
  // Requires `s(0) = 0`.
  US_UNARY_OP_EXP = 0,
  // Requires `s(0) = 1`.
  US_UNARY_OP_LOG = 1,
  // Requires `s(0) != 0`.
  US_UNARY_OP_RECIPROCAL = 2,
  // Compositional inverse; requires `s(0) = 0`, `s'(0) != 0`.
  US_UNARY_OP_INVERT = 3,
  US_UNARY_OP_DERIVATIVE = 4,
  US_UNARY_OP_INTEGRATE = 5,
} UsUnaryOp;

// Series attached to a statistics.
typedef enum {
  // Free energy `F = log z`.
  US_QUANTITY_FREE_ENERGY = 0,
  // Partition function `z`.
  US_QUANTITY_PARTITION_FUNCTION = 1,
  // Weight `w = X F'(X)`.
  US_QUANTITY_WEIGHT = 2,
  // Inverse weight `X(w)`.
  US_QUANTITY_X_OF_W = 3,
  // Deformation `φ(u) = X(u)/X'(u)`.
  US_QUANTITY_PHI = 4,
} UsQuantity;

// Truncated power series with exact rational coefficients.
typedef struct UsSeries UsSeries;

// Normalized statistics built from a free energy.
typedef struct UsStatistics UsStatistics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *us_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *us_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void us_string_free(char *s);

// Builds a series of order `n - 1` from `n` coefficient strings
// (`"p/q"`, integers or finite decimals).
//
// # Safety
// `coeffs` must point to `n` valid C strings.
UsStatus us_series_new(const char *const *coeffs, uintptr_t n, UsSeries **out);

// Parses `{"order": N, "coeffs": ["p/q", ...]}`.
//
// # Safety
// `json` must be a valid C string.
UsStatus us_series_from_json(const char *json, UsSeries **out);

// Releases a series. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void us_series_free(UsSeries *s);

// Truncation order, or 0 for NULL.
//
// # Safety
// `s` must be NULL or a live handle.
uintptr_t us_series_order(const UsSeries *s);

// Coefficient of `X^k` as a `"p/q"` string.
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_series_coeff(const UsSeries *s, uintptr_t k, char **out);

// `{"order": N, "coeffs": [...]}`.
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_series_to_json(const UsSeries *s, char **out);

// `a op b`, truncated to the smaller order.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
UsStatus us_series_binary(UsBinaryOp op, const UsSeries *a, const UsSeries *b, UsSeries **out);

// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_series_unary(UsUnaryOp op, const UsSeries *s, UsSeries **out);

// `s^r` for `s(0) = 1` and a rational exponent string.
//
// # Safety
// `s` must be a live handle, `r` a C string and `out` writable.
UsStatus us_series_pow(const UsSeries *s, const char *r, UsSeries **out);

// Catalog entry `name` at `order`. `params` is NULL or `"k=v,k=v"`.
//
// # Safety
// `name` must be a C string, `params` NULL or a C string, `out` writable.
UsStatus us_statistics_from_catalog(const char *name,
                                    const char *params,
                                    uintptr_t order,
                                    UsStatistics **out);

// Statistics with weight function `w` (`w(0) = 0`, `w'(0) = 1`).
//
// # Safety
// `w` must be a live handle and `out` writable.
UsStatus us_statistics_from_weight(const UsSeries *w, UsStatistics **out);

// Releases a statistics handle. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void us_statistics_free(UsStatistics *s);

// A fresh copy of one of the statistics' series.
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_statistics_series(const UsStatistics *s, UsQuantity which, UsSeries **out);

// The dual statistics (weight `X(w)`).
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_statistics_dual(const UsStatistics *s, UsStatistics **out);

// `H(X) = F - w log X` as `{"plain": ..., "log": ...}`.
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_statistics_entropy_json(const UsStatistics *s, char **out);

// Normalized φ-entropy `H⁰_φ(p)` of the statistics' deformation, as
// `{"plain": ..., "log": ...}`.
//
// # Safety
// `s` must be a live handle and `out` writable.
UsStatus us_statistics_phi_entropy_json(const UsStatistics *s, char **out);

// Checks `H(X) = H⁰_φ(w(X))` up to the span of `w`. `holds` receives 1 or 0.
//
// # Safety
// `s` must be a live handle and `holds` writable.
UsStatus us_main_theorem_check(const UsStatistics *s, int *holds);

// Runs a verification suite (`"all"`, `"duality"`, ...). Writes the JSON
// report to `report` (may be NULL) and returns [`UsStatus::CheckFailed`]
// if any property failed.
//
// # Safety
// `suite` must be a C string; `report` NULL or writable.
UsStatus us_verify(const char *suite, uintptr_t order, uint64_t seed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UMBRAL_STATS_H */
