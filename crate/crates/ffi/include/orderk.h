#ifndef ORDERK_H
#define ORDERK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum OrderkStatus {
  ORDERK_STATUS_OK = 0,
  // A required pointer argument was null.
  ORDERK_STATUS_NULL_ARGUMENT = 1,
  // Unparsable input, bad UTF-8 or an invalid argument.
  ORDERK_STATUS_INVALID_INPUT = 2,
  // The input is not in general position.
  ORDERK_STATUS_DEGENERATE = 3,
  // An order or index outside its valid range.
  ORDERK_STATUS_OUT_OF_RANGE = 4,
  // Any other library error.
  ORDERK_STATUS_FAILED = 5,
  // A panic was caught at the boundary.
  ORDERK_STATUS_PANIC = 6,
} OrderkStatus;

// Opaque set of points with exact rational coordinates.
typedef struct OrderkPoints OrderkPoints;

// Opaque family of mosaics of orders `1..=K`.
typedef struct OrderkResult OrderkResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *orderk_last_error(void);

// Parses points from text: one point per line, whitespace-separated
// decimals or `p/q` rationals.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum OrderkStatus orderk_points_parse(const char *text, struct OrderkPoints **out);

// Builds `n` points in `R^d` from row-major numerators and denominators;
// coordinate `j` of point `i` is `num[i*d + j] / den[i*d + j]`.
//
// # Safety
// `num` and `den` must each hold `n * d` values; `out` must be valid.
enum OrderkStatus orderk_points_from_ratios(const int64_t *num,
                                            const int64_t *den,
                                            size_t n,
                                            size_t d,
                                            struct OrderkPoints **out);

// # Safety
// `points` must come from this library and not be used afterwards.
void orderk_points_free(struct OrderkPoints *points);

// Number of points; 0 for a null handle.
//
// # Safety
// `points` must be null or a live handle.
size_t orderk_points_len(const struct OrderkPoints *points);

// Ambient dimension; 0 for a null handle.
//
// # Safety
// `points` must be null or a live handle.
size_t orderk_points_dim(const struct OrderkPoints *points);

// Computes the mosaics of orders `1..=max_order`.
//
// # Safety
// `points` must be a live handle and `out` a valid pointer.
enum OrderkStatus orderk_compute(const struct OrderkPoints *points,
                                 size_t max_order,
                                 struct OrderkResult **out);

// # Safety
// `result` must come from this library and not be used afterwards.
void orderk_result_free(struct OrderkResult *result);

// Highest computed order; 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
size_t orderk_result_max_order(const struct OrderkResult *result);

// Vertex and d-cell counts of the order-`k` mosaic.
//
// # Safety
// `result` must be a live handle; `vertices` and `cells` valid pointers.
enum OrderkStatus orderk_result_counts(const struct OrderkResult *result,
                                       size_t k,
                                       size_t *vertices,
                                       size_t *cells);

// The order-`k` mosaic as JSON `{order, vertices, cells}`.
//
// # Safety
// `result` must be a live handle and `out` a valid pointer.
enum OrderkStatus orderk_result_mosaic_json(const struct OrderkResult *result,
                                            size_t k,
                                            char **out);

// The radius filtration of order `k` as JSON, cut at `alpha_sq` (a number,
// `p/q` or `inf`) unless it is null. `k` is at most the computed maximum
// order.
//
// # Safety
// `result` must be a live handle, `alpha_sq` null or a nul-terminated
// string, and `out` a valid pointer.
enum OrderkStatus orderk_result_alpha_json(const struct OrderkResult *result,
                                           size_t k,
                                           const char *alpha_sq,
                                           char **out);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not freed before.
void orderk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDERK_H */
