#ifndef BRUHAT_H
#define BRUHAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define BRUHAT_OK 0

/**
 * A required pointer argument was null.
 */
#define BRUHAT_ERR_NULL -1

/**
 * A string argument was not valid UTF-8.
 */
#define BRUHAT_ERR_UTF8 -2

/**
 * Malformed input: bad field parameters, literals, JSON or group data.
 */
#define BRUHAT_ERR_INVALID -3

/**
 * More p-adic digits were needed than the field stores.
 */
#define BRUHAT_ERR_PRECISION -4

/**
 * A bounded audit produced a witness against admissibility.
 */
#define BRUHAT_ERR_NOT_ADMISSIBLE -5

/**
 * Word enumeration exceeded its cap; lower the length bound.
 */
#define BRUHAT_ERR_EXPLOSION -6

/**
 * A Rust panic was caught at the boundary.
 */
#define BRUHAT_ERR_PANIC -7

/**
 * A p-adic field `K` with fixed residue degree, ramification and precision.
 */
typedef struct BruhatField BruhatField;

/**
 * A tree of groups embedded in the tree of `K`, with matrix groups.
 */
typedef struct BruhatSpec BruhatSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bruhat_version(void);

/**
 * Message of the last failed call on this thread, or null. The returned
 * string is a copy owned by the caller.
 */
char *bruhat_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void bruhat_string_free(char *s);

/**
 * Creates the field with residue degree `f`, ramification `e` and
 * `precision` stored digits over Q_p.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
int32_t bruhat_field_new(uint64_t p, uint32_t f, uint32_t e, uint32_t precision, BruhatField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`bruhat_field_new`] not yet freed.
 */
void bruhat_field_free(BruhatField *field);

/**
 * Classifies the matrix literal `"a, b; c, d"` over `field` and writes the
 * report as JSON.
 *
 * # Safety
 * `field` must be a live handle, `matrix` a NUL-terminated string and
 * `out_json` valid for writes.
 */
int32_t bruhat_classify_json(const BruhatField *field, const char *matrix, char **out_json);

/**
 * Parses an embedding spec from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
int32_t bruhat_spec_from_json(const char *json, BruhatSpec **out);

/**
 * The free product `Z_n * Z_m` over the smallest unramified extension of Q_p
 * holding both roots of unity, mirrors at distance `2r`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
int32_t bruhat_spec_free_product(uint64_t p, uint64_t n, uint64_t m, uint32_t r, BruhatSpec **out);

/**
 * The dyadic triangle group `D_n *_{Z_2} Z_{2m}` with ramification `e`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
int32_t bruhat_spec_triangle(uint64_t n, uint64_t m, uint32_t e, BruhatSpec **out);

/**
 * # Safety
 * `spec` must be null or a live spec handle.
 */
void bruhat_spec_free(BruhatSpec *spec);

/**
 * The embedding spec in its JSON exchange form.
 *
 * # Safety
 * `spec` must be a live handle and `out_json` valid for writes.
 */
int32_t bruhat_spec_to_json(const BruhatSpec *spec, char **out_json);

/**
 * Bounded admissibility check. Zero `length` or `radius` selects the
 * default. `out_overall` (optional) receives 0 verified, 1 refuted,
 * 2 inconclusive.
 *
 * # Safety
 * `spec` must be a live handle, `out_json` valid for writes and
 * `out_overall` null or valid for writes.
 */
int32_t bruhat_check_json(const BruhatSpec *spec,
                          uint32_t length,
                          uint32_t radius,
                          char **out_json,
                          int32_t *out_overall);

/**
 * Branch report of the orbit tree: ends, cyclic stabilizer orders and genus.
 *
 * # Safety
 * As for [`bruhat_check_json`].
 */
int32_t bruhat_branch_report_json(const BruhatSpec *spec,
                                  uint32_t length,
                                  uint32_t radius,
                                  char **out_json);

/**
 * Check, audits, quotient and branch report in one JSON document, as printed
 * by the gallery commands. `out_dot` (optional) receives the orbit tree DOT,
 * or null when the check refuted the embedding spec.
 *
 * # Safety
 * `spec` must be a live handle, `out_json` valid for writes and `out_dot`
 * null or valid for writes.
 */
int32_t bruhat_pipeline_json(const BruhatSpec *spec,
                             uint32_t length,
                             uint32_t radius,
                             char **out_json,
                             char **out_dot);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRUHAT_H */
