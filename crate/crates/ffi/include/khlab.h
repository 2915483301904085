#ifndef KHLAB_H
#define KHLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KhStatus {
  KH_STATUS_OK = 0,
  KH_STATUS_NULL_POINTER = 1,
  KH_STATUS_INVALID_UTF8 = 2,
  KH_STATUS_PARSE_ERROR = 3,
  KH_STATUS_INVALID_INPUT = 4,
  KH_STATUS_RESOURCE_LIMIT = 5,
  KH_STATUS_OUT_OF_RANGE = 6,
  KH_STATUS_VERIFY_FAILED = 7,
  KH_STATUS_PANIC = 8,
} KhStatus;

/**
 * A link diagram: a braid closure or a signed PD code.
 */
typedef struct KhDiagram KhDiagram;

/**
 * A computed bigraded homology table.
 */
typedef struct KhTable KhTable;

/**
 * One table entry. Torsion orders are read with [`khlab_table_torsion`].
 */
typedef struct KhEntry {
  int32_t i;
  int32_t j;
  uint64_t rank;
  size_t torsion_count;
} KhEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static version string of the library.
 */
const char *khlab_version(void);

/**
 * Copy of the last error on this thread, or null if the last call succeeded.
 * Free with [`khlab_string_free`].
 */
char *khlab_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void khlab_string_free(char *s);

/**
 * Parses a braid word such as `"p=4; 1 3 -2"` and builds its closure.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum KhStatus khlab_diagram_from_braid(const char *text, struct KhDiagram **out);

/**
 * Parses signed PD text, one `X[a,b,c,d] +|-` record per line.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum KhStatus khlab_diagram_from_pd(const char *text, struct KhDiagram **out);

/**
 * # Safety
 * `d` must come from a `khlab_diagram_from_*` call and not be used afterwards.
 */
void khlab_diagram_free(struct KhDiagram *d);

/**
 * Crossing count, positive and negative crossing counts, and link components.
 *
 * # Safety
 * `d` must be a live diagram handle; each out-pointer may be null to skip it.
 */
enum KhStatus khlab_diagram_info(const struct KhDiagram *d,
                                 size_t *crossings,
                                 size_t *n_plus,
                                 size_t *n_minus,
                                 size_t *components);

/**
 * Integral homology table with the normalised bigrading. Fails with
 * `KH_STATUS_RESOURCE_LIMIT` when the diagram has more than `cap` crossings.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be writable.
 */
enum KhStatus khlab_homology(const struct KhDiagram *d, size_t cap, struct KhTable **out);

/**
 * # Safety
 * `t` must come from [`khlab_homology`] and not be used afterwards.
 */
void khlab_table_free(struct KhTable *t);

/**
 * Number of nonzero entries.
 *
 * # Safety
 * `t` must be a live table handle; `out` must be writable.
 */
enum KhStatus khlab_table_len(const struct KhTable *t, size_t *out);

/**
 * Entry `index`, in `(i, j)` order.
 *
 * # Safety
 * `t` must be a live table handle; `out` must be writable.
 */
enum KhStatus khlab_table_entry(const struct KhTable *t, size_t index, struct KhEntry *out);

/**
 * Torsion order `k` of entry `index`.
 *
 * # Safety
 * `t` must be a live table handle; `out` must be writable.
 */
enum KhStatus khlab_table_torsion(const struct KhTable *t, size_t index, size_t k, uint64_t *out);

/**
 * The table as a JSON array of `{"i","j","rank","torsion"}` objects.
 *
 * # Safety
 * `t` must be a live table handle; `out` must be writable.
 */
enum KhStatus khlab_table_to_json(const struct KhTable *t, char **out);

/**
 * Jones polynomial (unnormalised, unknot = q + q^-1) as a JSON object
 * mapping exponents to coefficients.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be writable.
 */
enum KhStatus khlab_jones_json(const struct KhDiagram *d, size_t cap, char **out);

/**
 * Runs the positive-braid structure checks on a diagram built from a braid.
 * The JSON report is written to `out` whenever the checks ran, including
 * when the result is `KH_STATUS_VERIFY_FAILED`.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be writable.
 */
enum KhStatus khlab_verify_json(const struct KhDiagram *d, size_t cap, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KHLAB_H */
