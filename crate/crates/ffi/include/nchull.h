#ifndef NCHULL_H
#define NCHULL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every entry point.
 */
typedef enum {
  NCHULL_STATUS_OK = 0,
  NCHULL_STATUS_NULL_POINTER = 1,
  NCHULL_STATUS_INVALID_UTF8 = 2,
  NCHULL_STATUS_PARSE_ERROR = 3,
  NCHULL_STATUS_BUDGET_EXCEEDED = 4,
  NCHULL_STATUS_NO_BLANK_SIDE = 5,
  NCHULL_STATUS_OUT_OF_RANGE = 6,
  NCHULL_STATUS_BUFFER_TOO_SMALL = 7,
  NCHULL_STATUS_FAILED = 8,
  NCHULL_STATUS_PANIC = 9,
} NchullStatus;

typedef struct NchullLattice NchullLattice;

typedef struct NchullScd NchullScd;

typedef struct NchullTrees NchullTrees;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *nchull_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void nchull_string_free(char *s);

/**
 * Builds NC(P) for a shape such as `[1;1;1]` or `segment:5`.
 *
 * # Safety
 * `shape` must be a nul-terminated string; `out` must be writable.
 */
NchullStatus nchull_lattice_new(const char *shape, NchullLattice **out);

/**
 * # Safety
 * `lattice` must come from `nchull_lattice_new` or be null.
 */
void nchull_lattice_free(NchullLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_len(const NchullLattice *lattice, size_t *out);

/**
 * Number of elements of each rank, lowest rank first.
 *
 * # Safety
 * `lattice` must be a live handle; `buf` must hold `cap` entries.
 */
NchullStatus nchull_lattice_rank_vector(const NchullLattice *lattice,
                                        size_t *buf,
                                        size_t cap,
                                        size_t *out_len);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_is_graded(const NchullLattice *lattice, bool *out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_is_rank_symmetric(const NchullLattice *lattice, bool *out);

/**
 * Element `index` as a string like `0,2|1`; free with `nchull_string_free`.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_element(const NchullLattice *lattice, size_t index, char **out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_leq(const NchullLattice *lattice, size_t a, size_t b, bool *out);

/**
 * The lattice as JSON `{shape, n, elements, ranks, covers}`.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_lattice_to_json(const NchullLattice *lattice, char **out);

/**
 * Symmetric chain decomposition. `blank_side` is 1-based; 0 picks the
 * first blank side.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_scd_new(const NchullLattice *lattice, size_t blank_side, NchullScd **out);

/**
 * # Safety
 * `scd` must come from `nchull_scd_new` or be null.
 */
void nchull_scd_free(NchullScd *scd);

/**
 * # Safety
 * `scd` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_scd_num_chains(const NchullScd *scd, size_t *out);

/**
 * Element indices of chain `index`, bottom first.
 *
 * # Safety
 * `scd` must be a live handle; `buf` must hold `cap` entries.
 */
NchullStatus nchull_scd_chain(const NchullScd *scd,
                              size_t index,
                              size_t *buf,
                              size_t cap,
                              size_t *out_len);

/**
 * Whether the decomposition is disjoint, covering, saturated and centered.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
NchullStatus nchull_scd_verify(const NchullLattice *lattice, const NchullScd *scd, bool *out);

/**
 * All noncrossing spanning trees with convex geodesics.
 *
 * # Safety
 * `shape` must be a nul-terminated string; `out` must be writable.
 */
NchullStatus nchull_trees_new(const char *shape, NchullTrees **out);

/**
 * # Safety
 * `trees` must come from `nchull_trees_new` or be null.
 */
void nchull_trees_free(NchullTrees *trees);

/**
 * # Safety
 * `trees` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_trees_len(const NchullTrees *trees, size_t *out);

/**
 * Tree `index` as `0-1;1-2`; free with `nchull_string_free`.
 *
 * # Safety
 * `trees` must be a live handle; `out` must be writable.
 */
NchullStatus nchull_trees_get(const NchullTrees *trees, size_t index, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCHULL_H */
