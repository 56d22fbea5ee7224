#ifndef SYMBREAK_H
#define SYMBREAK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_ARGUMENT = 2,
  SB_STATUS_OUT_OF_RANGE = 3,
  /**
   * A size limit was hit, or a result does not fit in 64 bits.
   */
  SB_STATUS_OVERFLOW = 4,
  SB_STATUS_PARSE = 5,
  SB_STATUS_INTERNAL = 6,
} SbStatus;

typedef enum SbOrderingKind {
  SB_ORDERING_KIND_LEX = 0,
  SB_ORDERING_KIND_REV_LEX = 1,
  SB_ORDERING_KIND_GRAY = 2,
  SB_ORDERING_KIND_SNAKE_LEX = 3,
} SbOrderingKind;

typedef enum SbMethod {
  SB_METHOD_LEADER_FULL = 0,
  SB_METHOD_LEADER_GENERATORS = 1,
  SB_METHOD_DOUBLE_LEX = 2,
} SbMethod;

/**
 * A simple ordering over binary vectors.
 */
typedef struct SbOrdering SbOrdering;

/**
 * A constraint problem with its symmetry group.
 */
typedef struct SbProblem SbProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sb_last_error_message(void);

/**
 * Creates an ordering over `n` binary variables. Snake-lex needs
 * `rows * cols == n`; other orderings ignore a zero shape.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SbStatus sb_ordering_new(enum SbOrderingKind kind,
                              size_t n,
                              size_t rows,
                              size_t cols,
                              struct SbOrdering **out);

/**
 * # Safety
 * `o` must come from [`sb_ordering_new`] and not be used afterwards.
 */
void sb_ordering_free(struct SbOrdering *o);

/**
 * Number of assignments in the ordering's space.
 *
 * # Safety
 * `o` must be a live handle and `out` valid for writes.
 */
enum SbStatus sb_ordering_size(const struct SbOrdering *o, uint64_t *out);

/**
 * # Safety
 * `o` must be a live handle, `bits_in` must point to `len` bytes and
 * `out` must be valid for writes.
 */
enum SbStatus sb_ordering_rank(const struct SbOrdering *o,
                               const uint8_t *bits_in,
                               size_t len,
                               uint64_t *out);

/**
 * Writes the assignment at position `k` into `bits_out[0..len]`; `len`
 * must equal the number of variables.
 *
 * # Safety
 * `o` must be a live handle and `bits_out` valid for `len` writes.
 */
enum SbStatus sb_ordering_unrank(const struct SbOrdering *o,
                                 uint64_t k,
                                 uint8_t *bits_out,
                                 size_t len);

/**
 * Writes -1, 0 or 1 as `a` precedes, equals or follows `b`.
 *
 * # Safety
 * `a` and `b` must point to `len` bytes each; `out` must be valid for
 * writes.
 */
enum SbStatus sb_ordering_compare(const struct SbOrdering *o,
                                  const uint8_t *a,
                                  const uint8_t *b,
                                  size_t len,
                                  int32_t *out);

/**
 * Parses a problem file. The group defaults to row and column swaps when
 * the problem has a shape, and to the trivial group otherwise.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum SbStatus sb_problem_from_json(const char *json, struct SbProblem **out);

/**
 * Replaces the problem's symmetry group with one read from a symmetry file.
 *
 * # Safety
 * `p` must be a live handle and `json` a NUL-terminated string.
 */
enum SbStatus sb_problem_set_symmetry_json(struct SbProblem *p, const char *json);

/**
 * # Safety
 * `p` must come from [`sb_problem_from_json`] and not be used afterwards.
 */
void sb_problem_free(struct SbProblem *p);

/**
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum SbStatus sb_problem_num_vars(const struct SbProblem *p, size_t *out);

/**
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum SbStatus sb_problem_count_solutions(const struct SbProblem *p, uint64_t *out);

/**
 * Posts a breaking set and reports the number of symmetry classes and of
 * surviving solutions, and whether every class keeps exactly one.
 *
 * # Safety
 * `p` must be a live handle; the out pointers must be valid for writes.
 */
enum SbStatus sb_break_count(const struct SbProblem *p,
                             enum SbOrderingKind kind,
                             enum SbMethod method,
                             uint64_t *out_orbits,
                             uint64_t *out_survivors,
                             bool *out_exact);

/**
 * Propagates `Gray(X, Y)` over `n` positions. Each mask byte lists the
 * allowed values of one variable: bit 0 for value 0, bit 1 for value 1.
 * On return the masks hold the fixpoint domains, or `*out_failed` is set.
 *
 * # Safety
 * `x_mask` and `y_mask` must each point to `n` writable bytes; the other
 * out pointers must be valid for writes.
 */
enum SbStatus sb_gray_propagate(size_t n,
                                bool strict,
                                uint8_t *x_mask,
                                uint8_t *y_mask,
                                bool *out_failed,
                                uint64_t *out_events);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMBREAK_H */
