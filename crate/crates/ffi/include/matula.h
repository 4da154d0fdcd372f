#ifndef MATULA_H
#define MATULA_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `MATULA_STATUS_OK` is zero.
 */
typedef enum MatulaStatus {
  MATULA_STATUS_OK = 0,
  MATULA_STATUS_NULL_POINTER = 1,
  MATULA_STATUS_INVALID_UTF8 = 2,
  MATULA_STATUS_PARSE_INT = 3,
  MATULA_STATUS_UNBALANCED = 4,
  MATULA_STATUS_NON_CANONICAL = 5,
  MATULA_STATUS_NOT_PRIME = 6,
  MATULA_STATUS_DOMAIN = 7,
  MATULA_STATUS_INDEX_OVERFLOW = 8,
  MATULA_STATUS_FACTORIZATION_FAILURE = 9,
  MATULA_STATUS_CAPACITY = 10,
  MATULA_STATUS_CONFIG = 11,
  MATULA_STATUS_PANIC = 12,
} MatulaStatus;

/**
 * Prime tables shared by the conversion functions. Safe to use from
 * several threads at once.
 */
typedef struct MatulaBackend MatulaBackend;

/**
 * A rooted tree.
 */
typedef struct MatulaTree MatulaTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a backend. Zero for either limit selects the default.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum MatulaStatus matula_backend_new(uint64_t sieve_limit,
                                     uint64_t hard_ceiling,
                                     struct MatulaBackend **out);

/**
 * # Safety
 * `backend` must come from [`matula_backend_new`] and not be used again.
 */
void matula_backend_free(struct MatulaBackend *backend);

/**
 * Codeword of the decimal `n`.
 *
 * # Safety
 * Pointers must be valid; `n` must be NUL-terminated.
 */
enum MatulaStatus matula_encode(const struct MatulaBackend *backend,
                                const char *n,
                                char **out_word);

/**
 * Decimal number spelled by `word`. With `strict`, sibling blocks must
 * appear in canonical order.
 *
 * # Safety
 * Pointers must be valid; `word` must be NUL-terminated.
 */
enum MatulaStatus matula_decode(const struct MatulaBackend *backend,
                                const char *word,
                                bool strict,
                                char **out_n);

/**
 * g of the decimal `n`.
 *
 * # Safety
 * Pointers must be valid; `n` must be NUL-terminated.
 */
enum MatulaStatus matula_g(const struct MatulaBackend *backend, const char *n, uint64_t *out);

/**
 * G(n) = g(1) + ... + g(n).
 *
 * # Safety
 * `out` must be valid.
 */
enum MatulaStatus matula_big_g(uint64_t n, uint64_t *out);

/**
 * Canonical tree of the decimal `n`.
 *
 * # Safety
 * Pointers must be valid; `n` must be NUL-terminated.
 */
enum MatulaStatus matula_tree_from_number(const struct MatulaBackend *backend,
                                          const char *n,
                                          struct MatulaTree **out);

/**
 * Tree spelled by `word`.
 *
 * # Safety
 * Pointers must be valid; `word` must be NUL-terminated.
 */
enum MatulaStatus matula_tree_from_word(const struct MatulaBackend *backend,
                                        const char *word,
                                        bool strict,
                                        struct MatulaTree **out);

/**
 * Matula number of `tree` as a decimal string.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_number(const struct MatulaBackend *backend,
                                     const struct MatulaTree *tree,
                                     char **out_n);

/**
 * Serializes `tree` with its children in their stored order.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_word(const struct MatulaTree *tree, char **out_word);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_edge_count(const struct MatulaTree *tree, size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_is_planted(const struct MatulaTree *tree, bool *out);

/**
 * Joins the roots of `a` and `b`; the Matula number of the result is the
 * product of theirs.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_merge(const struct MatulaTree *a,
                                    const struct MatulaTree *b,
                                    struct MatulaTree **out);

/**
 * Hangs `tree` below a new root.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_plant(const struct MatulaTree *tree, struct MatulaTree **out);

/**
 * Rooted isomorphism: child order does not matter.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MatulaStatus matula_tree_equal(const struct MatulaTree *a,
                                    const struct MatulaTree *b,
                                    bool *out);

/**
 * # Safety
 * `tree` must come from this library and not be used again.
 */
void matula_tree_free(struct MatulaTree *tree);

/**
 * # Safety
 * `s` must be a string returned by this library, not freed before.
 */
void matula_string_free(char *s);

/**
 * Message for the last failure on this thread. Valid until the next call
 * into the library from the same thread. Empty if nothing failed yet.
 */
const char *matula_last_error(void);

/**
 * Static name of a status code.
 */
const char *matula_status_name(enum MatulaStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATULA_H */
