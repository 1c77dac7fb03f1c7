#ifndef FROBTRACE_H
#define FROBTRACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NULL_POINTER = 1,
  FT_STATUS_INVALID_UTF8 = 2,
  FT_STATUS_PARSE = 3,
  FT_STATUS_COMPUTE = 4,
  FT_STATUS_RESOURCE_EXCEEDED = 5,
  FT_STATUS_NOT_FOUND = 6,
  FT_STATUS_PANIC = 7,
} FtStatus;

typedef struct FtIdeal FtIdeal;

typedef struct FtPoly FtPoly;

typedef struct FtRing FtRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Free with [`ft_string_free`].
 */
char *ft_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void ft_string_free(char *s);

/**
 * Polynomial ring over F_p. `vars` is comma-separated; `order` is "lex", "grevlex"
 * or NULL for grevlex.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum FtStatus ft_ring_new(uint64_t p, const char *vars, const char *order, struct FtRing **out);

/**
 * # Safety
 * `r` must be NULL or a live ring handle.
 */
void ft_ring_free(struct FtRing *r);

/**
 * # Safety
 * `ring` must be a live handle, `text` NUL-terminated, `out` writable.
 */
enum FtStatus ft_poly_parse(const struct FtRing *ring, const char *text, struct FtPoly **out);

/**
 * # Safety
 * `p` must be NULL or a live polynomial handle.
 */
void ft_poly_free(struct FtPoly *p);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum FtStatus ft_poly_to_string(const struct FtPoly *p, char **out);

/**
 * Ideal generated by `n` polynomials of `ring`.
 *
 * # Safety
 * `gens` must point to `n` live polynomial handles (or be NULL when `n` is 0).
 */
enum FtStatus ft_ideal_new(const struct FtRing *ring,
                           const struct FtPoly *const *gens,
                           size_t n,
                           struct FtIdeal **out);

/**
 * # Safety
 * `i` must be NULL or a live ideal handle.
 */
void ft_ideal_free(struct FtIdeal *i);

/**
 * Reduced Gröbner basis rendered as `⟨g1, g2⟩`.
 *
 * # Safety
 * `i` must be a live handle and `out` writable.
 */
enum FtStatus ft_ideal_to_string(const struct FtIdeal *i, char **out);

/**
 * # Safety
 * Handles must be live and `out` writable.
 */
enum FtStatus ft_ideal_contains(const struct FtIdeal *i, const struct FtPoly *f, bool *out);

/**
 * The Frobenius root `I^{[1/p^e]}`.
 *
 * # Safety
 * `i` must be live and `out` writable.
 */
enum FtStatus ft_frob_root(const struct FtIdeal *i, uint32_t e, struct FtIdeal **out);

/**
 * Fedder's criterion for `h` at the origin.
 *
 * # Safety
 * `h` must be live and `out` writable.
 */
enum FtStatus ft_fedder(const struct FtPoly *h, bool *out);

/**
 * Runs a session script. The transcript (text, or JSON lines when `json`) goes to
 * `out_transcript`, the CLI exit code to `out_exit`. A script error is reported
 * through `out_exit`, not the status.
 *
 * # Safety
 * `script` must be NUL-terminated; out-pointers must be writable.
 */
enum FtStatus ft_session_run(const char *script,
                             bool json,
                             char **out_transcript,
                             int32_t *out_exit);

/**
 * Runs a built-in example (or `"all"`), reporting checks passed and total.
 *
 * # Safety
 * `id` must be NUL-terminated; out-pointers must be writable.
 */
enum FtStatus ft_verify_builtin(const char *id,
                                char **out_report,
                                size_t *out_passed,
                                size_t *out_total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROBTRACE_H */
