#ifndef CYCBOUND_H
#define CYCBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; aligned with the command-line exit codes where the same
 * failure exists there.
 */
typedef enum CybStatus {
  CYB_STATUS_OK = 0,
  /**
   * Malformed input (JSON, token, or parameter string).
   */
  CYB_STATUS_PARSE = 2,
  /**
   * Constraint or engine failure.
   */
  CYB_STATUS_ENGINE = 3,
  /**
   * A witness or a verification claim failed to replay.
   */
  CYB_STATUS_VERIFY = 4,
  /**
   * A search budget ran out before an answer was established.
   */
  CYB_STATUS_BUDGET = 5,
  /**
   * Null pointer argument.
   */
  CYB_STATUS_NULL_POINTER = 6,
  /**
   * Internal panic (a bug; the message names the location when known).
   */
  CYB_STATUS_PANIC = 7,
} CybStatus;

/**
 * Opaque handle to a constructed code.
 */
typedef struct CybCode CybCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *cyb_version(void);

/**
 * Last error message for this thread, as a fresh allocation (free with
 * [`cyb_string_free`]); null when no error has been recorded.
 */
char *cyb_last_error(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library and
 * not yet freed.
 */
void cyb_string_free(char *s);

/**
 * Parse a code-specification JSON document
 * (`{"q":..,"n":..,"lambda":"..","defining_set":[..]}`) into a handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to a pointer slot.
 */
enum CybStatus cyb_code_parse(const char *json, struct CybCode **out);

/**
 * Free a code handle.
 *
 * # Safety
 * `code` must be null or a handle from [`cyb_code_parse`], not yet freed.
 */
void cyb_code_free(struct CybCode *code);

/**
 * Code length, or -1 on a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
int64_t cyb_code_length(const struct CybCode *code);

/**
 * Code dimension, or -1 on a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
int64_t cyb_code_dimension(const struct CybCode *code);

/**
 * Best defining-set bound as a JSON report.
 *
 * # Safety
 * `code` must be a live handle; `out` a valid slot.
 */
enum CybStatus cyb_best_bound_json(const struct CybCode *code, char **out);

/**
 * All solution vectors at (s, delta) as a JSON array.
 *
 * # Safety
 * `out` must be a valid slot.
 */
enum CybStatus cyb_solve_json(uint32_t s, uint32_t delta, uint64_t cap, char **out);

/**
 * Construct an LRC family member and classify it; the report carries the
 * code file, locality evidence, and classification.
 *
 * # Safety
 * `family` must be a valid NUL-terminated string; `out` a valid slot.
 */
enum CybStatus cyb_lrc_json(uint64_t q,
                            uint32_t delta,
                            uint32_t rho,
                            const char *family,
                            uint64_t exact_budget,
                            char **out);

/**
 * Verify a claimed bound over the abstraction set; the report lists one
 * replayable witness per vector.
 *
 * # Safety
 * `code` must be a live handle; `out` a valid slot.
 */
enum CybStatus cyb_verify_json(const struct CybCode *code,
                               uint32_t claimed,
                               uint64_t node_budget,
                               uint64_t cap,
                               uint64_t seed,
                               char **out);

/**
 * Exact minimum distance by exhaustive enumeration; fails with a budget
 * status when the projective class count exceeds `budget`.
 *
 * # Safety
 * `code` must be a live handle; `out_distance` a valid slot.
 */
enum CybStatus cyb_exact_distance(const struct CybCode *code,
                                  uint64_t budget,
                                  uint32_t *out_distance);

/**
 * Replay any witness document produced by this library or its tools.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string.
 */
enum CybStatus cyb_replay_json(const char *json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCBOUND_H */
