#ifndef MINIBMC_H
#define MINIBMC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MinibmcCheck {
  MINIBMC_CHECK_BOUNDS_CHECK = 0,
  MINIBMC_CHECK_SIGNED_OVERFLOW_CHECK = 1,
  MINIBMC_CHECK_UNSIGNED_OVERFLOW_CHECK = 2,
  MINIBMC_CHECK_DIV_BY_ZERO_CHECK = 3,
  MINIBMC_CHECK_UNDEFINED_SHIFT_CHECK = 4,
  MINIBMC_CHECK_CONVERSION_CHECK = 5,
} MinibmcCheck;

/**
 * Status codes returned by every fallible function.
 */
typedef enum MinibmcError {
  MINIBMC_ERROR_OK = 0,
  MINIBMC_ERROR_NULL_POINTER = 1,
  MINIBMC_ERROR_INVALID_UTF8 = 2,
  MINIBMC_ERROR_INVALID_ARGUMENT = 3,
  /**
   * The sources do not parse, type check or link.
   */
  MINIBMC_ERROR_FRONTEND = 4,
  /**
   * A loop has no bound and does not stop on its own.
   */
  MINIBMC_ERROR_UNBOUNDED = 5,
  MINIBMC_ERROR_INDEX_OUT_OF_RANGE = 6,
  MINIBMC_ERROR_INTERNAL = 7,
  /**
   * A panic was caught at the boundary.
   */
  MINIBMC_ERROR_PANIC = 8,
} MinibmcError;

typedef enum MinibmcStatus {
  MINIBMC_STATUS_SUCCESS = 0,
  MINIBMC_STATUS_FAILURE = 1,
} MinibmcStatus;

typedef enum MinibmcVerdict {
  MINIBMC_VERDICT_SUCCESSFUL = 0,
  MINIBMC_VERDICT_FAILED = 1,
} MinibmcVerdict;

/**
 * Outcome of `minibmc_verify`.
 */
typedef struct MinibmcResult MinibmcResult;

/**
 * Sources and options of one verification run.
 */
typedef struct MinibmcSession MinibmcSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *minibmc_version(void);

/**
 * A new session with entry point `main`, 64-bit `long`, no checks and no
 * unwinding bound.
 */
struct MinibmcSession *minibmc_session_new(void);

void minibmc_session_free(struct MinibmcSession *session);

/**
 * Message of the last failed call on the session, or NULL. Borrowed from
 * the session.
 */
const char *minibmc_session_last_error(const struct MinibmcSession *session);

/**
 * Adds a translation unit; `name` is used in locations.
 */
enum MinibmcError minibmc_session_add_source(struct MinibmcSession *session,
                                             const char *name,
                                             const char *source);

enum MinibmcError minibmc_session_set_entry(struct MinibmcSession *session, const char *function);

/**
 * Bound for every loop; 0 removes the bound.
 */
enum MinibmcError minibmc_session_set_unwind(struct MinibmcSession *session, uint32_t bound);

enum MinibmcError minibmc_session_set_unwinding_assertions(struct MinibmcSession *session,
                                                           bool enabled);

enum MinibmcError minibmc_session_set_check(struct MinibmcSession *session,
                                            enum MinibmcCheck check,
                                            bool enabled);

/**
 * Width of `int` in bits: 16, 32 or 64.
 */
enum MinibmcError minibmc_session_set_int_width(struct MinibmcSession *session, uint32_t width);

/**
 * Compiles, links and checks the session's sources. On success `*out`
 * receives a result handle to be released with `minibmc_result_free`.
 */
enum MinibmcError minibmc_verify(struct MinibmcSession *session, struct MinibmcResult **out);

void minibmc_result_free(struct MinibmcResult *result);

enum MinibmcError minibmc_result_verdict(const struct MinibmcResult *result,
                                         enum MinibmcVerdict *verdict);

/**
 * Number of properties; 0 for a NULL handle.
 */
size_t minibmc_result_property_count(const struct MinibmcResult *result);

/**
 * Id of property `index`, borrowed from the result; NULL when out of range.
 */
const char *minibmc_result_property_id(const struct MinibmcResult *result, size_t index);

enum MinibmcError minibmc_result_property_status(const struct MinibmcResult *result,
                                                 size_t index,
                                                 enum MinibmcStatus *status);

/**
 * Number of solver calls made while deciding the properties.
 */
size_t minibmc_result_iterations(const struct MinibmcResult *result);

/**
 * The textual report, with traces when `traces` is set. Owned by the
 * caller; release with `minibmc_string_free`.
 */
char *minibmc_result_report(const struct MinibmcResult *result, bool traces);

/**
 * The report as a JSON document; release with `minibmc_string_free`.
 */
char *minibmc_result_json(const struct MinibmcResult *result);

void minibmc_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MINIBMC_H */
