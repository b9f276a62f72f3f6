#ifndef UA_H
#define UA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UaMode {
  /**
   * Complete for congruence-distributive varieties.
   */
  UA_MODE_CD = 0,
  /**
   * Search powers up to the given bound; may answer unknown.
   */
  UA_MODE_REFUTE = 1,
} UaMode;

/**
 * Status codes returned by every function.
 */
typedef enum UaStatus {
  UA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  UA_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  UA_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed algebra, term, witness or other input.
   */
  UA_STATUS_INVALID_INPUT = 3,
  /**
   * A size or enumeration cap was hit.
   */
  UA_STATUS_CAP_EXCEEDED = 4,
  /**
   * The congruence-distributive procedure does not apply; use refute mode.
   */
  UA_STATUS_CD_CERTIFICATION_FAILED = 5,
  /**
   * The library panicked. This is a bug.
   */
  UA_STATUS_INTERNAL = 6,
} UaStatus;

typedef enum UaTheorem {
  UA_THEOREM_WEAKLY_MALTSEV = 0,
  UA_THEOREM_REG_MALTSEV = 1,
} UaTheorem;

typedef enum UaVerdict {
  UA_VERDICT_YES = 0,
  UA_VERDICT_NO = 1,
  UA_VERDICT_UNKNOWN = 2,
} UaVerdict;

/**
 * Opaque handle to a finite algebra.
 */
typedef struct UaAlgebra UaAlgebra;

/**
 * Opaque handle to the precomputed free algebras of the variety generated by
 * an algebra. Building one is the expensive step of the Mal'tsev queries.
 */
typedef struct UaCore UaCore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *ua_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ua_string_free(char *s);

/**
 * Look up a builtin algebra such as `lattice2`, `n5`, `m3`, `z2xor` or `set2`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UaStatus ua_algebra_builtin(const char *name, struct UaAlgebra **out);

/**
 * Parse an algebra from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UaStatus ua_algebra_from_json(const char *json, struct UaAlgebra **out);

/**
 * # Safety
 * `alg` must be null or a handle from this library not yet freed.
 */
void ua_algebra_free(struct UaAlgebra *alg);

/**
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum UaStatus ua_algebra_size(const struct UaAlgebra *alg, size_t *out);

/**
 * JSON form of the algebra. Free the result with `ua_string_free`.
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum UaStatus ua_algebra_to_json(const struct UaAlgebra *alg, char **out);

/**
 * Number of elements of the free algebra on `n` generators in the variety
 * generated by `alg`.
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum UaStatus ua_free_algebra_size(const struct UaAlgebra *alg, size_t n, size_t *out);

/**
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum UaStatus ua_core_new(const struct UaAlgebra *alg, struct UaCore **out);

/**
 * # Safety
 * `core` must be null or a handle from this library not yet freed.
 */
void ua_core_free(struct UaCore *core);

/**
 * A Mal'tsev term for the variety, rendered with the algebra's operation
 * names, or null in `out` if there is none.
 *
 * # Safety
 * `core` must be a live handle and `out` a valid pointer.
 */
enum UaStatus ua_core_maltsev_term(const struct UaCore *core, char **out);

/**
 * Decide the weakly Mal'tsev or regularity property. `max_power` is only
 * read in refute mode. If `json_out` is not null it receives the verdict as
 * JSON, including the separation certificate for a negative answer.
 *
 * # Safety
 * `core` must be a live handle, `verdict_out` a valid pointer and `json_out`
 * null or a valid pointer.
 */
enum UaStatus ua_core_decide(const struct UaCore *core,
                             enum UaTheorem theorem,
                             enum UaMode mode,
                             size_t max_power,
                             enum UaVerdict *verdict_out,
                             char **json_out);

/**
 * Check a witness bundle against the variety generated by `alg`. `witness`
 * is either a builtin bundle name or bundle JSON. `passed_out` receives 1 if
 * every equation holds. If `report_out` is not null it receives the plain
 * text report.
 *
 * # Safety
 * `alg` must be a live handle, `witness` a NUL-terminated string,
 * `passed_out` a valid pointer and `report_out` null or a valid pointer.
 */
enum UaStatus ua_verify_witness(const struct UaAlgebra *alg,
                                const char *witness,
                                enum UaTheorem theorem,
                                int32_t *passed_out,
                                char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UA_H */
