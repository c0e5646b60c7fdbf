#ifndef SUPERLIE_H
#define SUPERLIE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_PARSE_ERROR = 3,
  SL_STATUS_VALIDATION_FAILED = 4,
  SL_STATUS_BUFFER_TOO_SMALL = 5,
  SL_STATUS_INTERNAL = 6,
} SlStatus;

typedef enum SlVerdict {
  SL_VERDICT_GRADED_SIMPLE = 0,
  SL_VERDICT_NOT_SIMPLE = 1,
  SL_VERDICT_ABELIAN = 2,
  SL_VERDICT_ZERO = 3,
} SlVerdict;

/**
 * Opaque validated Lie superalgebra.
 */
typedef struct SlAlgebra SlAlgebra;

/**
 * Opaque validated Harish-Chandra pair.
 */
typedef struct SlPair SlPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Copies the message of the last failed call on this thread into `buf`.
 * Returns the size needed including the NUL; nothing is written when `cap`
 * is too small.
 */
size_t sl_last_error(char *buf, size_t cap);

/**
 * Builds a catalog algebra. `params` is `k=v` pairs such as `"m=2,n=1"`
 * (may be NULL); `p` is the characteristic, 0 for the rationals.
 */
enum SlStatus sl_algebra_build(const char *family,
                               const char *params,
                               uint64_t p,
                               struct SlAlgebra **result);

/**
 * Parses and fully validates an algebra from its JSON form.
 */
enum SlStatus sl_algebra_from_json(const char *json, struct SlAlgebra **result);

void sl_algebra_free(struct SlAlgebra *a);

enum SlStatus sl_algebra_dims(const struct SlAlgebra *a, size_t *even, size_t *odd);

/**
 * Runs the simplicity search. For `NotSimple` the witness dimensions are
 * written to `witness_even`/`witness_odd` (either may be NULL).
 */
enum SlStatus sl_algebra_simplicity(const struct SlAlgebra *a,
                                    uint64_t seed,
                                    enum SlVerdict *verdict,
                                    size_t *witness_even,
                                    size_t *witness_odd);

/**
 * Whether `[[v,v],v] = 0` holds identically for odd `v`.
 */
enum SlStatus sl_algebra_cubic_holds(const struct SlAlgebra *a, bool *holds);

enum SlStatus sl_algebra_center_dims(const struct SlAlgebra *a, size_t *even, size_t *odd);

/**
 * Writes the JSON form and a NUL into `buf`. `needed` (may be NULL) receives
 * the required size; a short buffer gives `BufferTooSmall`.
 */
enum SlStatus sl_algebra_to_json(const struct SlAlgebra *a, char *buf, size_t cap, size_t *needed);

/**
 * Builds a pair family: `sl2_symn` (params `n`, optional `a`), `pq` (`n`)
 * or `brj` (no params).
 */
enum SlStatus sl_pair_build(const char *family,
                            const char *params,
                            uint64_t p,
                            struct SlPair **result);

void sl_pair_free(struct SlPair *p);

/**
 * New algebra handle holding the total superalgebra of the pair.
 */
enum SlStatus sl_pair_total(const struct SlPair *p, struct SlAlgebra **result);

enum SlStatus sl_pair_sas(const struct SlPair *p, bool *cond1, bool *cond2);

enum SlStatus sl_pair_is_split(const struct SlPair *p, bool *split);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERLIE_H */
