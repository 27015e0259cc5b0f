/* C interface to the ballprim primitivity certification library. */

#ifndef BALLPRIM_H
#define BALLPRIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible `bp_*` function.
 */
typedef enum BpStatus {
  /**
   * Success.
   */
  BpStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  BpStatus_NullPointer = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  BpStatus_Utf8 = 2,
  /**
   * Malformed input (dimensions, JSON shape, parameter ranges).
   */
  BpStatus_InvalidInput = 3,
  /**
   * The map does not send the ball into itself.
   */
  BpStatus_NotPositive = 4,
  /**
   * The map is positive but not primitive.
   */
  BpStatus_NotPrimitive = 5,
  /**
   * A sphere maximum sits too close to 1 to classify.
   */
  BpStatus_AmbiguousMargin = 6,
  /**
   * An internal numeric procedure failed to converge or validate.
   */
  BpStatus_NumericFailure = 7,
  /**
   * A constructive routine could not produce its object.
   */
  BpStatus_ConstructionFailure = 8,
  /**
   * An I/O error.
   */
  BpStatus_Io = 9,
  /**
   * A panic was caught at the boundary.
   */
  BpStatus_Panic = 10,
} BpStatus;

/**
 * Opaque primitivity certificate (index, verdict and contact chain).
 */
typedef struct BpCertificate BpCertificate;

/**
 * Opaque qubit channel in Kraus form.
 */
typedef struct BpChannel BpChannel;

/**
 * Opaque affine self-map of the unit ball.
 */
typedef struct BpMap BpMap;

/**
 * Opaque extremal witness (map, orbit and parameters).
 */
typedef struct BpWitness BpWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread; owned by the library and
 * valid until the next failing call on the same thread. Never null.
 *
 * # Safety
 * The returned pointer must not be freed or retained across calls.
 */
const char *bp_last_error(void);

/**
 * Frees a string returned by a `bp_*_to_json` function. Null is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void bp_string_free(char *s);

/**
 * Builds an affine ball map from a row-major `n x n` matrix and a length
 * `n` translation.
 *
 * # Safety
 * `a` must point to `n * n` doubles, `b` to `n` doubles, and `out` must
 * be a valid pointer; the handle must be released with `bp_map_free`.
 */
enum BpStatus bp_map_new(uintptr_t n, const double *a, const double *b, struct BpMap **out);

/**
 * Parses a map from its JSON form `{"n":..,"A":[[..]],"b":[..]}` (a full
 * witness JSON is also accepted; its map is extracted).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BpStatus bp_map_from_json(const char *json, struct BpMap **out);

/**
 * Serializes a map to JSON; free the string with `bp_string_free`.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum BpStatus bp_map_to_json(const struct BpMap *map, char **out);

/**
 * Ball dimension of a map handle; 0 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
uintptr_t bp_map_dim(const struct BpMap *map);

/**
 * Releases a map handle. Null is a no-op.
 *
 * # Safety
 * `map` must have come from this library and not be freed twice.
 */
void bp_map_free(struct BpMap *map);

/**
 * Exact maximum of `||phi(x)||` over the unit sphere.
 *
 * # Safety
 * `map` must be a live handle and `value` a valid pointer.
 */
enum BpStatus bp_sphere_max(const struct BpMap *map, double *value);

/**
 * Certifies the primitivity index of a map, producing a certificate
 * handle even for non-primitive verdicts (inspect with the accessors).
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer; release the
 * certificate with `bp_certificate_free`.
 */
enum BpStatus bp_primitivity_index(const struct BpMap *map, struct BpCertificate **out);

/**
 * Certified index, or -1 when the verdict carries none (or the handle is
 * null).
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
int64_t bp_certificate_index(const struct BpCertificate *cert);

/**
 * Verdict code: 0 primitive, 1 not positive, 2 not primitive; -1 for a
 * null handle.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
int bp_certificate_verdict(const struct BpCertificate *cert);

/**
 * Number of chain steps in the certificate (step 0 is the full sphere).
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
uintptr_t bp_certificate_chain_len(const struct BpCertificate *cert);

/**
 * Affine dimension of the contact set at chain step `i` (-1 for an empty
 * contact, -2 for a null handle or out-of-range index).
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
int64_t bp_certificate_chain_dim(const struct BpCertificate *cert, uintptr_t i);

/**
 * Serializes a certificate to JSON; free with `bp_string_free`.
 *
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum BpStatus bp_certificate_to_json(const struct BpCertificate *cert, char **out);

/**
 * Releases a certificate handle. Null is a no-op.
 *
 * # Safety
 * `cert` must have come from this library and not be freed twice.
 */
void bp_certificate_free(struct BpCertificate *cert);

/**
 * Synthesizes an extremal witness of index `n + 1` in dimension `n`.
 * Pass a contraction parameter in (0, 1), or any value outside it (for
 * example 0 or NaN) to let the library choose.
 *
 * # Safety
 * `out` must be a valid pointer; release with `bp_witness_free`.
 */
enum BpStatus bp_synthesize(uintptr_t n, double c, struct BpWitness **out);

/**
 * Certified index of a witness; -1 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
int64_t bp_witness_index(const struct BpWitness *w);

/**
 * Clones the witness's map into a fresh map handle.
 *
 * # Safety
 * `w` must be a live handle and `out` a valid pointer.
 */
enum BpStatus bp_witness_map(const struct BpWitness *w, struct BpMap **out);

/**
 * Serializes a witness to JSON; free with `bp_string_free`.
 *
 * # Safety
 * `w` must be a live handle and `out` a valid pointer.
 */
enum BpStatus bp_witness_to_json(const struct BpWitness *w, char **out);

/**
 * Releases a witness handle. Null is a no-op.
 *
 * # Safety
 * `w` must have come from this library and not be freed twice.
 */
void bp_witness_free(struct BpWitness *w);

/**
 * Builds the two-Kraus qubit channel of primitivity index 3 for angles
 * `0 < alpha, beta < pi/2`, `alpha != beta`.
 *
 * # Safety
 * `out` must be a valid pointer; release with `bp_channel_free`.
 */
enum BpStatus bp_wielandt_channel(double alpha, double beta, struct BpChannel **out);

/**
 * Parses a channel from its JSON form `{"kraus":[...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BpStatus bp_channel_from_json(const char *json, struct BpChannel **out);

/**
 * Serializes a channel to JSON; free with `bp_string_free`.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer.
 */
enum BpStatus bp_channel_to_json(const struct BpChannel *ch, char **out);

/**
 * Certifies a channel's primitivity index through its Bloch-ball action.
 *
 * # Safety
 * `ch` must be a live handle and `out` a valid pointer; release the
 * certificate with `bp_certificate_free`.
 */
enum BpStatus bp_channel_index(const struct BpChannel *ch, struct BpCertificate **out);

/**
 * Complete positivity via the minimal Choi eigenvalue: `*is_cp` is 1 when
 * the eigenvalue clears -1e-9, else 0.
 *
 * # Safety
 * `ch` must be a live handle; `is_cp` and `min_eig` must be valid
 * pointers.
 */
enum BpStatus bp_channel_choi(const struct BpChannel *ch, int *is_cp, double *min_eig);

/**
 * Releases a channel handle. Null is a no-op.
 *
 * # Safety
 * `ch` must have come from this library and not be freed twice.
 */
void bp_channel_free(struct BpChannel *ch);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLPRIM_H */
