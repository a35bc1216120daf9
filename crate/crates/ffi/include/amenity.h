#ifndef AMENITY_H
#define AMENITY_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum AmenityStatus {
  AMENITY_STATUS_OK = 0,
  AMENITY_STATUS_NULL_ARGUMENT = 1,
  AMENITY_STATUS_INVALID_UTF8 = 2,
  AMENITY_STATUS_INVALID_INPUT = 3,
  AMENITY_STATUS_TRUNCATION_OVERFLOW = 4,
  AMENITY_STATUS_INTERNAL = 5,
} AmenityStatus;

/**
 * Opaque handle to a parsed, confluent presentation.
 */
typedef struct AmenityAlgebra AmenityAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a presentation from JSON and checks it for confluence.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer. The
 * handle written to `out` must be released with [`amenity_algebra_free`].
 */
enum AmenityStatus amenity_algebra_from_json(const char *json, struct AmenityAlgebra **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `algebra` must come from [`amenity_algebra_from_json`] and not be used again.
 */
void amenity_algebra_free(struct AmenityAlgebra *algebra);

/**
 * Content hash of the presentation as a hex string.
 *
 * # Safety
 * `algebra` must be a live handle and `out` a valid pointer.
 */
enum AmenityStatus amenity_algebra_hash(const struct AmenityAlgebra *algebra, char **out);

/**
 * Normal form of `element`, written as a plain string.
 *
 * # Safety
 * Pointers must be valid; `element` must be nul-terminated.
 */
enum AmenityStatus amenity_normal_form(const struct AmenityAlgebra *algebra,
                                       const char *element,
                                       char **out);

/**
 * Ball dimensions `d_0..=d_m_max` as JSON. `generators` may be null for the
 * generators of the presentation; `degree_bound` 0 derives the window.
 *
 * # Safety
 * Pointers must be valid; strings must be nul-terminated.
 */
enum AmenityStatus amenity_growth(const struct AmenityAlgebra *algebra,
                                  const char *generators,
                                  size_t m_max,
                                  size_t degree_bound,
                                  char **out);

/**
 * Følner search over balls of the generators. Writes the search outcome
 * as JSON, with `"status"` either `"found"` or `"inconclusive"`.
 *
 * # Safety
 * Pointers must be valid; `test_set` may be null.
 */
enum AmenityStatus amenity_folner_search(const struct AmenityAlgebra *algebra,
                                         const char *test_set,
                                         const char *epsilon,
                                         size_t n_max,
                                         size_t degree_bound,
                                         char **out);

/**
 * Truncated paradoxical decomposition at `degree`, or a deficiency witness.
 *
 * # Safety
 * Pointers must be valid; strings must be nul-terminated.
 */
enum AmenityStatus amenity_paradox_find(const struct AmenityAlgebra *algebra,
                                        const char *translators,
                                        size_t degree,
                                        size_t degree_bound,
                                        char **out);

/**
 * Rank entries `1..=n_max` of a module given as JSON
 * (`{"ambient_rank", "generators", "sub_generators"?}`) over balls of the generators.
 *
 * # Safety
 * Pointers must be valid; strings must be nul-terminated.
 */
enum AmenityStatus amenity_rank(const struct AmenityAlgebra *algebra,
                                const char *module_json,
                                size_t n_max,
                                size_t degree_bound,
                                char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void amenity_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *amenity_last_error(void);

/**
 * Library version as a static string.
 */
const char *amenity_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AMENITY_H */
