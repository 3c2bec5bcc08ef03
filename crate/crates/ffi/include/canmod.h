#ifndef CANMOD_H
#define CANMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define CANMOD_OK 0

/**
 * An equivalence or property was violated.
 */
#define CANMOD_VIOLATION 1

/**
 * The curve text did not parse.
 */
#define CANMOD_PARSE_ERROR 2

/**
 * The curve data is invalid.
 */
#define CANMOD_VALIDATION_ERROR 3

/**
 * Truncation or stabilization failed.
 */
#define CANMOD_NUMERIC_ERROR 4

/**
 * A required pointer argument was null.
 */
#define CANMOD_NULL_ARGUMENT -1

/**
 * A validated curve.
 */
typedef struct CanmodCurve CanmodCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `.curve` text into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t canmod_curve_parse(const char *text, struct CanmodCurve **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `curve` must come from `canmod_curve_parse` and not be freed twice.
 */
void canmod_curve_free(struct CanmodCurve *curve);

/**
 * Arithmetic genus of the curve.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
int32_t canmod_curve_genus(const struct CanmodCurve *curve, uintptr_t *out);

/**
 * Full analysis as JSON in `*out_json`, to be released with
 * `canmod_string_free`. A violated equivalence still yields the report
 * and returns `CANMOD_VIOLATION`.
 *
 * # Safety
 * `curve` must be a live handle and `out_json` a valid pointer.
 */
int32_t canmod_analyze_json(const struct CanmodCurve *curve,
                            int64_t truncation_scale,
                            char **out_json);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void canmod_string_free(char *s);

/**
 * Message of the last failure on this thread, valid until the next call.
 */
const char *canmod_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANMOD_H */
