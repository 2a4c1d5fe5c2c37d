#ifndef HYPERVERMA_H
#define HYPERVERMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Verma dimensions above this are refused.
 */
#define HV_MAX_DIM 729

typedef enum HvChi {
  HV_CHI_ZERO = 0,
  HV_CHI_NILPOTENT = 1,
  HV_CHI_SEMISIMPLE = 2,
} HvChi;

typedef enum HvStatus {
  HV_STATUS_OK = 0,
  HV_STATUS_NULL_POINTER = 1,
  HV_STATUS_INVALID_ARGUMENT = 2,
  HV_STATUS_THEOREM_VIOLATION = 3,
  HV_STATUS_GUARD_EXCEEDED = 4,
  HV_STATUS_INTERNAL = 5,
} HvStatus;

/**
 * A module over the higher reduced enveloping algebra.
 */
typedef struct HvModule HvModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the baby Verma module. `lambda` is `"λ_0,…,λ_r"`; for a
 * semisimple character the last entry `j` selects the root `θ + j`.
 *
 * # Safety
 * `lambda` must be a valid C string and `out` a valid pointer.
 */
enum HvStatus hv_verma_new(uint32_t p,
                           uint32_t r,
                           enum HvChi chi,
                           int64_t c,
                           const char *lambda,
                           struct HvModule **out);

/**
 * Builds the irreducible quotient of the baby Verma module.
 *
 * # Safety
 * As for `hv_verma_new`.
 */
enum HvStatus hv_quotient_new(uint32_t p,
                              uint32_t r,
                              enum HvChi chi,
                              int64_t c,
                              const char *lambda,
                              struct HvModule **out);

/**
 * # Safety
 * `module` must come from this library and not be freed twice; null is
 * accepted.
 */
void hv_module_free(struct HvModule *module);

/**
 * # Safety
 * `module` must be a live handle and `out` a valid pointer.
 */
enum HvStatus hv_module_dim(const struct HvModule *module, uintptr_t *out);

/**
 * Module matrices as JSON; release the string with `hv_string_free`.
 *
 * # Safety
 * `module` must be a live handle and `out` a valid pointer.
 */
enum HvStatus hv_module_to_json(const struct HvModule *module, char **out);

/**
 * Checks every defining relation; `TheoremViolation` names the first one
 * that fails.
 *
 * # Safety
 * `module` must be a live handle.
 */
enum HvStatus hv_module_verify(const struct HvModule *module);

/**
 * Isomorphism classes of irreducibles as JSON.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HvStatus hv_classify_json(uint32_t p, uint32_t r, enum HvChi chi, int64_t c, char **out);

/**
 * # Safety
 * `s` must come from this library; null is accepted.
 */
void hv_string_free(char *s);

/**
 * Message for the last failed call on this thread, empty after success.
 * Valid until the next call into the library on this thread.
 */
const char *hv_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERVERMA_H */
