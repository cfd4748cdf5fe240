#ifndef CSRS_FFI_H
#define CSRS_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible operations.
 */
typedef enum CsrsStatus {
  CsrsStatus_Ok = 0,
  CsrsStatus_ComputationError = 1,
  CsrsStatus_InputError = 2,
  CsrsStatus_NullPointer = 3,
} CsrsStatus;

/**
 * Opaque knot presentation handle.
 */
typedef struct CsrsKnot CsrsKnot;

/**
 * Opaque precision policy handle.
 */
typedef struct CsrsPolicy CsrsPolicy;

/**
 * Opaque result of a representation enumeration.
 */
typedef struct CsrsReps CsrsReps;

/**
 * Opaque Chern–Simons spectrum.
 */
typedef struct CsrsSpectrum CsrsSpectrum;

/**
 * Plain-old-data view of one representation class.
 */
typedef struct CsrsRepData {
  uintptr_t class_id;
  double t_re;
  double t_im;
  double u_re;
  double u_im;
  int32_t epsilon;
  bool is_su2;
  bool is_nondegenerate;
  double residual_phi;
  double residual_surgery;
} CsrsRepData;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread. The pointer stays valid until
 * the next failing call on the same thread; do not free it.
 */
const char *csrs_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `ptr` must have been returned by a csrs function and not freed before.
 */
void csrs_string_free(char *ptr);

/**
 * Create a precision policy. `target_error` is a decimal string such as
 * "1e-30"; `precision_bits` of 0 lets the library choose from the target.
 *
 * # Safety
 * `target_error` must be a valid NUL-terminated string or null.
 */
struct CsrsPolicy *csrs_policy_new(const char *target_error, uint32_t precision_bits);

/**
 * # Safety
 * `p` must be a policy handle from `csrs_policy_new` (or null).
 */
void csrs_policy_free(struct CsrsPolicy *p);

/**
 * The built-in 5₂ presentation.
 */
struct CsrsKnot *csrs_knot_builtin_5_2(void);

/**
 * The twist knot K_k (K₁ = left trefoil, K₂ = 5₂).
 */
struct CsrsKnot *csrs_knot_twist(uint64_t k);

/**
 * The two-bridge presentation of fraction q/p.
 */
struct CsrsKnot *csrs_knot_two_bridge(uint64_t p, uint64_t q);

/**
 * Parse a knot presentation from its JSON document.
 *
 * # Safety
 * `doc` must be a valid NUL-terminated string or null.
 */
struct CsrsKnot *csrs_knot_from_json(const char *doc);

/**
 * # Safety
 * `k` must be a knot handle (or null).
 */
void csrs_knot_free(struct CsrsKnot *k);

/**
 * Pretty-print the Riley polynomial φ(t,u), the Alexander polynomial, and
 * Δ″(1), as a JSON string. Free with `csrs_string_free`.
 *
 * # Safety
 * Handles must be valid; see the module docs.
 */
char *csrs_riley_json(const struct CsrsKnot *knot, const struct CsrsPolicy *policy);

/**
 * Enumerate the SU(2) representation classes of S³_{1/n}(K).
 *
 * # Safety
 * Handles must be valid; see the module docs.
 */
struct CsrsReps *csrs_find_representations(const struct CsrsKnot *knot,
                                           int64_t n,
                                           const struct CsrsPolicy *policy);

/**
 * # Safety
 * `r` must be a representation handle (or null).
 */
void csrs_reps_free(struct CsrsReps *r);

/**
 * Number of representation classes.
 *
 * # Safety
 * `r` must be a valid representation handle.
 */
uintptr_t csrs_reps_count(const struct CsrsReps *r);

/**
 * Whether the Casson class-count gate passed.
 *
 * # Safety
 * `r` must be a valid representation handle.
 */
bool csrs_reps_casson_pass(const struct CsrsReps *r);

/**
 * Copy class `index` into `out`. Returns `Ok` or an error status.
 *
 * # Safety
 * `r` and `out` must be valid pointers.
 */
enum CsrsStatus csrs_reps_get(const struct CsrsReps *r, uintptr_t index, struct CsrsRepData *out);

/**
 * Compute the Chern–Simons spectrum for previously enumerated classes.
 * `mirror` true reports the orientation-reversed (−cs) values.
 *
 * # Safety
 * Handles must be valid; see the module docs.
 */
struct CsrsSpectrum *csrs_cs_spectrum(const struct CsrsReps *r,
                                      bool mirror,
                                      const struct CsrsPolicy *policy);

/**
 * # Safety
 * `s` must be a spectrum handle (or null).
 */
void csrs_spectrum_free(struct CsrsSpectrum *s);

/**
 * Number of entries in the spectrum.
 *
 * # Safety
 * `s` must be a valid spectrum handle.
 */
uintptr_t csrs_spectrum_count(const struct CsrsSpectrum *s);

/**
 * Value of entry `index` in [0,1) as a decimal string with `digits`
 * significant digits, or null if that class failed (see last error).
 * Free with `csrs_string_free`.
 *
 * # Safety
 * `s` must be a valid spectrum handle.
 */
char *csrs_spectrum_value(const struct CsrsSpectrum *s, uintptr_t index, uintptr_t digits);

/**
 * Certified absolute error bound of entry `index`, as f64.
 *
 * # Safety
 * `s` must be a valid spectrum handle.
 */
double csrs_spectrum_error_bound(const struct CsrsSpectrum *s, uintptr_t index);

/**
 * Evaluate a ledger query (optionally with a facts JSON document) and
 * return the JSON outcome. Free with `csrs_string_free`.
 *
 * # Safety
 * `facts_json` may be null; `query` must be a valid NUL-terminated string.
 */
char *csrs_ledger_eval(const char *facts_json, const char *query);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSRS_FFI_H */
