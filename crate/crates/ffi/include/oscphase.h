#ifndef OSCPHASE_H
#define OSCPHASE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum OscStatus {
  OSC_STATUS_OK = 0,
  OSC_STATUS_NULL_POINTER = 1,
  OSC_STATUS_INVALID_PARAMETER = 2,
  OSC_STATUS_PHASE_UNDEFINED = 3,
  OSC_STATUS_RESONANCE = 4,
  OSC_STATUS_NO_PERIODIC_ENVELOPE = 5,
  OSC_STATUS_NUMERICAL_FAILURE = 6,
  OSC_STATUS_INVALID_UTF8 = 7,
  OSC_STATUS_BUFFER_TOO_SMALL = 8,
  OSC_STATUS_PANIC = 9,
} OscStatus;

// Floquet classification of the Mathieu oscillator.
typedef enum OscStability {
  OSC_STABILITY_STABLE = 0,
  OSC_STABILITY_UNSTABLE = 1,
  OSC_STABILITY_MARGINAL = 2,
} OscStability;

// Mathieu oscillator parameters.
typedef struct OscMathieu OscMathieu;

// Eigenfunction set of a (possibly driven) harmonic oscillator.
typedef struct OscRepresentation OscRepresentation;

// Geometric phase of an eigenstate by closed form and by quadrature.
typedef struct OscGeometricPhase {
  double period;
  double closed_form;
  double quadrature;
} OscGeometricPhase;

// Monodromy summary over one period `pi`.
typedef struct OscFloquet {
  double trace;
  double det;
  enum OscStability classification;
} OscFloquet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes of the last error message on this thread, excluding the
// terminating nul; 0 when the last call succeeded.
size_t osc_last_error_length(void);

// Copies the last error message into `buf` (nul-terminated).
//
// Returns `OSC_STATUS_BUFFER_TOO_SMALL` if `len` is not larger than
// [`osc_last_error_length`].
//
// # Safety
// `buf` must point to `len` writable bytes.
enum OscStatus osc_last_error_message(char *buf, size_t len);

// Library version as a static nul-terminated string.
const char *osc_version(void);

// Undriven oscillator with basis `(C, beta)` and fictitious
// `x_p = D cos(wt + phi)`.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle owned by the caller.
enum OscStatus osc_representation_new(double mass,
                                      double freq,
                                      double hbar,
                                      double c,
                                      double beta,
                                      double d,
                                      double phi,
                                      struct OscRepresentation **out);

// Driven oscillator. `re[k], im[k]` is the Fourier coefficient `f_k` of the
// force at `k w_f`, for `k = 0..len`; `f_{-k}` is the conjugate.
//
// # Safety
// `re` and `im` must each point to `len` doubles; `out` must be a valid pointer.
enum OscStatus osc_representation_new_driven(double mass,
                                             double freq,
                                             double hbar,
                                             double c,
                                             double beta,
                                             double d,
                                             double phi,
                                             double w_f,
                                             const double *re,
                                             const double *im,
                                             size_t len,
                                             struct OscRepresentation **out);

// Releases a representation. Null is ignored.
//
// # Safety
// `rep` must come from a `osc_representation_new*` call and not be used afterwards.
void osc_representation_free(struct OscRepresentation *rep);

// Geometric phase of eigenstate `n` over the representation's natural period.
//
// # Safety
// `rep` and `out` must be valid pointers.
enum OscStatus osc_geometric_phase(const struct OscRepresentation *rep,
                                   size_t n,
                                   struct OscGeometricPhase *out);

// Dynamical phase `-(1/hbar) int_0^period <H> dt` of eigenstate `n`, by quadrature.
//
// # Safety
// `rep` and `out` must be valid pointers.
enum OscStatus osc_dynamical_phase(const struct OscRepresentation *rep,
                                   size_t n,
                                   double period,
                                   double *out);

// Geometric phase over half an oscillator period; requires `D = 0`.
//
// # Safety
// `rep` and `out` must be valid pointers.
enum OscStatus osc_half_period_phase(const struct OscRepresentation *rep, size_t n, double *out);

// Mathieu oscillator `x'' + (a + 16 eps cos 2t) x = 0`.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle owned by the caller.
enum OscStatus osc_mathieu_new(double a,
                               double eps,
                               double mass,
                               double hbar,
                               struct OscMathieu **out);

// Releases a Mathieu handle. Null is ignored.
//
// # Safety
// `m` must come from [`osc_mathieu_new`] and not be used afterwards.
void osc_mathieu_free(struct OscMathieu *m);

// Monodromy trace, determinant and stability class.
//
// # Safety
// `m` and `out` must be valid pointers.
enum OscStatus osc_mathieu_stability(const struct OscMathieu *m, struct OscFloquet *out);

// Leading-order law `8 pi (n + 1/2) eps^2 / (sqrt(a) (a - 1)^2)`.
//
// # Safety
// `m` and `out` must be valid pointers.
enum OscStatus osc_mathieu_phase_perturbative(const struct OscMathieu *m, size_t n, double *out);

// Phase of the third-order series envelope, integrated exactly.
//
// # Safety
// `m` and `out` must be valid pointers.
enum OscStatus osc_mathieu_phase_series(const struct OscMathieu *m, size_t n, double *out);

// Phase along the numerically shot periodic envelope.
//
// # Safety
// `m` and `out` must be valid pointers.
enum OscStatus osc_mathieu_phase_numeric(const struct OscMathieu *m, size_t n, double *out);

// Runs a JSON run configuration (the same format as `oscphase run --config`)
// and returns the JSON output in `*out`: an array of result records, or a
// verification report.
//
// Domain outcomes such as an undefined phase are reported inside the records
// with `OSC_STATUS_OK`.
//
// # Safety
// `config` must be a nul-terminated string; `out` must be a valid pointer.
// Release `*out` with [`osc_string_free`].
enum OscStatus osc_run_json(const char *config, char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void osc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCPHASE_H */
