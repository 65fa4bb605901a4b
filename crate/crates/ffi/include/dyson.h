#ifndef DYSON_H
#define DYSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DysonStatus {
  DYSON_STATUS_OK = 0,
  DYSON_STATUS_NULL_POINTER = 1,
  DYSON_STATUS_INVALID_PARAMETER = 2,
  DYSON_STATUS_INVALID_GRID = 3,
  DYSON_STATUS_NON_FINITE = 4,
  DYSON_STATUS_NOT_HERMITIAN = 5,
  DYSON_STATUS_NOT_POSITIVE_DEFINITE = 6,
  DYSON_STATUS_NON_DIAGONALIZABLE = 7,
  DYSON_STATUS_SINGULAR_DYSON_MAP = 8,
  DYSON_STATUS_UNSUPPORTED_HAMILTONIAN = 9,
  DYSON_STATUS_POSITIVITY_LOST = 10,
  DYSON_STATUS_STEP_TOO_LARGE = 11,
  DYSON_STATUS_CONFIG_INVALID = 12,
  DYSON_STATUS_IO = 13,
  DYSON_STATUS_CALLBACK_FAILED = 14,
  DYSON_STATUS_OUT_OF_RANGE = 15,
  DYSON_STATUS_PANIC = 16,
} DysonStatus;

// Opaque integrated metric series.
typedef struct DysonMetricFlow DysonMetricFlow;

// Opaque Yang–Lee model.
typedef struct DysonYangLee DysonYangLee;

typedef struct DysonComplex {
  double re;
  double im;
} DysonComplex;

// Row-major 2×2 complex matrix: `m[0]` is row 0, column 0; `m[1]` row 0, column 1.
typedef struct DysonMatrix2 {
  struct DysonComplex m[4];
} DysonMatrix2;

// `+1` for the upper energy branch, `-1` for the lower.
typedef int32_t DysonBranch;

typedef struct DysonVector2 {
  struct DysonComplex v[2];
} DysonVector2;

// `H = ½(κ₀ + iλ₀)𝕀 + ½(κ⃗ + iλ⃗)·σ⃗`.
typedef struct DysonSu2 {
  double kappa0;
  double lambda0;
  double kappa[3];
  double lambda[3];
} DysonSu2;

// Callback filling `*out` with `h(t)`; nonzero return aborts the integration.
typedef int32_t (*DysonHamiltonianFn)(double t, void *user_data, struct DysonMatrix2 *out);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next failing
// call on the same thread; never null.
const char *dyson_last_error(void);

// Library version as a static NUL-terminated string.
const char *dyson_version(void);

// Creates a model with `0 < gamma < 1`. Release with [`dyson_yang_lee_free`].
enum DysonStatus dyson_yang_lee_new(double gamma, double omega, struct DysonYangLee **out);

// Releases a model. Null is ignored.
void dyson_yang_lee_free(struct DysonYangLee *handle);

// Rabi frequency `Ω = √(1 − γ²)`, reference time `t₀ = −π/(2Ω)` and the
// eigenvalues `E₊`, `E₋` of the static Hamiltonian. Any out pointer may be null.
enum DysonStatus dyson_yang_lee_constants(const struct DysonYangLee *handle,
                                          double *rabi_frequency,
                                          double *reference_time,
                                          double *e_plus,
                                          double *e_minus);

// Static non-Hermitian Hamiltonian `H₁`.
enum DysonStatus dyson_yang_lee_hamiltonian(const struct DysonYangLee *handle,
                                            struct DysonMatrix2 *out);

// Closed-form metric `ρ(t)`.
enum DysonStatus dyson_yang_lee_rho(const struct DysonYangLee *handle,
                                    double t,
                                    struct DysonMatrix2 *out);

// Closed-form Dyson map `η(t)` and `∂ₜη`. Either out pointer may be null.
enum DysonStatus dyson_yang_lee_eta(const struct DysonYangLee *handle,
                                    double t,
                                    struct DysonMatrix2 *eta,
                                    struct DysonMatrix2 *eta_dot);

// Hermitian Hamiltonian `h(t)`.
enum DysonStatus dyson_yang_lee_hermitian_h(const struct DysonYangLee *handle,
                                            double t,
                                            struct DysonMatrix2 *out);

// Closed-form propagator `u(t, t₀)`.
enum DysonStatus dyson_yang_lee_propagator(const struct DysonYangLee *handle,
                                           double t,
                                           struct DysonMatrix2 *out);

// Continuous phase `θ(t)` of the first diagonal entry of `u(t, t₀)`.
enum DysonStatus dyson_yang_lee_theta(const struct DysonYangLee *handle, double t, double *out);

// Energy expectation `E±(t)` of the Hermitian-picture states.
enum DysonStatus dyson_yang_lee_energy(const struct DysonYangLee *handle,
                                       double t,
                                       DysonBranch which,
                                       double *out);

// Non-Hermitian picture eigenstate `Ψ±(t)`.
enum DysonStatus dyson_yang_lee_psi(const struct DysonYangLee *handle,
                                    double t,
                                    DysonBranch which,
                                    struct DysonVector2 *out);

// Hermitian-picture state `φ±(t) = η(t)Ψ±(t)`.
enum DysonStatus dyson_yang_lee_phi(const struct DysonYangLee *handle,
                                    double t,
                                    DysonBranch which,
                                    struct DysonVector2 *out);

// Hermitian square root of a Hermitian positive-definite matrix.
enum DysonStatus dyson_hermitian_sqrt(const struct DysonMatrix2 *m, struct DysonMatrix2 *out);

// Coefficients `(a₀, a_x, a_y, a_z)` with `M = a₀𝕀 + a⃗·σ⃗`.
enum DysonStatus dyson_pauli_decompose(const struct DysonMatrix2 *m, struct DysonComplex (*out)[4]);

// Eigenvalues sorted by real part and unit eigenvectors stored as the
// columns of `vectors`.
enum DysonStatus dyson_eigensystem(const struct DysonMatrix2 *m,
                                   struct DysonComplex (*values)[2],
                                   struct DysonMatrix2 *vectors);

// Time-independent metric `α𝕀 + β⃗·σ⃗` with `β⃗ = (α/|κ⃗|²)λ⃗×κ⃗ + νκ⃗`.
enum DysonStatus dyson_static_metric(const struct DysonSu2 *h,
                                     double alpha,
                                     double nu,
                                     struct DysonMatrix2 *out);

// Closed-form time-dependent metric of the ζ family at time `t`.
enum DysonStatus dyson_zeta_metric(const struct DysonSu2 *h,
                                   const double (*constants)[4],
                                   double t,
                                   struct DysonMatrix2 *out);

// Integrates `∂ₜρ = −i(H†ρ − ρH)` from `rho0` on `[t_start, t_end]` in equal
// steps no longer than `max_dt`. Release with [`dyson_metric_flow_free`].
enum DysonStatus dyson_metric_flow_new(const struct DysonSu2 *h,
                                       const struct DysonMatrix2 *rho0,
                                       double t_start,
                                       double t_end,
                                       double max_dt,
                                       struct DysonMetricFlow **out);

void dyson_metric_flow_free(struct DysonMetricFlow *handle);

// Number of samples, including the initial one.
enum DysonStatus dyson_metric_flow_len(const struct DysonMetricFlow *handle, uintptr_t *out);

// Sample `index` and its time.
enum DysonStatus dyson_metric_flow_sample(const struct DysonMetricFlow *handle,
                                          uintptr_t index,
                                          double *t,
                                          struct DysonMatrix2 *rho);

// Smallest `det ρ` and where it occurs. `breakdown_t` receives the first
// time with `det ρ ≤ 0`, or NaN when positivity held throughout.
enum DysonStatus dyson_metric_flow_positivity(const struct DysonMetricFlow *handle,
                                              double *min_det,
                                              double *min_det_t,
                                              double *breakdown_t);

// Time-ordered propagator `u(t_to, t_from)` of a Hamiltonian supplied by
// `callback`, with a step that divides the interval and is at most `dt`.
enum DysonStatus dyson_time_ordered_u(DysonHamiltonianFn callback,
                                      void *user_data,
                                      double t_from,
                                      double t_to,
                                      double dt,
                                      struct DysonMatrix2 *out);

// Runs a TOML scenario in verify mode and reports whether every check passed.
enum DysonStatus dyson_verify_config(const char *path, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYSON_H */
