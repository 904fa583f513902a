#ifndef WQED_H
#define WQED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stddef.h>

typedef enum WqedStatus {
  WQED_STATUS_OK = 0,
  WQED_STATUS_NULL_POINTER = 1,
  /**
   * Parameters rejected by the model.
   */
  WQED_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A valid run aborted (boundary hit, norm drift, no doublet, ...).
   */
  WQED_STATUS_RUNTIME = 3,
  WQED_STATUS_PANIC = 4,
} WqedStatus;

/**
 * Two-level emitter parameters.
 */
typedef struct WqedEmitter WqedEmitter;

/**
 * Rydberg medium.
 */
typedef struct WqedMedium WqedMedium;

/**
 * Three-level router parameters.
 */
typedef struct WqedRouter WqedRouter;

typedef struct WqedComplex {
  double re;
  double im;
} WqedComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *wqed_version(void);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *wqed_last_error(void);

/**
 * # Safety
 * `out_handle` must be a valid location for a handle pointer.
 */
enum WqedStatus wqed_emitter_new(double omega_e,
                                 double loss_rate,
                                 double guided_rate,
                                 double group_velocity,
                                 struct WqedEmitter **out_handle);

/**
 * # Safety
 * `handle` must be null or come from [`wqed_emitter_new`] and not be freed twice.
 */
void wqed_emitter_free(struct WqedEmitter *handle);

/**
 * One-photon amplitudes at detuning `delta`.
 *
 * # Safety
 * `handle` must be a live emitter; `t` and `r` must be writable.
 */
enum WqedStatus wqed_emitter_amplitudes(const struct WqedEmitter *handle,
                                        double delta,
                                        struct WqedComplex *t,
                                        struct WqedComplex *r);

/**
 * `T` and `R` at `n` detunings.
 *
 * # Safety
 * `deltas`, `trans` and `refl` must each hold `n` elements.
 */
enum WqedStatus wqed_emitter_spectrum(const struct WqedEmitter *handle,
                                      const double *deltas,
                                      uintptr_t n,
                                      double *trans,
                                      double *refl);

/**
 * Transmitted `g2(tau)` for a Gaussian coherent packet `(k0, delta_k, n_bar)`.
 *
 * # Safety
 * `taus` and `g2` must each hold `n` elements.
 */
enum WqedStatus wqed_emitter_g2_coherent(const struct WqedEmitter *handle,
                                         double k0,
                                         double delta_k,
                                         double n_bar,
                                         const double *taus,
                                         uintptr_t n,
                                         double *g2);

/**
 * # Safety
 * `base` must be a live emitter; `out_handle` must be writable.
 */
enum WqedStatus wqed_router_new(const struct WqedEmitter *base,
                                double metastable_loss,
                                double control_rabi,
                                double control_detuning,
                                struct WqedRouter **out_handle);

/**
 * # Safety
 * `handle` must be null or come from [`wqed_router_new`].
 */
void wqed_router_free(struct WqedRouter *handle);

/**
 * # Safety
 * `handle` must be a live router; `t` and `r` must be writable.
 */
enum WqedStatus wqed_router_amplitudes(const struct WqedRouter *handle,
                                       double delta,
                                       struct WqedComplex *t,
                                       struct WqedComplex *r);

/**
 * Autler-Townes doublet separation; `WQED_STATUS_RUNTIME` when no doublet exists.
 *
 * # Safety
 * `handle` must be a live router; `splitting` must be writable.
 */
enum WqedStatus wqed_router_ats_splitting(const struct WqedRouter *handle, double *splitting);

/**
 * Lattice wave-packet transmission for a resonant-band carrier `k0`, with
 * `guided_rate` and `delta` in units of the hopping.
 *
 * # Safety
 * `trans` and `refl` must be writable.
 */
enum WqedStatus wqed_lattice_transmission(uintptr_t n_sites,
                                          double hopping,
                                          double k0,
                                          double guided_rate,
                                          double delta,
                                          double sigma,
                                          double *trans,
                                          double *refl,
                                          double *analytic);

/**
 * # Safety
 * `out_handle` must be writable.
 */
enum WqedStatus wqed_medium_new(double od,
                                double od_b,
                                double r_b,
                                double gamma,
                                double delta,
                                double omega_c,
                                struct WqedMedium **out_handle);

/**
 * # Safety
 * `handle` must be null or come from [`wqed_medium_new`].
 */
void wqed_medium_free(struct WqedMedium *handle);

/**
 * Ground bound state of the effective well: eigenvalue and decay constant.
 *
 * # Safety
 * `handle` must be a live medium; outputs must be writable.
 */
enum WqedStatus wqed_medium_ground_state(const struct WqedMedium *handle,
                                         double *eigenvalue,
                                         double *kappa);

/**
 * Propagates the pair wavefunction through the medium on the default grid
 * and samples `g2` and the conditional phase at `n` delays.
 *
 * # Safety
 * `taus`, `g2` and `phase` must each hold `n` elements.
 */
enum WqedStatus wqed_medium_correlations(const struct WqedMedium *handle,
                                         const double *taus,
                                         uintptr_t n,
                                         double *g2,
                                         double *phase);

/**
 * `1 - OD^{-1/2} exp(-OD_B)`.
 *
 * # Safety
 * `p` must be writable.
 */
enum WqedStatus wqed_blockade_probability(double od, double od_b, double *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WQED_H */
