#ifndef CYGAP_H
#define CYGAP_H

/* Generated header — do not edit by hand; regenerate with the crate's build script. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every entry point of this library.
typedef enum {
  // Success.
  CYGAP_STATUS_OK = 0,
  // A required pointer argument was null.
  CYGAP_STATUS_NULL_POINTER = 1,
  // Arguments outside the mathematical domain of the routine.
  CYGAP_STATUS_DOMAIN = 2,
  // A numerical computation failed to reach its accuracy target.
  CYGAP_STATUS_NUMERIC = 3,
  // A square-root branch could not be resolved by continuity.
  CYGAP_STATUS_BRANCH = 4,
  // A linear system was too ill-conditioned.
  CYGAP_STATUS_CONDITIONING = 5,
  // The ODE integrator failed.
  CYGAP_STATUS_INTEGRATION = 6,
  // An internal invariant was violated (caught panic).
  CYGAP_STATUS_INTERNAL = 7,
} CygapStatus;

// Opaque handle holding dense scaled-limit trajectories for one (a, ρ):
// the one-sided τ_a/gap track and the symmetric hard-edge track.
typedef struct CygapScaled CygapScaled;

// Opaque handle for the bulk nearest-neighbour spacing density p₂.
typedef struct CygapSpacing CygapSpacing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cygap_version(void);

// Static NUL-terminated name for a status code (never null).
const char *cygap_status_name(CygapStatus status);

// Gap probability E₂(0; (s,∞)) and σ(s) = (1+s²) R(s,s) for the N×N
// ensemble with weight (1+λ²)^(−N−a), by the Nyström-resolvent route.
// `quad_order` is the Gauss–Legendre order per segment (0 selects 256).
//
// # Safety
// `e2_out` and `sigma_out` must be valid, writable, aligned `double`
// pointers; they are written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_gap_single(uint32_t n,
                             double a,
                             double s,
                             uint32_t quad_order,
                             double *e2_out,
                             double *sigma_out);

// Gap probability E₂(0; (−∞,−s)∪(s,∞)), σ(s) and the resolvent product
// R₀ = qp/s for the symmetric double interval. `quad_order` as in
// [`cygap_gap_single`].
//
// # Safety
// `e2_out`, `sigma_out` and `r0_out` must be valid, writable, aligned
// `double` pointers; they are written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_gap_double(uint32_t n,
                             double a,
                             double s,
                             uint32_t quad_order,
                             double *e2_out,
                             double *sigma_out,
                             double *r0_out);

// Closed hypergeometric form of the single-interval gap (N ≤ 2 only).
//
// # Safety
// `e2_out` and `sigma_out` must be valid, writable, aligned `double`
// pointers; they are written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_gap_single_exact(uint32_t n,
                                   double a,
                                   double s,
                                   double *e2_out,
                                   double *sigma_out);

// Closed hypergeometric form of the double-interval gap (N ≤ 2 only).
//
// # Safety
// `e2_out`, `sigma_out` and `r0_out` must be valid, writable, aligned
// `double` pointers; they are written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_gap_double_exact(uint32_t n,
                                   double a,
                                   double s,
                                   double *e2_out,
                                   double *sigma_out,
                                   double *r0_out);

// Build the scaled-limit tables for hard-edge exponent `a ≥ 0`, bulk
// density `rho > 0`, covering 1.5e−3 ≤ π·rho·x ≤ π·rho·x_max. On success
// writes a handle that must be released with [`cygap_scaled_free`].
//
// # Safety
// `out` must be a valid, writable, aligned pointer to a handle slot; it
// is written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_scaled_new(double a, double rho, double x_max, CygapScaled **out);

// Evaluate the scaled tables at `x`: τ_a(πρx), the one-sided gap
// E₂(0;(0,x)), σ₁ at the symmetric endpoints, and the symmetric gap
// E₂(0;(−x,x)). `x` must satisfy t_lo ≤ π·rho·x ≤ π·rho·x_max of the
// handle's construction.
//
// # Safety
// `handle` must be a live pointer from [`cygap_scaled_new`] that has not
// been freed; the four out-pointers must be valid, writable, aligned
// `double` pointers. Outputs are written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_scaled_eval(const CygapScaled *handle,
                              double x,
                              double *tau_out,
                              double *e2_one_out,
                              double *sigma1_out,
                              double *e2_sym_out);

// Release a handle from [`cygap_scaled_new`]. A null handle is a no-op.
//
// # Safety
// `handle` must be null or a pointer from [`cygap_scaled_new`] that has
// not already been freed; the handle must not be used afterwards.
void cygap_scaled_free(CygapScaled *handle);

// Build the spacing-density table covering 0 ≤ x ≤ x_max (x in units of
// the mean spacing; x_max > 0.1). Release with [`cygap_spacing_free`].
//
// # Safety
// `out` must be a valid, writable, aligned pointer to a handle slot; it
// is written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_spacing_new(double x_max, CygapSpacing **out);

// Evaluate p₂(x) for 0 ≤ x ≤ x_max of the handle's construction.
//
// # Safety
// `handle` must be a live pointer from [`cygap_spacing_new`] that has not
// been freed; `p2_out` must be a valid, writable, aligned `double`
// pointer. It is written only on `CYGAP_STATUS_OK`.
CygapStatus cygap_spacing_eval(const CygapSpacing *handle, double x, double *p2_out);

// Release a handle from [`cygap_spacing_new`]. A null handle is a no-op.
//
// # Safety
// `handle` must be null or a pointer from [`cygap_spacing_new`] that has
// not already been freed; the handle must not be used afterwards.
void cygap_spacing_free(CygapSpacing *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYGAP_H */
