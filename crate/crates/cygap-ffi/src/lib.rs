//! C ABI for the gap-probability library.
//!
//! Conventions:
//! * every entry point returns a [`CygapStatus`]; results are written
//!   through out-pointers, which must be non-null and properly aligned;
//! * long-lived state lives behind opaque handles ([`CygapScaled`],
//!   [`CygapSpacing`]) created by the `*_new` constructors and released by
//!   the matching `*_free`;
//! * every entry point is panic-safe: a Rust panic is caught at the
//!   boundary and reported as `CYGAP_STATUS_INTERNAL`.
//!
//! The C header is generated into `include/cygap.h` by the build script.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use cygap::ensemble::{exact_gap_double, exact_gap_single, EnsembleParams, IntervalSpec};
use cygap::error::Error;
use cygap::fredholm::resolvent_at_endpoint;
use cygap::twode::{hermite_eval, integrate_bessel, integrate_scaled_single, SpacingDensity};

/// Status code returned by every entry point of this library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CygapStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments outside the mathematical domain of the routine.
    Domain = 2,
    /// A numerical computation failed to reach its accuracy target.
    Numeric = 3,
    /// A square-root branch could not be resolved by continuity.
    Branch = 4,
    /// A linear system was too ill-conditioned.
    Conditioning = 5,
    /// The ODE integrator failed.
    Integration = 6,
    /// An internal invariant was violated (caught panic).
    Internal = 7,
}

fn status_of(e: &Error) -> CygapStatus {
    match e {
        Error::Domain(_) => CygapStatus::Domain,
        Error::Numeric(_) => CygapStatus::Numeric,
        Error::Branch(_) => CygapStatus::Branch,
        Error::Conditioning(_) => CygapStatus::Conditioning,
        Error::Integration(_, _) => CygapStatus::Integration,
    }
}

/// Run `f` with the panic guard every boundary crossing needs.
fn guard(f: impl FnOnce() -> CygapStatus) -> CygapStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(CygapStatus::Internal)
}

const DEFAULT_ORDER: u32 = 256;

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cygap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static NUL-terminated name for a status code (never null).
#[no_mangle]
pub extern "C" fn cygap_status_name(status: CygapStatus) -> *const c_char {
    let s: &'static str = match status {
        CygapStatus::Ok => "ok\0",
        CygapStatus::NullPointer => "null pointer\0",
        CygapStatus::Domain => "domain error\0",
        CygapStatus::Numeric => "numeric error\0",
        CygapStatus::Branch => "branch error\0",
        CygapStatus::Conditioning => "conditioning error\0",
        CygapStatus::Integration => "integration error\0",
        CygapStatus::Internal => "internal error\0",
    };
    s.as_ptr() as *const c_char
}

/// Gap probability E₂(0; (s,∞)) and σ(s) = (1+s²) R(s,s) for the N×N
/// ensemble with weight (1+λ²)^(−N−a), by the Nyström-resolvent route.
/// `quad_order` is the Gauss–Legendre order per segment (0 selects 256).
///
/// # Safety
/// `e2_out` and `sigma_out` must be valid, writable, aligned `double`
/// pointers; they are written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_gap_single(
    n: u32,
    a: f64,
    s: f64,
    quad_order: u32,
    e2_out: *mut f64,
    sigma_out: *mut f64,
) -> CygapStatus {
    if e2_out.is_null() || sigma_out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| {
        let order = if quad_order == 0 { DEFAULT_ORDER } else { quad_order } as usize;
        let params = match EnsembleParams::new(n as usize, a) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        match resolvent_at_endpoint(&params, &IntervalSpec::SingleTail { s }, order) {
            Ok(r) => {
                *e2_out = r.e2;
                *sigma_out = (1.0 + s * s) * r.r_diag;
                CygapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Gap probability E₂(0; (−∞,−s)∪(s,∞)), σ(s) and the resolvent product
/// R₀ = qp/s for the symmetric double interval. `quad_order` as in
/// [`cygap_gap_single`].
///
/// # Safety
/// `e2_out`, `sigma_out` and `r0_out` must be valid, writable, aligned
/// `double` pointers; they are written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_gap_double(
    n: u32,
    a: f64,
    s: f64,
    quad_order: u32,
    e2_out: *mut f64,
    sigma_out: *mut f64,
    r0_out: *mut f64,
) -> CygapStatus {
    if e2_out.is_null() || sigma_out.is_null() || r0_out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| {
        let order = if quad_order == 0 { DEFAULT_ORDER } else { quad_order } as usize;
        let params = match EnsembleParams::new(n as usize, a) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        if !(s > 0.0) {
            return CygapStatus::Domain;
        }
        match resolvent_at_endpoint(&params, &IntervalSpec::DoubleTail { s }, order) {
            Ok(r) => {
                *e2_out = r.e2;
                *sigma_out = (1.0 + s * s) * r.r_diag;
                *r0_out = (r.q * r.p / s).abs();
                CygapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Closed hypergeometric form of the single-interval gap (N ≤ 2 only).
///
/// # Safety
/// `e2_out` and `sigma_out` must be valid, writable, aligned `double`
/// pointers; they are written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_gap_single_exact(
    n: u32,
    a: f64,
    s: f64,
    e2_out: *mut f64,
    sigma_out: *mut f64,
) -> CygapStatus {
    if e2_out.is_null() || sigma_out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| match exact_gap_single(n as usize, a, s) {
        Ok((e2, sigma)) => {
            *e2_out = e2;
            *sigma_out = sigma;
            CygapStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Closed hypergeometric form of the double-interval gap (N ≤ 2 only).
///
/// # Safety
/// `e2_out`, `sigma_out` and `r0_out` must be valid, writable, aligned
/// `double` pointers; they are written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_gap_double_exact(
    n: u32,
    a: f64,
    s: f64,
    e2_out: *mut f64,
    sigma_out: *mut f64,
    r0_out: *mut f64,
) -> CygapStatus {
    if e2_out.is_null() || sigma_out.is_null() || r0_out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| match exact_gap_double(n as usize, a, s) {
        Ok((e2, sigma, f)) => {
            *e2_out = e2;
            *sigma_out = sigma;
            *r0_out = (f - a * s) / (2.0 * (1.0 + s * s));
            CygapStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Opaque handle holding dense scaled-limit trajectories for one (a, ρ):
/// the one-sided τ_a/gap track and the symmetric hard-edge track.
pub struct CygapScaled {
    c: f64, // πρ: scaled coordinate t = c·x
    t_lo: f64,
    t_hi: f64,
    ys: Vec<f64>,
    taus: Vec<f64>,
    tds: Vec<f64>,
    ells: Vec<f64>,
    ellds: Vec<f64>,
    xs: Vec<f64>,
    les: Vec<f64>,
    lds: Vec<f64>,
    xrs: Vec<f64>,
    xrds: Vec<f64>,
}

/// Build the scaled-limit tables for hard-edge exponent `a ≥ 0`, bulk
/// density `rho > 0`, covering 1.5e−3 ≤ π·rho·x ≤ π·rho·x_max. On success
/// writes a handle that must be released with [`cygap_scaled_free`].
///
/// # Safety
/// `out` must be a valid, writable, aligned pointer to a handle slot; it
/// is written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_scaled_new(
    a: f64,
    rho: f64,
    x_max: f64,
    out: *mut *mut CygapScaled,
) -> CygapStatus {
    if out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| {
        if !a.is_finite() || a < 0.0 || !(rho > 0.0) || !rho.is_finite() {
            return CygapStatus::Domain;
        }
        let c = std::f64::consts::PI * rho;
        let t_end = c * x_max;
        if !(t_end > 2e-3) || !t_end.is_finite() {
            return CygapStatus::Domain;
        }
        let n_one = (((t_end - 1e-3) / 0.004).ceil() as usize + 2).max(600);
        let one = match integrate_scaled_single(a, t_end, n_one) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        let n_sym = ((t_end / 0.004).ceil() as usize + 2).max(600);
        let sym = match integrate_bessel(a, t_end, n_sym) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        let h = Box::new(CygapScaled {
            c,
            t_lo: one.samples[0].s.max(sym.states[0].x),
            t_hi: t_end,
            ys: one.samples.iter().map(|s| s.s).collect(),
            taus: one.samples.iter().map(|s| s.sigma).collect(),
            tds: one.samples.iter().map(|s| s.sigma_d).collect(),
            ells: one.samples.iter().map(|s| s.e2.ln()).collect(),
            ellds: one.samples.iter().map(|s| -s.sigma / s.s).collect(),
            xs: sym.states.iter().map(|st| st.x).collect(),
            les: sym.states.iter().map(|st| st.log_e2).collect(),
            lds: sym.states.iter().map(|st| -2.0 * st.r(a)).collect(),
            xrs: sym.states.iter().map(|st| st.x * st.r(a)).collect(),
            xrds: sym.states.iter().map(|st| st.q * st.q + st.p * st.p).collect(),
        });
        *out = Box::into_raw(h);
        CygapStatus::Ok
    })
}

/// Evaluate the scaled tables at `x`: τ_a(πρx), the one-sided gap
/// E₂(0;(0,x)), σ₁ at the symmetric endpoints, and the symmetric gap
/// E₂(0;(−x,x)). `x` must satisfy t_lo ≤ π·rho·x ≤ π·rho·x_max of the
/// handle's construction.
///
/// # Safety
/// `handle` must be a live pointer from [`cygap_scaled_new`] that has not
/// been freed; the four out-pointers must be valid, writable, aligned
/// `double` pointers. Outputs are written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_scaled_eval(
    handle: *const CygapScaled,
    x: f64,
    tau_out: *mut f64,
    e2_one_out: *mut f64,
    sigma1_out: *mut f64,
    e2_sym_out: *mut f64,
) -> CygapStatus {
    if handle.is_null()
        || tau_out.is_null()
        || e2_one_out.is_null()
        || sigma1_out.is_null()
        || e2_sym_out.is_null()
    {
        return CygapStatus::NullPointer;
    }
    let h = &*handle;
    guard(|| {
        let t = h.c * x;
        if !(t >= h.t_lo) || !(t <= h.t_hi) {
            return CygapStatus::Domain;
        }
        let tau = match hermite_eval(&h.ys, &h.taus, &h.tds, t) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let ell = match hermite_eval(&h.ys, &h.ells, &h.ellds, t) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let xr = match hermite_eval(&h.xs, &h.xrs, &h.xrds, t) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let lsym = match hermite_eval(&h.xs, &h.les, &h.lds, t) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        *tau_out = tau;
        *e2_one_out = ell.exp();
        *sigma1_out = -2.0 * xr;
        *e2_sym_out = lsym.exp();
        CygapStatus::Ok
    })
}

/// Release a handle from [`cygap_scaled_new`]. A null handle is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer from [`cygap_scaled_new`] that has
/// not already been freed; the handle must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cygap_scaled_free(handle: *mut CygapScaled) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Opaque handle for the bulk nearest-neighbour spacing density p₂.
pub struct CygapSpacing {
    inner: SpacingDensity,
}

/// Build the spacing-density table covering 0 ≤ x ≤ x_max (x in units of
/// the mean spacing; x_max > 0.1). Release with [`cygap_spacing_free`].
///
/// # Safety
/// `out` must be a valid, writable, aligned pointer to a handle slot; it
/// is written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_spacing_new(x_max: f64, out: *mut *mut CygapSpacing) -> CygapStatus {
    if out.is_null() {
        return CygapStatus::NullPointer;
    }
    guard(|| match SpacingDensity::new(x_max) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CygapSpacing { inner }));
            CygapStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Evaluate p₂(x) for 0 ≤ x ≤ x_max of the handle's construction.
///
/// # Safety
/// `handle` must be a live pointer from [`cygap_spacing_new`] that has not
/// been freed; `p2_out` must be a valid, writable, aligned `double`
/// pointer. It is written only on `CYGAP_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn cygap_spacing_eval(
    handle: *const CygapSpacing,
    x: f64,
    p2_out: *mut f64,
) -> CygapStatus {
    if handle.is_null() || p2_out.is_null() {
        return CygapStatus::NullPointer;
    }
    let h = &*handle;
    guard(|| match h.inner.eval(x) {
        Ok(v) => {
            *p2_out = v;
            CygapStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a handle from [`cygap_spacing_new`]. A null handle is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer from [`cygap_spacing_new`] that has
/// not already been freed; the handle must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cygap_spacing_free(handle: *mut CygapSpacing) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
