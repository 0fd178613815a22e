//! ODE routes to the gap probabilities: the coupled endpoint systems,
//! their second-degree σ-form reductions, the scaled (bulk-singularity)
//! limits, and the spacing density assembled from them.
//!
//! The primary evolution is always a coupled polynomial system in the
//! endpoint quantities (q, p, …) — single-valued vector fields with no
//! branch ambiguity.  The σ-forms, which are quadratic in the highest
//! derivative, serve as residual checks and as alternative integrators
//! whose branch is picked by continuity from the seed.
//!
//! All finite-N trajectories are seeded at a large `s_start` from a
//! Fredholm resolvent solve ([`crate::fredholm::resolvent_at_endpoint`])
//! rather than from truncated asymptotic expansions, and are integrated
//! inward (descending s).  Scaled trajectories start from convergent
//! small-x series and are integrated outward.

mod bessel_sys;
mod double;
mod scaled;
mod single;

pub use bessel_sys::{
    aux_qp_scaled_map, integrate_bessel, sigma_residual_bessel, AuxQpSample, BesselSolution,
    BesselState,
};
pub use double::{
    aux_qp_boundary_values, aux_qp_double, integrate_double, integrate_double_sigma,
    sigma_residual_double_f, sigma_residual_double_t, DoubleSolution, TwStateDouble,
};
pub use scaled::{
    integrate_scaled_single, scaled_limit_check, sigma_residual_scaled, ScaledLimitReport,
    SpacingDensity,
};
pub use single::{integrate_single, integrate_single_sigma, sigma_residual_single, SingleSolution, TwStateSingle};

use crate::error::{Error, Result};

/// Which computational route produced a [`SigmaGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Fredholm,
    Coupled,
    SigmaOde,
    ClosedForm,
}

impl MethodTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodTag::Fredholm => "fredholm",
            MethodTag::Coupled => "coupled",
            MethodTag::SigmaOde => "sigma-ode",
            MethodTag::ClosedForm => "closed-form",
        }
    }
}

/// One sample of a σ-trajectory: abscissa (s, or x for scaled routes),
/// σ, its derivative, and the accumulated gap probability.
#[derive(Debug, Clone, Copy)]
pub struct SigmaSample {
    pub s: f64,
    pub sigma: f64,
    pub sigma_d: f64,
    pub e2: f64,
}

/// An ordered σ/E₂ table tagged with the method that produced it.
///
/// Samples are strictly ascending in the abscissa.  For the scaled
/// single-interval route the σ slot holds τ_a and E₂ is the gap
/// probability of (0, x) in the scaled variable.
#[derive(Debug, Clone)]
pub struct SigmaGrid {
    pub method: MethodTag,
    pub samples: Vec<SigmaSample>,
}

impl SigmaGrid {
    /// Basic sanity: strictly ascending abscissa, E₂ within (0, 1].
    pub fn validate(&self) -> Result<()> {
        for w in self.samples.windows(2) {
            if w[1].s <= w[0].s {
                return Err(Error::Domain("sigma grid not strictly ascending".into()));
            }
        }
        for smp in &self.samples {
            if !(smp.e2 > 0.0 && smp.e2 <= 1.0 + 1e-12) {
                return Err(Error::Numeric(format!(
                    "E2 = {} outside (0,1] at s = {}",
                    smp.e2, smp.s
                )));
            }
        }
        Ok(())
    }
}

/// Builds the descending integration grid s_start → s_end.
pub(crate) fn descending_grid(s_start: f64, s_end: f64, n_out: usize) -> Result<Vec<f64>> {
    if !(s_start.is_finite() && s_end.is_finite()) || s_start <= s_end {
        return Err(Error::Domain(format!(
            "need finite s_start > s_end, got [{s_end}, {s_start}]"
        )));
    }
    if n_out < 2 {
        return Err(Error::Domain("need at least two output points".into()));
    }
    let h = (s_end - s_start) / (n_out - 1) as f64;
    Ok((0..n_out).map(|i| s_start + h * i as f64).collect())
}

/// Ascending grid 0 < x₀ … x_end for the scaled outward integrations.
pub(crate) fn ascending_grid(x0: f64, x_end: f64, n_out: usize) -> Result<Vec<f64>> {
    if !(x0 > 0.0) || !(x_end > x0) || !x_end.is_finite() {
        return Err(Error::Domain(format!(
            "need 0 < x0 < x_end finite, got [{x0}, {x_end}]"
        )));
    }
    if n_out < 2 {
        return Err(Error::Domain("need at least two output points".into()));
    }
    let h = (x_end - x0) / (n_out - 1) as f64;
    Ok((0..n_out).map(|i| x0 + h * i as f64).collect())
}

/// Piecewise cubic Hermite evaluation on an ascending grid with known
/// derivatives; used to read trajectories off between their nodes.
///
/// All three slices must have the same length (≥ 2) and `xs` must be
/// strictly ascending; `x` may sit anywhere inside `[xs[0], xs[last]]`
/// (a relative 1e−12 overhang is tolerated and clamped).
pub fn hermite_eval(xs: &[f64], ys: &[f64], ds: &[f64], x: f64) -> Result<f64> {
    if xs.len() < 2 || xs.len() != ys.len() || xs.len() != ds.len() {
        return Err(Error::Domain("hermite table shape mismatch".into()));
    }
    if x < xs[0] - 1e-12 || x > xs[xs.len() - 1] + 1e-12 {
        return Err(Error::Domain(format!(
            "x = {x} outside interpolation range [{}, {}]",
            xs[0],
            xs[xs.len() - 1]
        )));
    }
    let x = x.clamp(xs[0], xs[xs.len() - 1]);
    // binary search for the containing cell
    let mut lo = 0usize;
    let mut hi = xs.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if xs[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = xs[hi] - xs[lo];
    let t = (x - xs[lo]) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    Ok(h00 * ys[lo] + h10 * h * ds[lo] + h01 * ys[hi] + h11 * h * ds[hi])
}
