//! Gauss hypergeometric function ₂F₁(a, b; c; z) for z ≤ 0.
//!
//! Only the non-positive real axis is needed: every closed gap formula in
//! this crate evaluates ₂F₁ at −s² or −1/s². The direct power series
//! converges for |z| < 1; for z ≤ −1/2 the Pfaff transformation
//!
//!   ₂F₁(a, b; c; z) = (1−z)^(−b) ₂F₁(c−a, b; c; z/(z−1))
//!
//! maps the argument to w = z/(z−1) ∈ [1/3, 1), and of the two Pfaff
//! variants we take the one whose transformed series converges faster at
//! w → 1, i.e. the larger of a, b goes into the prefactor exponent.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const TERM_TOL: f64 = 1e-17;

/// Direct series Σ (a)_k (b)_k / ((c)_k k!) z^k for |z| < 1.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let denom = (c + kf) * (1.0 + kf);
        term *= (a + kf) * (b + kf) / denom * z;
        if term == 0.0 {
            // terminating (polynomial) case
            return Ok(sum);
        }
        sum += term;
        if term.abs() < TERM_TOL * sum.abs().max(1e-300) {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!(
        "2F1 series did not converge for a={a} b={b} c={c} z={z}"
    )))
}

/// ₂F₁(a, b; c; z) for z ≤ 0. `c` must not be a non-positive integer.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !z.is_finite() || z > 0.0 {
        return Err(Error::Domain(format!(
            "gauss_2f1 implemented for z <= 0 only, got z = {z}"
        )));
    }
    if c <= 0.0 && c == c.floor() {
        return Err(Error::Domain(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z > -0.5 {
        return series(a, b, c, z);
    }
    // Pfaff: pick the variant keeping the smaller upper parameter, which
    // maximises c − (transformed a) − (transformed b) and hence the
    // convergence rate at w → 1.
    let w = z / (z - 1.0);
    let one_minus_z = 1.0 - z;
    if a >= b {
        // (1-z)^(-b) 2F1(c-a, b; c; w)
        Ok(one_minus_z.powf(-b) * series(c - a, b, c, w)?)
    } else {
        // (1-z)^(-a) 2F1(a, c-b; c; w)
        Ok(one_minus_z.powf(-a) * series(a, c - b, c, w)?)
    }
}
