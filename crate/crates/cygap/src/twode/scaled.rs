//! Bulk-scaled single-interval gap quantities: the τ_a ODE, the nearest-
//! neighbour spacing density built from τ₁, and finite-size convergence
//! checks against the scaled limits.
//!
//! In the thermodynamic limit at density ρ the single-interval σ-function
//! degenerates to τ_a(x) ≡ xσ(x) satisfying
//!
//! ```text
//!   x²(τ̈)² − 4(xτ̇ − τ)τ̇² − 4a²τ̇² + 4(xτ̇ − τ)² = 0,
//!   τ_a(x) ~ (x/2)^{2a+1}/(Γ(a+½)Γ(a+3/2))   as x → 0,
//!   E₂(0;(0,x);a) = exp(−∫₀^{πρx} τ_a(y)/y dy),
//! ```
//!
//! with the spacing density p₂(x) = τ₁(πx)/x·exp(−∫₀^{πx}τ₁/y) at unit
//! mean spacing.  The integration starts from the series about x = 0 —
//! the leading power plus its x² correction −2a x²/((2a+1)(2a+3)) and the
//! nonlinear x^{4a+2} term c₀²/(2a+1), both obtained by substituting the
//! power series into the quadratic ODE (at a = 0 the orders merge into
//! c₀x + c₀²x² + c₀³x³ + (c₀⁴ − c₀²/9)x⁴) — and picks the τ̈ root by
//! continuity from the series value.

use crate::ensemble::{EnsembleParams, IntervalSpec};
use crate::error::{Error, Result};
use crate::fredholm::resolvent_at_endpoint;
use crate::ode::{integrate_to_grid, OdeOptions};
use crate::specfun::gamma::gamma;
use crate::twode::bessel_sys::integrate_bessel;
use crate::twode::{ascending_grid, hermite_eval, MethodTag, SigmaGrid, SigmaSample};
use std::cell::Cell;
use std::f64::consts::PI;

/// Series start of the scaled trajectories.
const X0: f64 = 1e-3;
/// Quadrature order for the finite-size resolvents in the limit check.
const LIMIT_ORDER: usize = 256;

// τ, τ̇, τ̈ and the head −∫₀ˣ τ/y of the log-determinant, from the series.
fn tau_series(a: f64, x: f64) -> Result<[f64; 4]> {
    let c0 = 0.5f64.powf(2.0 * a + 1.0) / (gamma(a + 0.5)? * gamma(a + 1.5)?);
    if a == 0.0 {
        let (e2, e3) = (c0 * c0, c0 * c0 * c0);
        let e4 = c0 * c0 * c0 * c0 - c0 * c0 / 9.0;
        let tau = x * (c0 + x * (e2 + x * (e3 + x * e4)));
        let taud = c0 + x * (2.0 * e2 + x * (3.0 * e3 + x * 4.0 * e4));
        let taudd = 2.0 * e2 + x * (6.0 * e3 + x * 12.0 * e4);
        let head = x * (c0 + x * (e2 / 2.0 + x * (e3 / 3.0 + x * e4 / 4.0)));
        Ok([tau, taud, taudd, -head])
    } else {
        let m = 2.0 * a + 1.0;
        let b2 = 2.0 * a / (m * (m + 2.0));
        let d2 = c0 * c0 / m;
        let tau = c0 * x.powf(m) * (1.0 - b2 * x * x) + d2 * x.powf(2.0 * m);
        let taud = c0 * (m * x.powf(m - 1.0) - (m + 2.0) * b2 * x.powf(m + 1.0))
            + 2.0 * m * d2 * x.powf(2.0 * m - 1.0);
        let taudd = c0
            * (m * (m - 1.0) * x.powf(m - 2.0)
                - (m + 2.0) * (m + 1.0) * b2 * x.powf(m))
            + 2.0 * m * (2.0 * m - 1.0) * d2 * x.powf(2.0 * m - 2.0);
        let head = c0 * x.powf(m) / m - c0 * b2 * x.powf(m + 2.0) / (m + 2.0)
            + d2 * x.powf(2.0 * m) / (2.0 * m);
        Ok([tau, taud, taudd, -head])
    }
}

// Radicand of the τ̈ quadratic, (xτ̇−τ)τ̇² + a²τ̇² − (xτ̇−τ)², with a
// magnitude scale for the branch guard.
fn tau_rest(a: f64, x: f64, tau: f64, taud: f64) -> (f64, f64) {
    let am = x * taud - tau;
    let t1 = am * taud * taud;
    let t2 = a * a * taud * taud;
    let t3 = am * am;
    let scale = t1.abs() + t2 + t3 + 1e-300;
    (t1 + t2 - t3, scale)
}

// τ̈ = ±(2/x)√rest, branch chosen by continuity with the previous value.
fn tau_dd_root(a: f64, x: f64, tau: f64, taud: f64, prev: &Cell<f64>) -> Result<f64> {
    let (rest, scale) = tau_rest(a, x, tau, taud);
    if rest < -1e-6 * scale {
        return Err(Error::Branch(format!(
            "scaled-form discriminant negative ({rest:.2e} vs scale {scale:.2e}) at x = {x}"
        )));
    }
    let mag = 2.0 * rest.max(0.0).sqrt() / x;
    let root = if (prev.get() - mag).abs() <= (prev.get() + mag).abs() {
        mag
    } else {
        -mag
    };
    prev.set(root);
    Ok(root)
}

/// Residual of the scaled quadratic form; zero on true trajectories.
pub fn sigma_residual_scaled(a: f64, x: f64, tau: f64, taud: f64, taudd: f64) -> f64 {
    let am = x * taud - tau;
    x * x * taudd * taudd - 4.0 * am * taud * taud - 4.0 * a * a * taud * taud
        + 4.0 * am * am
}

/// Integrates the scaled single-interval τ_a-form from the series start
/// x₀ = 1e−3 up to `x_end` in the scaled variable, reporting `n_out`
/// samples.  The grid carries τ in the σ slot, τ̇ in the derivative slot
/// and E₂(0;(0,x/(πρ));a) = exp(−∫₀ˣ τ/y) in the determinant slot.
pub fn integrate_scaled_single(a: f64, x_end: f64, n_out: usize) -> Result<SigmaGrid> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("requires a >= 0, got {a}")));
    }
    let grid = ascending_grid(X0, x_end, n_out)?;
    let [tau0, taud0, taudd0, l0] = tau_series(a, X0)?;
    let prev = Cell::new(taudd0);
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        dy[0] = y[1];
        dy[1] = tau_dd_root(a, x, y[0], y[1], &prev)?;
        dy[2] = -y[0] / x;
        Ok(())
    };
    let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() };
    let track = integrate_to_grid(rhs, &grid, &[tau0, taud0, l0], &opts)?;
    let samples = grid
        .iter()
        .zip(track.iter())
        .map(|(&x, y)| SigmaSample {
            s: x,
            sigma: y[0],
            sigma_d: y[1],
            e2: y[2].exp(),
        })
        .collect();
    let out = SigmaGrid { method: MethodTag::SigmaOde, samples };
    out.validate()?;
    Ok(out)
}

/// Nearest-neighbour spacing density p₂ at unit mean spacing, built once
/// from the τ₁ trajectory and evaluated by interpolation.
#[derive(Debug, Clone)]
pub struct SpacingDensity {
    ys: Vec<f64>,
    tau: Vec<f64>,
    taud: Vec<f64>,
    ell: Vec<f64>,
    elld: Vec<f64>,
    x_max: f64,
}

impl SpacingDensity {
    /// Builds the τ₁ track out to the scaled argument π·`x_max`.
    pub fn new(x_max: f64) -> Result<Self> {
        if !(x_max > 0.1) || !x_max.is_finite() {
            return Err(Error::Domain(format!("requires x_max > 0.1, got {x_max}")));
        }
        let t_end = PI * x_max;
        let n = (((t_end - X0) / 0.008).ceil() as usize + 1).max(400);
        let g = integrate_scaled_single(1.0, t_end, n)?;
        let ys: Vec<f64> = g.samples.iter().map(|s| s.s).collect();
        let tau: Vec<f64> = g.samples.iter().map(|s| s.sigma).collect();
        let taud: Vec<f64> = g.samples.iter().map(|s| s.sigma_d).collect();
        let ell: Vec<f64> = g.samples.iter().map(|s| s.e2.ln()).collect();
        let elld: Vec<f64> = g.samples.iter().map(|s| -s.sigma / s.s).collect();
        Ok(SpacingDensity { ys, tau, taud, ell, elld, x_max })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// p₂(x) = τ₁(πx)/x · exp(−∫₀^{πx} τ₁(y)/y dy).
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("requires x >= 0, got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let y = PI * x;
        if y <= self.ys[0] {
            // below the built grid the series suffices: p₂ → (π²/3)x²
            let [tau, _, _, ell] = tau_series(1.0, y)?;
            return Ok(tau / x * ell.exp());
        }
        if y > *self.ys.last().unwrap() * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "x = {x} beyond the built range x_max = {}",
                self.x_max
            )));
        }
        let tau = hermite_eval(&self.ys, &self.tau, &self.taud, y)?;
        let ell = hermite_eval(&self.ys, &self.ell, &self.elld, y)?;
        Ok(tau / x * ell.exp())
    }
}

/// Finite-size convergence of the scaled limits at fixed a and fixed
/// relative position y, across a sequence of matrix sizes (ρ = N/L = 1).
#[derive(Debug, Clone)]
pub struct ScaledLimitReport {
    pub a: f64,
    pub y: f64,
    pub sizes: Vec<usize>,
    /// |(1/N)σ_N(cot(πy/N)) − τ_a(πy)/(πy)| per size.
    pub dev_single: Vec<f64>,
    /// |N·R₀_N(cot(πy/N)) − πy·q∞(πy)p∞(πy)| per size.
    pub dev_double: Vec<f64>,
}

impl ScaledLimitReport {
    pub fn monotone_single(&self) -> bool {
        self.dev_single.windows(2).all(|w| w[1] < w[0])
    }

    pub fn monotone_double(&self) -> bool {
        self.dev_double.windows(2).all(|w| w[1] < w[0])
    }
}

/// Compares finite-N single- and double-interval quantities at the
/// matched point s = cot(πy/N) against their thermodynamic limits.
pub fn scaled_limit_check(a: f64, y: f64, sizes: &[usize]) -> Result<ScaledLimitReport> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("requires y > 0, got {y}")));
    }
    if sizes.is_empty() {
        return Err(Error::Domain("need at least one size".into()));
    }
    let t = PI * y;
    let single_target = {
        let g = integrate_scaled_single(a, t, 50)?;
        g.samples.last().unwrap().sigma / t
    };
    let double_target = {
        let sol = integrate_bessel(a, t, 50)?;
        let st = sol.states.last().unwrap();
        t * st.q * st.p
    };
    let mut dev_single = Vec::with_capacity(sizes.len());
    let mut dev_double = Vec::with_capacity(sizes.len());
    for &n in sizes {
        if 2 * n < 1 || (y >= n as f64 / 2.0) {
            return Err(Error::Domain(format!(
                "relative position y = {y} outside (0, N/2) for N = {n}"
            )));
        }
        let params = EnsembleParams { n, a };
        let s = 1.0 / (PI * y / n as f64).tan();
        let single =
            resolvent_at_endpoint(&params, &IntervalSpec::SingleTail { s }, LIMIT_ORDER)?;
        let sigma_fin = (1.0 + s * s) * single.r_diag;
        dev_single.push((sigma_fin / n as f64 - single_target).abs());
        let double =
            resolvent_at_endpoint(&params, &IntervalSpec::DoubleTail { s }, LIMIT_ORDER)?;
        let r0 = (double.q * double.p / s).abs();
        dev_double.push((n as f64 * r0 - double_target).abs());
    }
    Ok(ScaledLimitReport {
        a,
        y,
        sizes: sizes.to_vec(),
        dev_single,
        dev_double,
    })
}
