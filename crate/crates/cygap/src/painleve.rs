//! Painlevé parameter sets for the gap probabilities, the canonical-form
//! coefficients of the underlying second-degree ODEs, the gauge carrying
//! the single-interval σ-form to its Painlevé-VI frame, and numerical
//! verification of two transcendent identities: the τ₁/τ₀ relation for
//! the scaled one-sided gap and the Painlevé-V reduction of the hard-edge
//! auxiliary variables.

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::twode::{BesselSolution, SigmaGrid};
use num_complex::Complex64;

/// Which Painlevé equation a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PainleveFamily {
    Pv,
    Pvi,
}

/// One (α, β, γ, δ) parameter set of a Painlevé-V or -VI equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainleveParams {
    pub family: PainleveFamily,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl PainleveParams {
    fn pvi(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        PainleveParams { family: PainleveFamily::Pvi, alpha, beta, gamma, delta }
    }

    fn pv(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        PainleveParams { family: PainleveFamily::Pv, alpha, beta, gamma, delta }
    }
}

/// A parameter row whose α entry carries a ± sign choice; `plus` takes the
/// + sign in front of the varying combination, `minus` the − sign.  Rows
/// without a sign choice have both fields equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPair {
    pub plus: PainleveParams,
    pub minus: PainleveParams,
}

/// Free coefficients of the canonical second-degree second-order form
/// (the quartic-resonance normal form) satisfied by the single-interval
/// σ-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// The eight Painlevé-VI parameter sets equivalent under Schlesinger
/// transformations that characterise the single-interval gap probability
/// on (s, ∞).
pub fn pvi_parameter_table(params: &EnsembleParams) -> [BranchPair; 8] {
    let n = params.n as f64;
    let a = params.a;
    let na2 = (n + a) * (n + a);
    let h = n * (n + 2.0 * a);
    let row = |alpha: &dyn Fn(f64) -> f64, beta: f64, gamma: f64, delta: f64| BranchPair {
        plus: PainleveParams::pvi(alpha(1.0), beta, gamma, delta),
        minus: PainleveParams::pvi(alpha(-1.0), beta, gamma, delta),
    };
    [
        row(&|_| 0.5, -0.5 * na2, 0.5 * na2, 0.5 - 2.0 * a * a),
        row(
            &|e| 0.5 * (1.0 + e * 2.0 * a).powi(2),
            -0.5 * na2,
            0.5 * na2,
            0.5,
        ),
        row(
            &|e| 0.5 * (1.0 + e * (n + 2.0 * a)).powi(2),
            -0.5 * a * a,
            0.5 * a * a,
            0.5 * (1.0 - n * n),
        ),
        row(
            &|e| 0.5 * (1.0 + e * n).powi(2),
            -0.5 * a * a,
            0.5 * a * a,
            0.5 * (1.0 - (n + 2.0 * a) * (n + 2.0 * a)),
        ),
        row(
            &|e| 0.5 * (1.0 + e * (n + a)).powi(2),
            0.0,
            2.0 * a * a,
            0.5 * (1.0 - na2),
        ),
        row(
            &|e| 0.5 * (1.0 + e * (n + a)).powi(2),
            -2.0 * a * a,
            0.0,
            0.5 * (1.0 - na2),
        ),
        row(
            &|e| 0.5 * (1.0 + e * a).powi(2),
            -0.5 * h,
            2.0 * a * a + 0.5 * h,
            0.5 * (1.0 - a * a),
        ),
        row(
            &|e| 0.5 * (1.0 + e * a).powi(2),
            2.0 * a * a - 0.5 * h,
            0.5 * h,
            0.5 * (1.0 - a * a),
        ),
    ]
}

/// Free parameters of the canonical form for the single-interval σ-ODE:
/// A₁ = 3a² + N(N+2a), A₂ = 0, A₃ = 3a⁴ + 2a²N(N+2a), A₄ = a⁶ + a⁴N(N+2a).
pub fn canonical_coeffs_single(params: &EnsembleParams) -> CanonicalCoeffs {
    let a = params.a;
    let h = params.n as f64 * (params.n as f64 + 2.0 * a);
    CanonicalCoeffs {
        a1: 3.0 * a * a + h,
        a2: 0.0,
        a3: 3.0 * a.powi(4) + 2.0 * a * a * h,
        a4: a.powi(6) + a.powi(4) * h,
    }
}

/// Painlevé-V parameter sets of the scaled regimes: the sets for the
/// one-sided scaled gap ODE in τ_a, and the set governing the hard-edge
/// auxiliary variable p(x) on the symmetric interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParamSets {
    /// τ_a transcendent u(x): α = ½(1∓2a)², β = 0, γ = 0, δ = 2.
    pub tau: BranchPair,
    /// Alternative set for the same transcendent: (½, −2a², 0, 2).
    pub tau_alt: PainleveParams,
    /// Hard-edge reduction y(x): ((1−2a)²/32, −(1−2a)²/32, 0, −2).
    pub hard_edge: PainleveParams,
}

pub fn scaled_pv_params(a: f64) -> ScaledParamSets {
    let c = (1.0 - 2.0 * a) * (1.0 - 2.0 * a) / 32.0;
    ScaledParamSets {
        tau: BranchPair {
            plus: PainleveParams::pv(0.5 * (1.0 + 2.0 * a).powi(2), 0.0, 0.0, 2.0),
            minus: PainleveParams::pv(0.5 * (1.0 - 2.0 * a).powi(2), 0.0, 0.0, 2.0),
        },
        tau_alt: PainleveParams::pv(0.5, -2.0 * a * a, 0.0, 2.0),
        hard_edge: PainleveParams::pv(c, -c, 0.0, -2.0),
    }
}

/// Painlevé-VI parameter sets for the double-interval quantities R₀, F, σ
/// (sign choice in β): α = ⅛, β = −⅛(1±2a)², γ = 0, δ = ½(1−(N+a)²).
pub fn double_pvi_params(params: &EnsembleParams) -> BranchPair {
    let a = params.a;
    let d = 0.5 * (1.0 - (params.n as f64 + a) * (params.n as f64 + a));
    BranchPair {
        plus: PainleveParams::pvi(0.125, -0.125 * (1.0 + 2.0 * a).powi(2), 0.0, d),
        minus: PainleveParams::pvi(0.125, -0.125 * (1.0 - 2.0 * a).powi(2), 0.0, d),
    }
}

/// The affine gauge carrying the single-interval σ-form into its
/// Painlevé-VI frame: t = ½(1 − is), η = (σ − a²s)/(2i).
#[derive(Debug, Clone, Copy)]
pub struct GaugeMap {
    pub a: f64,
}

impl GaugeMap {
    pub fn t(&self, s: f64) -> Complex64 {
        Complex64::new(0.5, -0.5 * s)
    }

    pub fn eta(&self, s: f64, sigma: f64) -> Complex64 {
        // division by 2i is multiplication by −i/2
        Complex64::new(0.0, -0.5 * (sigma - self.a * self.a * s))
    }

    /// Inverts t = ½(1 − is).
    pub fn s_from_t(&self, t: Complex64) -> f64 {
        ((Complex64::new(1.0, 0.0) - 2.0 * t) * Complex64::new(0.0, -1.0)).re
    }

    /// Inverts η = (σ − a²s)/(2i) at the given s.
    pub fn sigma_from_eta(&self, s: f64, eta: Complex64) -> f64 {
        (eta * Complex64::new(0.0, 2.0)).re + self.a * self.a * s
    }
}

/// Applies the gauge pointwise along a single-interval σ grid, returning
/// the (t, η) pairs.
pub fn gauge_map_single(params: &EnsembleParams, grid: &SigmaGrid) -> Vec<(Complex64, Complex64)> {
    let map = GaugeMap { a: params.a };
    grid.samples
        .iter()
        .map(|sm| (map.t(sm.s), map.eta(sm.s, sm.sigma)))
        .collect()
}

/// Outcome of a pointwise identity check along a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    pub max_residual: f64,
    pub checked: usize,
    pub skipped: usize,
}

/// Maximum defect of the relation τ₁ = 1 + τ₀ − xτ₀′/τ₀ between the
/// scaled one-sided gap functions at a = 0 and a = 1, with τ₀′ formed by
/// centered differences on the common uniform grid.  Points with x < 0.05
/// or with τ₀ too small for the division are skipped and counted.
pub fn tau_identity_residual(tau0: &SigmaGrid, tau1: &SigmaGrid) -> Result<IdentityReport> {
    let n = tau0.samples.len();
    if n != tau1.samples.len() || n < 5 {
        return Err(Error::Domain(
            "need two equal-length grids of at least 5 points".into(),
        ));
    }
    for (s0, s1) in tau0.samples.iter().zip(tau1.samples.iter()) {
        if (s0.s - s1.s).abs() > 1e-12 * (1.0 + s0.s.abs()) {
            return Err(Error::Domain("grids are not on common abscissae".into()));
        }
    }
    let h = tau0.samples[1].s - tau0.samples[0].s;
    for w in tau0.samples.windows(2) {
        if ((w[1].s - w[0].s) / h - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(
                "centered differences need a uniform grid".into(),
            ));
        }
    }
    let mut report = IdentityReport { max_residual: 0.0, checked: 0, skipped: 0 };
    for i in 2..n - 2 {
        let x = tau0.samples[i].s;
        let t0 = tau0.samples[i].sigma;
        if x < 0.05 || t0.abs() < 1e-8 {
            report.skipped += 1;
            continue;
        }
        let d0 = (tau0.samples[i - 2].sigma - 8.0 * tau0.samples[i - 1].sigma
            + 8.0 * tau0.samples[i + 1].sigma
            - tau0.samples[i + 2].sigma)
            / (12.0 * h);
        let rhs = 1.0 + t0 - x * d0 / t0;
        let res = (tau1.samples[i].sigma - rhs).abs();
        report.max_residual = report.max_residual.max(res);
        report.checked += 1;
    }
    Ok(report)
}

/// Outcome of checking the hard-edge Painlevé-V reduction along a track.
#[derive(Debug, Clone, Copy)]
pub struct PvResidualReport {
    /// Largest scale-normalised residual of the Painlevé-V equation.
    pub max_residual: f64,
    /// Largest defect of the q-formula against the track, relative to 1+|q|.
    pub max_q_defect: f64,
    /// Largest defect of the σ₁-formula against −2xR, relative to 1+|σ₁|.
    pub max_sigma1_defect: f64,
    pub checked: usize,
    /// Points skipped near the pole of y (where p crosses √(x/2)).
    pub skipped: usize,
}

// Terms of the Painlevé-V equation in the standard second-order form
//   y″ = (1/(2y) + 1/(y−1))(y′)² − y′/x + (y−1)²(αy + β/y)/x²
//        + γy/x + δy(y+1)/(y−1),
// returned as (residual, magnitude scale).
fn pv_terms(pp: &PainleveParams, x: f64, y: f64, yd: f64, ydd: f64) -> (f64, f64) {
    let t1 = (0.5 / y + 1.0 / (y - 1.0)) * yd * yd;
    let t2 = -yd / x;
    let t3 = (y - 1.0) * (y - 1.0) / (x * x) * (pp.alpha * y + pp.beta / y);
    let t4 = pp.gamma * y / x;
    let t5 = pp.delta * y * (y + 1.0) / (y - 1.0);
    let res = ydd - t1 - t2 - t3 - t4 - t5;
    let scale = ydd.abs() + t1.abs() + t2.abs() + t3.abs() + t4.abs() + t5.abs() + 1e-300;
    (res, scale)
}

/// Verifies the Painlevé-V reduction of the hard-edge auxiliary variables
/// along an integrated track: maps p to y = (p + √(x/2))/(p − √(x/2)),
/// forms y′ and y″ analytically from the coupled system, and evaluates
/// the Painlevé-V residual with the hard-edge parameters together with
/// the companion formulas recovering q and σ₁(2x) from y.  Points too
/// close to the pole of y (p crossing √(x/2); the y-values grow without
/// bound there) are skipped and counted.
pub fn pv_residual_bessel(a: f64, sol: &BesselSolution) -> Result<PvResidualReport> {
    if (sol.a - a).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "track was integrated at a = {}, asked to check a = {a}",
            sol.a
        )));
    }
    let pp = scaled_pv_params(a).hard_edge;
    let mut report = PvResidualReport {
        max_residual: 0.0,
        max_q_defect: 0.0,
        max_sigma1_defect: 0.0,
        checked: 0,
        skipped: 0,
    };
    for st in &sol.states {
        let x = st.x;
        let (q, p, u, w) = (st.q, st.p, st.u, st.w);
        // first and second derivatives of p from the coupled system
        let c = (a - u + w) / x;
        let pd = -q + c * p;
        let qd = p - c * q;
        let pdd = -qd + 2.0 * (p * p - q * q) * p / x + c * (pd - p / x);
        let r = (0.5 * x).sqrt();
        let rd = r / (2.0 * x);
        let rdd = -r / (4.0 * x * x);
        let den = p - r;
        if den.abs() < 1e-4 * r.max(p) {
            report.skipped += 1;
            continue;
        }
        let y = (p + r) / den;
        let yd = 2.0 * (rd * p - pd * r) / (den * den);
        let ydd = 2.0 * ((rdd * p - pdd * r) * den - 2.0 * (rd * p - pd * r) * (pd - rd))
            / (den * den * den);
        let (res, scale) = pv_terms(&pp, x, y, yd, ydd);
        report.max_residual = report.max_residual.max(res.abs() / scale);
        let qf = (2.0 / x).sqrt() / (4.0 * y)
            * (-x * yd + 0.25 * (2.0 * a - 1.0) * (1.0 - y * y));
        report.max_q_defect = report.max_q_defect.max((qf - q).abs() / (1.0 + q.abs()));
        let b = x * yd / (1.0 - y) + 0.25 * (1.0 + y);
        let s1f = b * b / y - 0.25 * a * a * (1.0 + y) * (1.0 + y) / y
            - x * x * ((1.0 + y) / (1.0 - y)).powi(2);
        let s1t = -2.0 * x * st.r(a);
        report.max_sigma1_defect = report
            .max_sigma1_defect
            .max((s1f - s1t).abs() / (1.0 + s1t.abs()));
        report.checked += 1;
    }
    if report.checked == 0 {
        return Err(Error::Numeric("every track point sat on the y-pole".into()));
    }
    Ok(report)
}
