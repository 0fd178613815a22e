//! Orthogonal polynomials of the weight w(x) = (1+x²)^(−N−a) and the kernel
//! functions φ, ψ built from the top two of them.
//!
//! The monic family is a Jacobi family continued in its parameters: with
//! α = −N−a, the real polynomials
//!
//!   π_n(x) = i^(−n) P_n^{(α,α)}(ix)
//!
//! satisfy the three-term recurrence π_n = A_n x π_{n−1} + C_n π_{n−2},
//!
//!   A_n = (2n+2α−1)(n+α) / (n(n+2α)),   C_n = (n+α−1)(n+α) / (n(n+2α)),
//!
//! (the imaginary rotation flips the usual minus in front of C_n). Only
//! π_0 … π_{N−1} are normalisable against w; the degree-N polynomial enters
//! the Christoffel–Darboux kernel through the combination φ ∝ √w π_N whose
//! norm constant degenerates as a → 0. Both recurrence coefficients at the
//! final step n = N carry a factor a, so we evaluate π̄_N := π_N / a through
//! the exactly cancelled step
//!
//!   π̄_N = Â_N x π_{N−1} + Ĉ_N π_{N−2},
//!   Â_N = −(2a+1)/(N(N+2a)),  Ĉ_N = −(a+1)/(N(N+2a)),
//!
//! which stays finite and correct down to a = 0.
//!
//! Convention: φ and ψ below are the *balanced real* pair — the analogue of
//! rescaling q, p by the quartic root ((2a+1)/(2a−1))^(1/4) in the coupled
//! differential system. In this convention both coupling constants of
//!
//!   (1+x²) φ′ = −a x φ + b ψ,   (1+x²) ψ′ = −b φ + a x ψ
//!
//! equal b = √(N(N+2a)), every φψ-bilinear (in particular the kernel) is
//! unchanged, and everything is real and finite for all a ≥ 0 including
//! a = 0 and a = 1/2.

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma;

#[derive(Debug, Clone)]
pub struct OrthoPolySystem {
    pub params: EnsembleParams,
    /// b = √(N(N+2a)); the common coupling constant of the φ/ψ system.
    b: f64,
    /// Recurrence coefficients A_n, C_n for n = 1..N−1 (entry n−1).
    rec_a: Vec<f64>,
    rec_c: Vec<f64>,
    /// Hatted final-step coefficients for π̄_N.
    a_hat: f64,
    c_hat: f64,
    /// Orthonormal norm constants c_l for l = 0..N−1:
    /// p_l = (−1)^l c_l π_l.
    norm: Vec<f64>,
    /// Constants in φ = cφ √w π̄_N, ψ = cψ √w π_{N−1}.
    phi_const: f64,
    psi_const: f64,
}

impl OrthoPolySystem {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.validate()?;
        let nn = params.n;
        let n = nn as f64;
        let a = params.a;
        let alpha = -n - a;
        let b = (n * (n + 2.0 * a)).sqrt();

        let mut rec_a = Vec::with_capacity(nn.saturating_sub(1));
        let mut rec_c = Vec::with_capacity(nn.saturating_sub(1));
        for k in 1..nn {
            let kf = k as f64;
            let denom = kf * (kf + 2.0 * alpha);
            rec_a.push((2.0 * kf + 2.0 * alpha - 1.0) * (kf + alpha) / denom);
            rec_c.push((kf + alpha - 1.0) * (kf + alpha) / denom);
        }
        let a_hat = -(2.0 * a + 1.0) / (n * (n + 2.0 * a));
        let c_hat = -(a + 1.0) / (n * (n + 2.0 * a));

        // c_l = 2^(N+a) [ l! (N+a−l−1/2) Γ²(N+a−l) / (2π Γ(2N+2a−l)) ]^(1/2)
        let ln2 = std::f64::consts::LN_2;
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        let mut norm = Vec::with_capacity(nn);
        for l in 0..nn {
            let lf = l as f64;
            let ln_c = (n + a) * ln2
                + 0.5
                    * (ln_gamma(lf + 1.0)?
                        + (n + a - lf - 0.5).ln()
                        + 2.0 * ln_gamma(n + a - lf)?
                        - ln_2pi
                        - ln_gamma(2.0 * n + 2.0 * a - lf)?);
            norm.push(ln_c.exp());
        }

        // φ = (−1)^N 2^(N+a) Γ(a+1) [ b N! / (4π Γ(N+2a)) ]^(1/2) √w π̄_N
        // ψ = (−1)^(N−1) 2^(N+a) Γ(a+1) [ b (N−1)! / (4π Γ(N+2a+1)) ]^(1/2) √w π_{N−1}
        let ln_4pi = (4.0 * std::f64::consts::PI).ln();
        let sign_n = if nn % 2 == 0 { 1.0 } else { -1.0 };
        let ln_phi = (n + a) * ln2
            + ln_gamma(a + 1.0)?
            + 0.5 * (b.ln() + ln_gamma(n + 1.0)? - ln_4pi - ln_gamma(n + 2.0 * a)?);
        let ln_psi = (n + a) * ln2
            + ln_gamma(a + 1.0)?
            + 0.5 * (b.ln() + ln_gamma(n)? - ln_4pi - ln_gamma(n + 2.0 * a + 1.0)?);
        let phi_const = sign_n * ln_phi.exp();
        let psi_const = -sign_n * ln_psi.exp();

        Ok(OrthoPolySystem {
            params: params.clone(),
            b,
            rec_a,
            rec_c,
            a_hat,
            c_hat,
            norm,
            phi_const,
            psi_const,
        })
    }

    /// b = √(N(N+2a)).
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Raw π_l(x) for l ≤ N−1 and the hatted π̄_N for l = N, in one pass.
    fn pi_eval(&self, upto: usize, x: f64) -> f64 {
        let nn = self.params.n;
        debug_assert!(upto <= nn);
        let mut prev2 = 0.0_f64; // π_{-1}
        let mut prev1 = 1.0_f64; // π_0
        if upto == 0 {
            return 1.0;
        }
        for k in 1..upto.min(nn) {
            let cur = self.rec_a[k - 1] * x * prev1 + self.rec_c[k - 1] * prev2;
            prev2 = prev1;
            prev1 = cur;
        }
        if upto < nn {
            // loop above ran to k = upto−1; one more regular step
            self.rec_a[upto - 1] * x * prev1 + self.rec_c[upto - 1] * prev2
        } else {
            // hatted final step
            self.a_hat * x * prev1 + self.c_hat * prev2
        }
    }

    /// Both top-end polynomials π_{N−1}(x) and π̄_N(x) in one recurrence pass.
    fn pi_top_pair(&self, x: f64) -> (f64, f64) {
        let nn = self.params.n;
        let mut prev2 = 0.0_f64;
        let mut prev1 = 1.0_f64;
        for k in 1..nn {
            let cur = self.rec_a[k - 1] * x * prev1 + self.rec_c[k - 1] * prev2;
            prev2 = prev1;
            prev1 = cur;
        }
        let top = self.a_hat * x * prev1 + self.c_hat * prev2;
        (prev1, top)
    }

    /// π̃_l(x) := π_l(x)/x^l for l = `upto` (with the hatted variant at
    /// l = N), through the recurrence π̃_n = A_n π̃_{n−1} + C_n π̃_{n−2}/x².
    ///
    /// The π̃ are even functions of 1/x that tend to the leading
    /// coefficients as |x| → ∞; evaluating them instead of π_l keeps
    /// quadrature nodes far out on the mapped tails (|x| ~ 1e10 and
    /// beyond) from overflowing x^N before the weight can pull it back.
    /// Only useful for |x| ≳ 1 — the 1/x² corrections amplify as x → 0.
    fn pi_scaled_eval(&self, upto: usize, x: f64) -> f64 {
        let nn = self.params.n;
        debug_assert!(upto <= nn);
        let inv_x2 = 1.0 / (x * x);
        let mut prev2 = 0.0_f64;
        let mut prev1 = 1.0_f64;
        if upto == 0 {
            return 1.0;
        }
        for k in 1..upto.min(nn) {
            let cur = self.rec_a[k - 1] * prev1 + self.rec_c[k - 1] * prev2 * inv_x2;
            prev2 = prev1;
            prev1 = cur;
        }
        if upto < nn {
            self.rec_a[upto - 1] * prev1 + self.rec_c[upto - 1] * prev2 * inv_x2
        } else {
            self.a_hat * prev1 + self.c_hat * prev2 * inv_x2
        }
    }

    /// The weighted function p_l(x)·√w(x) (φ(x) itself at l = N),
    /// numerically stable for every x including far tails. This is the
    /// natural building block of Gram-matrix entries, which pair two of
    /// these against a plain quadrature weight.
    pub fn ortho_fn_sqrtw(&self, l: usize, x: f64) -> Result<f64> {
        let nn = self.params.n;
        if l > nn {
            return Err(Error::Domain(format!(
                "degree {l} exceeds N = {nn}"
            )));
        }
        let m = nn as f64 + self.params.a;
        if x.abs() <= 4.0 {
            let sqrt_w = (1.0 + x * x).powf(-0.5 * m);
            return Ok(self.cauchy_poly(l, x)? * sqrt_w);
        }
        // p_l √w = (−1)^l c_l π̃_l sign(x)^l |x|^(l−m) (1+x⁻²)^(−m/2)
        let pi_t = self.pi_scaled_eval(l, x);
        let ax = x.abs();
        let tail = ((l as f64 - m) * ax.ln() - 0.5 * m * (1.0 / (x * x)).ln_1p()).exp();
        let sign_l = if l % 2 == 0 { 1.0 } else { -1.0 };
        let sign_x = if x < 0.0 && l % 2 == 1 { -1.0 } else { 1.0 };
        let c = if l < nn {
            sign_l * self.norm[l]
        } else {
            self.phi_const
        };
        Ok(c * sign_x * pi_t * tail)
    }

    /// The real polynomial p_l(x) of degree l ≤ N.
    ///
    /// For l ≤ N−1 this is the orthonormal polynomial of the weight
    /// (1+x²)^(−N−a). For l = N the orthonormal normalisation degenerates
    /// (its norm constant carries a factor (a−1/2)^(1/2) that goes complex
    /// for a < 1/2); what is returned instead is the real multiple of
    /// degree N that enters the kernel function φ, i.e. φ(x) = √w(x) ·
    /// `cauchy_poly(N, x)`.
    pub fn cauchy_poly(&self, l: usize, x: f64) -> Result<f64> {
        let nn = self.params.n;
        if l > nn {
            return Err(Error::Domain(format!(
                "polynomial degree {l} exceeds N = {nn}; the family is \
                 defined only up to degree N"
            )));
        }
        if l < nn {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * self.norm[l] * self.pi_eval(l, x))
        } else {
            Ok(self.phi_const * self.pi_eval(nn, x))
        }
    }

    /// Ratio of leading coefficients a_{n−1}/a_n of the orthonormal family,
    ///
    ///   a_{n−1}/a_n = (1/2) [ n(2N+2a−n) / ((N+a−n+1/2)(N+a−n−1/2)) ]^(1/2),
    ///
    /// defined for 1 ≤ n ≤ N. At n = N the second denominator factor is
    /// a − 1/2, so the ratio only exists for a > 1/2 — for smaller a the
    /// degree-N norm itself is degenerate and the ratio has no real value.
    pub fn coeff_ratio(&self, n: usize) -> Result<f64> {
        let nn = self.params.n;
        let a = self.params.a;
        if n == 0 || n > nn {
            return Err(Error::Domain(format!(
                "coeff_ratio defined for 1 <= n <= N = {nn}, got {n}"
            )));
        }
        let nf = n as f64;
        let m = nn as f64 + a; // N + a
        let d1 = m - nf + 0.5;
        let d2 = m - nf - 0.5;
        if d1 <= 0.0 || d2 <= 0.0 {
            return Err(Error::Domain(format!(
                "coeff_ratio radicand non-positive at n = {n} (N = {nn}, a = {a}); \
                 this occurs at n = N when a <= 1/2, where the degree-N norm \
                 degenerates"
            )));
        }
        Ok(0.5 * (nf * (2.0 * m - nf) / (d1 * d2)).sqrt())
    }

    /// The kernel pair (φ(x), ψ(x)) in the balanced real convention.
    pub fn phi_psi(&self, x: f64) -> (f64, f64) {
        let nn = self.params.n;
        let m = nn as f64 + self.params.a;
        if x.abs() <= 4.0 {
            let (pi_nm1, pi_top) = self.pi_top_pair(x);
            let sqrt_w = (1.0 + x * x).powf(-0.5 * m);
            return (
                self.phi_const * sqrt_w * pi_top,
                self.psi_const * sqrt_w * pi_nm1,
            );
        }
        // tail-safe form: x^N √w = sign^N |x|^(−a) (1+x⁻²)^(−m/2)
        let pi_t_nm1 = self.pi_scaled_eval(nn - 1, x);
        let pi_t_top = self.pi_scaled_eval(nn, x);
        let ax = x.abs();
        let t = (-self.params.a * ax.ln() - 0.5 * m * (1.0 / (x * x)).ln_1p()).exp();
        let sign_n = if x < 0.0 && nn % 2 == 1 { -1.0 } else { 1.0 };
        let sign_nm1 = if x < 0.0 && nn % 2 == 0 { -1.0 } else { 1.0 };
        (
            self.phi_const * sign_n * pi_t_top * t,
            self.psi_const * sign_nm1 * pi_t_nm1 * t / ax,
        )
    }
}
