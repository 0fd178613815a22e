//! Ensemble definitions: parameters, weight, correlation kernels, interval
//! specifications, stereographic maps, and the closed gap-probability
//! formulas at N = 1, 2.
//!
//! The finite-N kernel is the Christoffel–Darboux kernel of the weight
//! (1+λ²)^(−N−a),
//!
//!   K_N(x,y) = (φ(x)ψ(y) − φ(y)ψ(x)) / (x − y),
//!
//! with φ, ψ as in [`crate::specfun::orthopoly`]. Its scaling limit near
//! the spectrum edge at infinity (equivalently θ = 0 on the circle after
//! the stereographic map λ = cot(θ/2)) is a Bessel-type kernel of orders
//! a ± 1/2, which degenerates to the sine kernel at a = 0.

use crate::error::{Error, Result};
use crate::linalg;
use crate::specfun::bessel::bessel_j_scaled;
use crate::specfun::hyp2f1::gauss_2f1;
use crate::specfun::orthopoly::OrthoPolySystem;
use crate::specfun::gamma::gamma;
use crate::specfun::quad::gauss_legendre;

/// Matrix dimension N and weight exponent parameter a ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleParams {
    pub n: usize,
    pub a: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        let p = EnsembleParams { n, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("ensemble requires N >= 1".into()));
        }
        if !self.a.is_finite() || self.a < 0.0 {
            return Err(Error::Domain(format!(
                "ensemble requires a >= 0, got {}",
                self.a
            )));
        }
        Ok(())
    }

    /// b = √(N(N+2a)), the coupling constant of the φ/ψ system.
    pub fn b(&self) -> f64 {
        let n = self.n as f64;
        (n * (n + 2.0 * self.a)).sqrt()
    }
}

/// The joint eigenvalue weight factor w(λ) = (1+λ²)^(−N−a).
pub fn weight(params: &EnsembleParams, x: f64) -> f64 {
    (1.0 + x * x).powf(-(params.n as f64 + params.a))
}

/// Kernel pair φ, ψ at a point (balanced real convention).
pub fn phi_psi(params: &EnsembleParams, x: f64) -> Result<(f64, f64)> {
    Ok(OrthoPolySystem::new(params)?.phi_psi(x))
}

// ---------------------------------------------------------------------------
// intervals
// ---------------------------------------------------------------------------

/// Exclusion regions for gap probabilities.
#[derive(Debug, Clone, PartialEq)]
pub enum IntervalSpec {
    /// (s, ∞)
    SingleTail { s: f64 },
    /// (−∞, −s) ∪ (s, ∞), s > 0
    DoubleTail { s: f64 },
    /// General finite union of disjoint intervals, endpoints ascending;
    /// ±∞ endpoints allowed at the ends.
    Union(Vec<(f64, f64)>),
}

impl IntervalSpec {
    /// Ordered disjoint segments with ±∞ endpoints explicit.
    pub fn segments(&self) -> Result<Vec<(f64, f64)>> {
        match self {
            IntervalSpec::SingleTail { s } => {
                if !s.is_finite() {
                    return Err(Error::Domain("single-tail endpoint must be finite".into()));
                }
                Ok(vec![(*s, f64::INFINITY)])
            }
            IntervalSpec::DoubleTail { s } => {
                if !(*s > 0.0) || !s.is_finite() {
                    return Err(Error::Domain(format!(
                        "double-tail endpoint must be positive and finite, got {s}"
                    )));
                }
                Ok(vec![(f64::NEG_INFINITY, -s), (*s, f64::INFINITY)])
            }
            IntervalSpec::Union(segs) => {
                if segs.is_empty() {
                    return Err(Error::Domain("empty interval union".into()));
                }
                for (i, (lo, hi)) in segs.iter().enumerate() {
                    if !(lo < hi) {
                        return Err(Error::Domain(format!(
                            "interval {i} has lo >= hi: ({lo}, {hi})"
                        )));
                    }
                    if i > 0 && !(segs[i - 1].1 <= *lo) {
                        return Err(Error::Domain(
                            "interval union must be disjoint and ascending".into(),
                        ));
                    }
                }
                Ok(segs.clone())
            }
        }
    }

    /// All finite endpoints, ascending.
    pub fn finite_endpoints(&self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (lo, hi) in self.segments()? {
            if lo.is_finite() {
                out.push(lo);
            }
            if hi.is_finite() {
                out.push(hi);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------------

/// Which correlation kernel to use.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Finite-N Christoffel–Darboux kernel of the Cauchy weight.
    FiniteCauchy(EnsembleParams),
    /// sin(πρ(x−y)) / (π(x−y)).
    Sine { rho: f64 },
    /// Bessel-type hard-edge kernel of orders a ± 1/2 at density ρ.
    Bessel { a: f64, rho: f64 },
}

/// A kernel with its precomputed data, cheap to evaluate pointwise.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    pub spec: KernelSpec,
    ortho: Option<OrthoPolySystem>,
}

impl KernelEvaluator {
    pub fn new(spec: KernelSpec) -> Result<Self> {
        let ortho = match &spec {
            KernelSpec::FiniteCauchy(p) => Some(OrthoPolySystem::new(p)?),
            KernelSpec::Sine { rho } | KernelSpec::Bessel { rho, .. } => {
                if !(*rho > 0.0) {
                    return Err(Error::Domain(format!("density rho must be > 0, got {rho}")));
                }
                if let KernelSpec::Bessel { a, .. } = &spec {
                    if *a < 0.0 || !a.is_finite() {
                        return Err(Error::Domain(format!(
                            "Bessel kernel requires a >= 0, got {a}"
                        )));
                    }
                }
                None
            }
        };
        Ok(KernelEvaluator { spec, ortho })
    }

    /// Even entire parts of the Bessel kernel building blocks,
    /// G(t) = J_{a+1/2}(|t|)/|t|^{a+1/2} and H(t) = J_{a−1/2}(|t|)/|t|^{a−1/2},
    /// in terms of which φ(t) = (t/2)^{1/2}J_{a+1/2}(t) = 2^{−1/2}t^{a+1}G(t)
    /// and ψ(t) = 2^{−1/2}t^{a}H(t) for t > 0.  Working with G and H keeps
    /// the kernel real on both sides of the spectrum singularity.
    fn bessel_even_pair(a: f64, t: f64) -> Result<(f64, f64)> {
        let g = bessel_j_scaled(a + 0.5, t.abs(), -a - 0.5)?;
        let h = bessel_j_scaled(a - 0.5, t.abs(), -a + 0.5)?;
        Ok((g, h))
    }

    /// K(x, y). The diagonal and near-diagonal (|x−y| < 1e−6·(1+|x|))
    /// are evaluated through the l'Hôpital form at the midpoint.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let near = (x - y).abs() < 1e-6 * (1.0 + x.abs().max(y.abs()));
        match &self.spec {
            KernelSpec::FiniteCauchy(p) => {
                let sys = self.ortho.as_ref().expect("ortho present for FiniteCauchy");
                if near {
                    // K(m,m) = [b(φ²+ψ²) − 2 a m φψ]/(1+m²) + O((x−y)²)
                    let mid = 0.5 * (x + y);
                    let (f, g) = sys.phi_psi(mid);
                    let b = sys.b();
                    Ok((b * (f * f + g * g) - 2.0 * p.a * mid * f * g) / (1.0 + mid * mid))
                } else {
                    let (fx, gx) = sys.phi_psi(x);
                    let (fy, gy) = sys.phi_psi(y);
                    Ok((fx * gy - fy * gx) / (x - y))
                }
            }
            KernelSpec::Sine { rho } => {
                let z = std::f64::consts::PI * rho * (x - y);
                if z.abs() < 1e-6 {
                    Ok(rho * (1.0 - z * z / 6.0))
                } else {
                    Ok(rho * z.sin() / z)
                }
            }
            KernelSpec::Bessel { a, rho } => {
                // K(x,y) = c|ts|^a [t G(t)H(s) − s G(s)H(t)]/(2(t − s)),
                // t = cx, s = cy: the continuation across the singularity
                // that reduces to (t/2)^{1/2}J_{a±1/2} products for t,s > 0
                // and to the sine kernel at a = 0.
                let c = std::f64::consts::PI * rho;
                let (t, s) = (c * x, c * y);
                if near {
                    // diagonal limit via tG′ = H − (2a+1)G, H′ = −tG
                    let m = 0.5 * (t + s);
                    let (g, h) = Self::bessel_even_pair(*a, m)?;
                    let lim = 0.5 * (h * h + m * m * g * g - 2.0 * a * g * h);
                    Ok(c * m.abs().powf(2.0 * a) * lim)
                } else {
                    let (gt, ht) = Self::bessel_even_pair(*a, t)?;
                    let (gs, hs) = Self::bessel_even_pair(*a, s)?;
                    Ok(c * (t.abs() * s.abs()).powf(*a) * (t * gt * hs - s * gs * ht)
                        / (2.0 * (t - s)))
                }
            }
        }
    }
}

/// One-shot kernel evaluation (constructs the evaluator; prefer
/// [`KernelEvaluator`] in loops).
pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    KernelEvaluator::new(spec.clone())?.eval(x, y)
}

/// k-point correlation function ρ_k(x_1,…,x_k) = det[K(x_i, x_j)].
pub fn correlation(params: &EnsembleParams, points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Domain("correlation needs at least one point".into()));
    }
    let ev = KernelEvaluator::new(KernelSpec::FiniteCauchy(params.clone()))?;
    let k = points.len();
    let mut mat = vec![0.0_f64; k * k];
    for i in 0..k {
        for j in 0..k {
            mat[i * k + j] = ev.eval(points[i], points[j])?;
        }
    }
    linalg::det(mat, k)
}

/// Largest entrywise deviation of the Gram matrix of the orthonormal
/// polynomial functions {p_l √w}_{l<N} from the identity, integrating
/// over the whole line through the substitution λ = tan θ (the integrand
/// p_j p_k (1+λ²)^(1−N−a) is bounded on the compact θ-interval).
pub fn orthonormality_defect(params: &EnsembleParams, order: usize) -> Result<f64> {
    params.validate()?;
    let sys = OrthoPolySystem::new(params)?;
    let rule = gauss_legendre(order)?;
    let half = std::f64::consts::FRAC_PI_2;
    let n = params.n;
    let mut g = vec![0.0_f64; n * n];
    let mut f = vec![0.0_f64; n];
    for (t, w) in rule.affine_pairs(-half, half) {
        let lam = t.tan();
        let jac = 1.0 + lam * lam;
        for (l, slot) in f.iter_mut().enumerate() {
            *slot = sys.ortho_fn_sqrtw(l, lam)?;
        }
        for j in 0..n {
            for k in j..n {
                g[j * n + k] += w * jac * f[j] * f[k];
            }
        }
    }
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in j..n {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((g[j * n + k] - target).abs());
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// stereographic maps
// ---------------------------------------------------------------------------

/// Eigenangle θ ∈ (0, 2π) on the circle to λ = cot(θ/2) on the line.
/// θ = 0 maps to +∞ (returned as `f64::INFINITY`), θ = π to 0.
pub fn stereo_to_line(theta: f64) -> f64 {
    if theta <= 0.0 {
        return f64::INFINITY;
    }
    if theta >= 2.0 * std::f64::consts::PI {
        return f64::NEG_INFINITY;
    }
    1.0 / (0.5 * theta).tan()
}

/// Inverse map: λ on the line to θ ∈ (0, 2π) on the circle.
pub fn stereo_to_circle(lambda: f64) -> f64 {
    if lambda == f64::INFINITY {
        return 0.0;
    }
    if lambda == f64::NEG_INFINITY {
        return 2.0 * std::f64::consts::PI;
    }
    // 2 atan(1/λ) lands in (0, π] for λ ≥ 0 and (−π, 0) for λ < 0
    if lambda == 0.0 {
        std::f64::consts::PI
    } else if lambda > 0.0 {
        2.0 * (1.0 / lambda).atan()
    } else {
        2.0 * (1.0 / lambda).atan() + 2.0 * std::f64::consts::PI
    }
}

// ---------------------------------------------------------------------------
// closed forms at N = 1, 2
// ---------------------------------------------------------------------------

/// The building block X(s) = E₂ at N = 1 for the single interval (s, ∞):
/// two hypergeometric representations, selected by |s| for accuracy.
fn x_single(a: f64, s: f64) -> Result<f64> {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    if s.abs() < 1.0 {
        let c = gamma(a + 1.0)? / (sqrt_pi * gamma(a + 0.5)?);
        Ok(0.5 + c * s * gauss_2f1(a + 1.0, 0.5, 1.5, -s * s)?)
    } else if s >= 1.0 {
        let c = gamma(a + 1.0)? / (2.0 * sqrt_pi * gamma(a + 1.5)?);
        Ok(1.0
            - c * s.powf(-2.0 * a - 1.0)
                * gauss_2f1(a + 1.0, a + 0.5, a + 1.5, -1.0 / (s * s))?)
    } else {
        Ok(1.0 - x_single(a, -s)?)
    }
}

/// Closed-form (E₂, σ) for the single interval (s, ∞) at N ∈ {1, 2}.
///
/// σ(s) = (1+s²) d/ds ln E₂.
pub fn exact_gap_single(n: usize, a: f64, s: f64) -> Result<(f64, f64)> {
    if !(n == 1 || n == 2) {
        return Err(Error::Domain(format!(
            "closed forms available for N = 1, 2 only, got N = {n}"
        )));
    }
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!("requires a >= 0, got {a}")));
    }
    if !s.is_finite() {
        return Err(Error::Domain("s must be finite".into()));
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let x = x_single(a, s)?;
    let c0 = gamma(a + 1.0)? / (sqrt_pi * gamma(a + 0.5)?);
    let s2p1 = 1.0 + s * s;
    if n == 1 {
        let e2 = x;
        let sigma = c0 * s2p1.powf(-a) / e2;
        return Ok((e2, sigma));
    }
    let c1 = a * gamma(a + 1.0)? / (sqrt_pi * gamma(a + 1.5)?);
    let c2 = gamma(a + 1.0)? * gamma(a + 1.0)?
        / (2.0 * std::f64::consts::PI * gamma(a + 0.5)? * gamma(a + 1.5)?);
    let e2 = x * x - c1 * s * s2p1.powf(-a - 1.0) * x - c2 * s2p1.powf(-2.0 * a - 1.0);
    let c3 = gamma(a + 2.0)? / (sqrt_pi * gamma(a + 1.5)?);
    let sigma = c3 * s2p1.powf(-a - 1.0) / e2
        * ((1.0 + (2.0 * a + 1.0) * s * s) * x + c0 * s * s2p1.powf(-a));
    Ok((e2, sigma))
}

/// Closed-form (E₂, σ, F) for the symmetric double interval
/// (−∞,−s) ∪ (s,∞) at N ∈ {1, 2}, s > 0.
///
/// σ(s) = (1+s²) d/ds ln E₂ / 2 … more precisely d/ds ln E₂ = 2σ/(1+s²);
/// F is the auxiliary combination F = a s + (function of the same
/// hypergeometrics) entering the second-order reduction.
pub fn exact_gap_double(n: usize, a: f64, s: f64) -> Result<(f64, f64, f64)> {
    if !(n == 1 || n == 2) {
        return Err(Error::Domain(format!(
            "closed forms available for N = 1, 2 only, got N = {n}"
        )));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "double interval requires s > 0, got {s}"
        )));
    }
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!("requires a >= 0, got {a}")));
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let s2 = s * s;
    let s2p1 = 1.0 + s2;
    // s·₂F₁(p,½;3/2;−s²) = ∫₀^s (1+u²)^(−p) du; past s = 1 the direct
    // series (argument → −∞) stalls, so split the integral at infinity:
    // ∫₀^∞ = (√π/2)Γ(p−½)/Γ(p) and ∫ₛ^∞ = s^(1−2p)/(2p−1)·
    // ₂F₁(p, p−½; p+½; −1/s²), which converges fast.
    let f_int = |p: f64| -> Result<f64> {
        if s <= 1.0 {
            gauss_2f1(p, 0.5, 1.5, -s2)
        } else {
            let whole = 0.5 * sqrt_pi * gamma(p - 0.5)? / gamma(p)?;
            let tail = s.powf(1.0 - 2.0 * p) / (2.0 * p - 1.0)
                * gauss_2f1(p, p - 0.5, p + 0.5, -1.0 / s2)?;
            Ok((whole - tail) / s)
        }
    };
    let f1 = f_int(a + 1.0)?;
    if n == 1 {
        // E₂ has two representations; the tail form is better conditioned
        // for large s.
        let e2 = if s <= 1.0 {
            2.0 * gamma(a + 1.0)? / (sqrt_pi * gamma(a + 0.5)?) * s * f1
        } else {
            1.0 - gamma(a + 1.0)? / (sqrt_pi * gamma(a + 1.5)?)
                * s.powf(-2.0 * a - 1.0)
                * gauss_2f1(a + 1.0, a + 0.5, a + 1.5, -1.0 / s2)?
        };
        let sigma = s2p1.powf(-a) / (2.0 * s * f1);
        let big_f = a * s + s2p1.powf(-a) / (s * f1);
        return Ok((e2, sigma, big_f));
    }
    let f2 = f_int(a + 2.0)?;
    let tail = s2p1.powf(-a - 1.0);
    let e2 = if s <= 1.0 {
        4.0 * gamma(a + 2.0)? * gamma(a + 1.0)?
            / (std::f64::consts::PI * gamma(a + 0.5)? * gamma(a + 1.5)?)
            * s2
            * f2
            * (f1 - tail)
    } else {
        (1.0
            - gamma(a + 2.0)? / (sqrt_pi * gamma(a + 2.5)?)
                * s.powf(-2.0 * a - 3.0)
                * gauss_2f1(a + 2.0, a + 1.5, a + 2.5, -1.0 / s2)?)
            * (1.0
                - 2.0 * gamma(a + 2.0)? / (sqrt_pi * gamma(a + 1.5)?)
                    * s.powf(-2.0 * a - 1.0)
                    * gauss_2f1(a + 2.0, a + 0.5, a + 1.5, -1.0 / s2)?)
    };
    let sigma = tail / (2.0 * s) * (2.0 * (a + 1.0) * s2 / (f1 - tail) + 1.0 / f2);
    let big_f = a * s + tail / s * (2.0 * (a + 1.0) * s2 / (f1 - tail) - 1.0 / f2);
    Ok((e2, sigma, big_f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gauss_legendre;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
    }

    #[test]
    fn kernel_matches_orthonormal_sum() {
        // C-D form vs Σ_{l<N} p_l(x) p_l(y) √(w(x)w(y)) — validates the
        // φ/ψ constants for representative (N, a) including a = 0, 1/2
        for &(n, a) in &[
            (1usize, 0.0),
            (1, 1.0),
            (2, 1.0),
            (3, 0.75),
            (2, 0.0),
            (4, 0.5),
            (5, 2.0),
            (6, 1.25),
        ] {
            let p = EnsembleParams { n, a };
            let sys = OrthoPolySystem::new(&p).unwrap();
            let ev = KernelEvaluator::new(KernelSpec::FiniteCauchy(p.clone())).unwrap();
            for &(x, y) in &[(0.3, 0.9), (-1.4, 0.25), (2.0, 2.5)] {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += sys.cauchy_poly(l, x).unwrap() * sys.cauchy_poly(l, y).unwrap();
                }
                sum *= (weight(&p, x) * weight(&p, y)).sqrt();
                let cd = ev.eval(x, y).unwrap();
                assert!(
                    close(cd, sum, 1e-11),
                    "N={n} a={a} ({x},{y}): CD {cd} vs sum {sum}"
                );
            }
        }
    }

    #[test]
    fn kernel_diagonal_consistency() {
        // near-diagonal path vs a straddling evaluation just outside it
        let p = EnsembleParams { n: 3, a: 0.75 };
        let ev = KernelEvaluator::new(KernelSpec::FiniteCauchy(p)).unwrap();
        let x = 0.8;
        let diag = ev.eval(x, x).unwrap();
        let h = 1e-4;
        let off = ev.eval(x - h, x + h).unwrap();
        assert!((diag - off).abs() < 1e-6, "{diag} vs {off}");
        // trace: ∫ K(x,x) dx = N
        for &(n, a) in &[(1usize, 0.0), (2, 1.0), (4, 0.5)] {
            let ev =
                KernelEvaluator::new(KernelSpec::FiniteCauchy(EnsembleParams { n, a })).unwrap();
            let rule = gauss_legendre(160).unwrap();
            let tr = rule.integrate(|u| {
                let theta = std::f64::consts::FRAC_PI_2 * (std::f64::consts::FRAC_PI_2 * u).sin();
                let jac = std::f64::consts::FRAC_PI_2 * std::f64::consts::FRAC_PI_2
                    * (std::f64::consts::FRAC_PI_2 * u).cos();
                let lam = theta.tan();
                let c = theta.cos();
                ev.eval(lam, lam).unwrap() / (c * c) * jac
            });
            assert!(
                (tr - n as f64).abs() < 1e-9,
                "trace N={n} a={a}: {tr}"
            );
        }
    }

    #[test]
    fn kernel_reproducing_property() {
        // ∫ K(x,z) K(z,y) dz = K(x,y)
        let p = EnsembleParams { n: 2, a: 1.0 };
        let ev = KernelEvaluator::new(KernelSpec::FiniteCauchy(p)).unwrap();
        let rule = gauss_legendre(200).unwrap();
        let (x, y) = (0.4, -0.7);
        let got = rule.integrate(|u| {
            let theta = std::f64::consts::FRAC_PI_2 * (std::f64::consts::FRAC_PI_2 * u).sin();
            let jac = std::f64::consts::FRAC_PI_2 * std::f64::consts::FRAC_PI_2
                * (std::f64::consts::FRAC_PI_2 * u).cos();
            let z = theta.tan();
            let c = theta.cos();
            ev.eval(x, z).unwrap() * ev.eval(z, y).unwrap() / (c * c) * jac
        });
        let want = ev.eval(x, y).unwrap();
        assert!(close(got, want, 1e-9), "{got} vs {want}");
    }

    #[test]
    fn sine_and_bessel_kernels() {
        let sine = KernelEvaluator::new(KernelSpec::Sine { rho: 1.0 }).unwrap();
        assert!(close(sine.eval(0.3, 0.3).unwrap(), 1.0, 1e-14));
        let v = sine.eval(0.0, 0.5).unwrap();
        assert!(close(v, (std::f64::consts::PI * 0.5).sin() / (std::f64::consts::PI * 0.5), 1e-14));
        // Bessel at a=0 equals sine pointwise
        let bes = KernelEvaluator::new(KernelSpec::Bessel { a: 0.0, rho: 1.0 }).unwrap();
        for &(x, y) in &[(0.2, 0.7), (0.1, 0.1), (1.5, 3.2), (0.0, 0.4)] {
            let kb = bes.eval(x, y).unwrap();
            let ks = sine.eval(x, y).unwrap();
            assert!(close(kb, ks, 1e-10), "({x},{y}): bessel {kb} vs sine {ks}");
        }
        // symmetry for fractional a
        let bes = KernelEvaluator::new(KernelSpec::Bessel { a: 0.75, rho: 1.0 }).unwrap();
        let k1 = bes.eval(0.33, 1.21).unwrap();
        let k2 = bes.eval(1.21, 0.33).unwrap();
        assert!(close(k1, k2, 1e-13));
        // diagonal limit consistency
        let d = bes.eval(0.8, 0.8).unwrap();
        let o = bes.eval(0.8 - 1e-4, 0.8 + 1e-4).unwrap();
        assert!((d - o).abs() < 1e-6);
    }

    #[test]
    fn correlation_determinants() {
        let p = EnsembleParams { n: 2, a: 1.0 };
        // one-point = kernel diagonal
        let ev = KernelEvaluator::new(KernelSpec::FiniteCauchy(p.clone())).unwrap();
        let r1 = correlation(&p, &[0.5]).unwrap();
        assert!(close(r1, ev.eval(0.5, 0.5).unwrap(), 1e-13));
        // two coinciding points → det vanishes
        let r2 = correlation(&p, &[0.5, 0.5 + 1e-9]).unwrap();
        assert!(r2.abs() < 1e-8);
        // positivity at separated points
        let r3 = correlation(&p, &[-1.0, 0.3, 1.7]).unwrap();
        assert!(r3 > 0.0);
    }

    #[test]
    fn stereo_round_trip() {
        for &theta in &[0.3, 1.0, std::f64::consts::PI, 4.0, 6.0] {
            let l = stereo_to_line(theta);
            let back = stereo_to_circle(l);
            assert!(close(back, theta, 1e-13), "theta={theta}: {back}");
        }
        assert_eq!(stereo_to_line(0.0), f64::INFINITY);
        assert!(close(stereo_to_line(std::f64::consts::FRAC_PI_2), 1.0, 1e-14));
        assert!(stereo_to_line(std::f64::consts::PI).abs() < 1e-15);
        assert!(close(stereo_to_circle(0.0), std::f64::consts::PI, 1e-15));
        assert_eq!(stereo_to_circle(f64::INFINITY), 0.0);
        // monotone decreasing in θ
        let mut prev = f64::INFINITY;
        for i in 1..20 {
            let v = stereo_to_line(i as f64 * 0.3);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn interval_validation() {
        assert!(IntervalSpec::DoubleTail { s: -1.0 }.segments().is_err());
        assert!(IntervalSpec::Union(vec![(0.0, 1.0), (0.5, 2.0)])
            .segments()
            .is_err());
        assert!(IntervalSpec::Union(vec![(1.0, 0.5)]).segments().is_err());
        let segs = IntervalSpec::DoubleTail { s: 2.0 }.segments().unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(
            IntervalSpec::SingleTail { s: 1.5 }.finite_endpoints().unwrap(),
            vec![1.5]
        );
        assert_eq!(
            IntervalSpec::DoubleTail { s: 2.0 }.finite_endpoints().unwrap(),
            vec![-2.0, 2.0]
        );
    }

    #[test]
    fn closed_form_anchors() {
        // N=1, a=0: E₂(s,∞) = 1/2 + arctan(s)/π
        for &s in &[-2.0, -0.3, 0.0, 0.5, 1.0, 4.0, 25.0] {
            let (e2, _) = exact_gap_single(1, 0.0, s).unwrap();
            let want = 0.5 + s.atan() / std::f64::consts::PI;
            assert!(close(e2, want, 1e-13), "s={s}: {e2} vs {want}");
        }
        let (e2, sigma) = exact_gap_single(1, 0.0, 1.0).unwrap();
        assert!(close(e2, 0.75, 1e-14));
        assert!(close(sigma, 0.42441318157838756205, 1e-13));
        // double, N=1, a=0: E₂ = (2/π) arctan s
        for &s in &[0.2, 1.0, 3.0, 12.0] {
            let (e2, _, _) = exact_gap_double(1, 0.0, s).unwrap();
            let want = 2.0 / std::f64::consts::PI * s.atan();
            assert!(close(e2, want, 1e-13), "s={s}: {e2} vs {want}");
        }
    }

    #[test]
    fn closed_form_reference_values() {
        // 40-digit anchors
        let singles = [
            (2usize, 1.0, 2.0, 0.92554519122828192248, 0.47657681173054894118),
            (2, 1.0, 5.0, 0.99362183259666533133, 0.096041929969028702993),
            (1, 2.0, 0.7, 0.91085064365069480923, 0.41975816553041517283),
            (2, 0.0, 1.3, 0.58846703298887427261, 1.0224520326260128574),
            (2, 2.0, 3.0, 0.99684838382404360595, 0.047003180848908330426),
            (1, 1.0, 0.4, 0.73088097130939191666, 0.75088854428585702338),
        ];
        for (n, a, s, e_want, sig_want) in singles {
            let (e2, sig) = exact_gap_single(n, a, s).unwrap();
            assert!(close(e2, e_want, 1e-12), "single N={n} a={a} s={s}: {e2}");
            assert!(close(sig, sig_want, 1e-12), "single σ N={n} a={a} s={s}: {sig}");
        }
        let doubles = [
            (2usize, 1.0, 1.0, 0.46220659078919378103, 1.5027977066242673326, 3.0873627656921160795),
            (2, 1.0, 2.0, 0.85199013410708567109, 0.50925493971763656458, 2.8817999870150409695),
            (1, 2.0, 0.7, 0.82170128730138961845, 0.46529925309801442639, 2.330598506196028764),
            (2, 0.0, 1.3, 0.24473445754039444792, 1.7207064956658743656, 2.3780416089326231399),
            (2, 2.0, 3.0, 0.99369735332729762008, 0.047141616142313215227, 6.0902084751926898471),
        ];
        for (n, a, s, e_want, sig_want, f_want) in doubles {
            let (e2, sig, bf) = exact_gap_double(n, a, s).unwrap();
            assert!(close(e2, e_want, 1e-12), "double N={n} a={a} s={s}: {e2}");
            assert!(close(sig, sig_want, 1e-12), "double σ: {sig}");
            assert!(close(bf, f_want, 1e-12), "double F: {bf}");
        }
    }

    #[test]
    fn closed_form_internal_consistency() {
        // σ = (1+s²) (ln E₂)′ by central differences, and the two E₂
        // representations agree across the |s| = 1 switch
        let h = 1e-5;
        for &(n, a) in &[(1usize, 0.6), (2, 1.3), (2, 0.0)] {
            for &s in &[0.4, 0.9999, 1.0001, 2.7] {
                let (ep, _) = exact_gap_single(n, a, s + h).unwrap();
                let (em, _) = exact_gap_single(n, a, s - h).unwrap();
                let (_, sig) = exact_gap_single(n, a, s).unwrap();
                let want = (1.0 + s * s) * (ep.ln() - em.ln()) / (2.0 * h);
                assert!(
                    close(sig, want, 1e-7),
                    "single N={n} a={a} s={s}: σ {sig} vs FD {want}"
                );
                if n >= 1 {
                    let (ep, _, _) = exact_gap_double(n, a, s + h).unwrap();
                    let (em, _, _) = exact_gap_double(n, a, s - h).unwrap();
                    let (_, sig, _) = exact_gap_double(n, a, s).unwrap();
                    let want = (1.0 + s * s) * (ep.ln() - em.ln()) / (4.0 * h);
                    assert!(
                        close(sig, want, 1e-7),
                        "double N={n} a={a} s={s}: σ {sig} vs FD {want}"
                    );
                }
            }
        }
        // representation seam: the branch switch at s = 1 must splice
        // smoothly — any jump beyond the function's own derivative drift
        // E'(1)·2h would mean the two forms disagree
        let h = 1e-9;
        for &(n, a) in &[(1usize, 0.75), (2, 1.5)] {
            let (lo, _) = exact_gap_single(n, a, 1.0 - h).unwrap();
            let (hi, sig) = exact_gap_single(n, a, 1.0 + h).unwrap();
            let drift = 2.0 * h * sig * hi / 2.0; // E' = σE/(1+s²), 1+s² = 2
            assert!(
                (hi - lo - drift).abs() < 1e-12,
                "N={n} a={a}: seam {lo} vs {hi}"
            );
            let (lo, _, _) = exact_gap_double(n, a, 1.0 - h).unwrap();
            let (hi, sig, _) = exact_gap_double(n, a, 1.0 + h).unwrap();
            let drift = 2.0 * h * sig * hi; // E' = 2σE/(1+s²)
            assert!(
                (hi - lo - drift).abs() < 1e-12,
                "double N={n} a={a}: seam {lo} vs {hi}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert!(exact_gap_single(3, 0.0, 1.0).is_err());
        assert!(exact_gap_double(1, 0.0, -1.0).is_err());
        assert!(exact_gap_double(1, 0.0, 0.0).is_err());
        assert!(EnsembleParams::new(0, 1.0).is_err());
        assert!(EnsembleParams::new(2, -0.5).is_err());
    }

    #[test]
    fn polynomials_are_orthonormal() {
        for &n in &[1usize, 2, 3, 5] {
            for &a in &[0.0_f64, 0.75, 1.0, 2.0] {
                let p = EnsembleParams { n, a };
                let defect = orthonormality_defect(&p, 512).unwrap();
                assert!(defect < 1e-10, "(N,a)=({n},{a}): defect {defect:.2e}");
                // quadrature-converged: doubling the order changes nothing
                let coarse = orthonormality_defect(&p, 256).unwrap();
                assert!(coarse < 1e-9, "(N,a)=({n},{a}): coarse defect {coarse:.2e}");
            }
        }
    }
}
