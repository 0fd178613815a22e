//! Gauss–Legendre quadrature.
//!
//! Nodes are roots of the Legendre polynomial P_n, found by Newton iteration
//! from the Chebyshev-like initial guess cos(π(i − 1/4)/(n + 1/2)); weights
//! are 2/((1−x²) P_n′(x)²). Only half the nodes are computed and the rule is
//! mirrored, so symmetry holds to the bit.
//!
//! Besides plain [-1,1] integration the rule can be pushed forward through
//! an affine map, or through λ = tan θ to integrate over the whole real
//! line (the natural change of variables for the weight (1+λ²)^(−N−a),
//! which becomes a power of cos θ).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub order: usize,
    /// Nodes in (−1, 1), ascending.
    pub nodes: Vec<f64>,
    /// Positive weights summing to 2.
    pub weights: Vec<f64>,
}

/// Legendre P_n(x) and its derivative by the three-term recurrence.
fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0_f64;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from P_n and P_{n-1}: (1-x^2) P_n' = n (P_{n-1} - x P_n)
    let deriv = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, deriv)
}

/// Gauss–Legendre rule of the given order (number of nodes), order ≥ 1.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    let n = order;
    let mut nodes = vec![0.0_f64; n];
    let mut weights = vec![0.0_f64; n];
    let half = (n + 1) / 2;
    for i in 1..=half {
        // Initial guess for the i-th root counted from +1 downwards.
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_deriv(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // one polishing step, and the derivative at the converged root
        let (p, d) = legendre_and_deriv(n, x);
        x -= p / d;
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // i = 1 is the largest root; mirror into both halves.
        nodes[n - i] = x;
        nodes[i - 1] = -x;
        weights[n - i] = w;
        weights[i - 1] = w;
    }
    if n % 2 == 1 {
        // middle node is exactly zero
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule {
        order: n,
        nodes,
        weights,
    })
}

impl QuadratureRule {
    /// ∫_{-1}^{1} f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// ∫_{lo}^{hi} f over a finite interval via the affine map.
    pub fn integrate_affine<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        rad * self.integrate(|t| f(mid + rad * t))
    }

    /// Node/weight pairs pushed forward through the affine map onto [lo, hi].
    pub fn affine_pairs(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + rad * x, rad * w))
            .collect()
    }

    /// ∫_{-∞}^{∞} f via λ = tan θ, θ ∈ (−π/2, π/2).
    ///
    /// The Jacobian sec²θ is folded in, so `f` is the plain integrand in λ.
    /// Decay of f like λ^(−2) or faster makes the mapped integrand bounded.
    pub fn integrate_real_line<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        self.integrate_affine(-half_pi, half_pi, |theta| {
            let c = theta.cos();
            f(theta.tan()) / (c * c)
        })
    }
}
