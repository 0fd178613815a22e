//! Eigenvalue-gap probabilities for the finite-N Cauchy unitary ensemble and
//! its hard-edge scaling limit (the scaled circular Jacobi ensemble).
//!
//! The ensemble has eigenvalue density ∝ ∏_j (1+λ_j²)^(−N−a) ∏_{j<k} |λ_j−λ_k|²
//! on the real line. The central objects are the gap probabilities
//!
//! * `E₂(0; (s,∞))` — no eigenvalue in a single semi-infinite interval,
//! * `E₂(0; (−∞,−s)∪(s,∞))` — no eigenvalue outside (−s, s),
//!
//! and their scaled counterparts for the Bessel-type kernel that arises when
//! the spectrum is wrapped onto the circle and N → ∞. Each quantity is
//! computed by several independent routes and the routes are cross-checked:
//!
//! 1. Fredholm determinants of the correlation kernel, discretised by
//!    Nyström quadrature ([`fredholm`]);
//! 2. coupled systems of ODEs in the resolvent quantities q, p, …,
//!    integrated from Fredholm-seeded initial data ([`twode`]);
//! 3. second-order σ-form ODEs of Painlevé type (also [`twode`], with
//!    residual verification through the `sigma_residual_*` functions);
//! 4. closed hypergeometric forms at N = 1, 2 ([`ensemble`]).
//!
//! [`painleve`] holds the Painlevé parameter tables and identity checks,
//! [`montecarlo`] a Metropolis sampler used as a statistical cross-check,
//! and [`specfun`] the underlying special functions (Γ, ₂F₁, Bessel J,
//! Gauss–Legendre rules, and the orthogonal polynomials of the weight).

pub mod ensemble;
pub mod error;
pub mod fredholm;
pub(crate) mod linalg;
pub mod montecarlo;
pub mod ode;
pub mod painleve;
pub mod specfun;
pub mod twode;

pub use error::{Error, Result};
