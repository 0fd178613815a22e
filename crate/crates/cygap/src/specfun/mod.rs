//! Special functions underlying the ensemble computations.
//!
//! Everything here is plain `f64`. The submodules provide:
//!
//! * [`gamma`] — log-gamma (Lanczos) and the gamma function on the positive
//!   half line;
//! * [`quad`] — Gauss–Legendre rules with affine / tangent mappings;
//! * [`hyp2f1`] — the Gauss hypergeometric function ₂F₁ for non-positive
//!   argument, series plus Pfaff transformation;
//! * [`bessel`] — Bessel J of real order ν ≥ −1/2 with an `x^p · J_ν(x)`
//!   variant that stays finite at the origin;
//! * [`orthopoly`] — the orthogonal polynomials of the weight
//!   (1+x²)^(−N−a), their recurrence, norms, and the kernel functions
//!   φ, ψ built from the top two polynomials.

pub mod bessel;
pub mod gamma;
pub mod hyp2f1;
pub mod orthopoly;
pub mod quad;

pub use bessel::{bessel_j, bessel_j_scaled};
pub use gamma::{gamma, ln_gamma};
pub use hyp2f1::gauss_2f1;
pub use orthopoly::OrthoPolySystem;
pub use quad::{gauss_legendre, QuadratureRule};
