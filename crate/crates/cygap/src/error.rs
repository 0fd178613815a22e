//! Crate-wide error type.
//!
//! All fallible operations return [`Result`]. The variants map onto the
//! failure classes that actually occur in practice: arguments outside a
//! function's mathematical domain, iterations that fail to converge or
//! produce non-finite values, branch selection failures in the square-root
//! reductions of the σ-ODEs, ill-conditioned linear solves (gap probability
//! indistinguishable from zero), and adaptive integration breakdown.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    Domain(String),
    /// An iteration failed to converge or produced a non-finite value.
    Numeric(String),
    /// A discriminant that must be non-negative on the solution manifold
    /// went negative beyond tolerance, so the square-root branch of a
    /// reduced ODE could not be resolved.
    Branch(String),
    /// A linear system was too ill-conditioned to solve reliably
    /// (typically the gap probability underflowed to zero).
    Conditioning(String),
    /// The adaptive ODE integrator failed (step size underflow or an
    /// invariant drifted beyond its tolerance). The `f64` is the abscissa
    /// at which integration stopped.
    Integration(String, f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::Branch(msg) => write!(f, "branch selection error: {msg}"),
            Error::Conditioning(msg) => write!(f, "conditioning error: {msg}"),
            Error::Integration(msg, at) => {
                write!(f, "integration error at {at:.6e}: {msg}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
