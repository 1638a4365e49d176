//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the workbench.
///
/// `Domain`-like variants describe physically meaningful refusals (an atom
/// placed inside the glass, an unguided mode, a trap with no bound minimum);
/// `Solver` covers internal numerical failures that should not happen for
/// well-posed inputs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid waveguide or beam description.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Argument outside the mathematical/physical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested mode is not guided at the given geometry and wavelength.
    #[error("mode not guided: {0}")]
    Unguided(String),
    /// Two mode arguments that must describe the same eigenmode do not.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    /// The total trap potential has no interior minimum with positive depth.
    #[error("no bound minimum: {0}")]
    NoBoundMinimum(String),
    /// A quantity that must be strictly monotone over a range is not.
    #[error("non-monotone: {0}")]
    NonMonotone(String),
    /// A measured value lies outside the band the forward model can reach.
    #[error("out of band: {0}")]
    OutOfBand(String),
    /// A pull plan cannot realize the requested taper geometry.
    #[error("infeasible pull: {0}")]
    Infeasible(String),
    /// Input signal too short for the requested analysis.
    #[error("signal too short: {0}")]
    SignalTooShort(String),
    /// Internal numerical failure (root refinement, quadrature, ...).
    #[error("solver failure: {0}")]
    Solver(String),
}

impl Error {
    /// True for errors that describe a physics-domain refusal rather than a
    /// malformed input or an internal failure.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::Solver(_))
    }
}
