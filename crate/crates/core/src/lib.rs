//! Numerical workbench for sub-wavelength step-index optical nanofibers.
//!
//! The crate solves the exact vector eigenmodes of a two-layer cylindrical
//! waveguide and builds everything else on top of those solutions:
//!
//! * [`bessel`] — Bessel `J`, modified Bessel `I`/`K` and derivatives with
//!   the accuracy the eigensolver needs.
//! * [`modesolver`] — guided-mode eigenvalue problem, mode enumeration,
//!   effective-index curves, group-delay derivative `dβ/dω`.
//! * [`fields`] — full complex `E`/`H` evaluation, power normalization,
//!   quasilinear superpositions, the evanescent far-field approximation.
//! * [`coupling`] — atom-photon figures of merit: `γ₁D`, `α`, `β`, `C₁`,
//!   Purcell factor, optical depth, and the cavity cross-check.
//! * [`trap`] — two-color evanescent dipole-trap potentials, trap minima,
//!   depth, lattice contrast and trap frequencies.
//! * [`taper`] — heat-and-pull trajectory planning with a forward
//!   flame-brush simulator and a synthetic transmission-signal generator.
//! * [`spectra`] — Gabor spectrograms, beat-ridge extraction and inversion
//!   of mode-pair beat frequencies to fiber radius.
//!
//! All quantities are SI unless a function says otherwise.

pub mod bessel;
pub mod constants;
pub mod coupling;
pub mod error;
pub mod export;
pub mod fiber;
pub mod fields;
pub mod modesolver;
pub mod numerics;
pub mod spectra;
pub mod taper;
pub mod trap;

pub use constants::PhysicalConstants;
pub use error::Error;
pub use fiber::{FiberSpec, ModeFamily, ModeId, ModeSolution, Rotation};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
