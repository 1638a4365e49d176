//! Physical constants (CODATA 2018, SI).

/// Fundamental constants used throughout the crate.
///
/// `eps0` is derived as `1/(mu0 c^2)` so that the electromagnetic identity
/// `c^2 eps0 mu0 = 1` holds to machine precision; the derived value agrees
/// with the tabulated CODATA one to better than 1e-9 relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum [m/s] (exact).
    pub c: f64,
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Vacuum permittivity [F/m].
    pub eps0: f64,
    /// Vacuum permeability [H/m].
    pub mu0: f64,
    /// Boltzmann constant [J/K] (exact).
    pub k_b: f64,
    /// Bohr radius [m].
    pub a0: f64,
    /// Elementary charge [C] (exact).
    pub e_charge: f64,
}

/// Speed of light in vacuum [m/s].
pub const C: f64 = 299_792_458.0;
/// Vacuum permeability [H/m].
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity [F/m], derived from `MU0` and `C`.
pub const EPS0: f64 = 1.0 / (MU0 * C * C);
/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
/// Bohr radius [m].
pub const A0: f64 = 5.291_772_109_03e-11;
/// Elementary charge [C].
pub const E_CHARGE: f64 = 1.602_176_634e-19;

impl PhysicalConstants {
    /// The fixed CODATA set. Not configurable: golden outputs depend on it.
    pub const fn si() -> Self {
        PhysicalConstants {
            c: C,
            hbar: HBAR,
            eps0: EPS0,
            mu0: MU0,
            k_b: K_B,
            a0: A0,
            e_charge: E_CHARGE,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}
