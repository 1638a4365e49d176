//! Waveguide description and guided-mode value types.

use crate::constants;
use crate::error::Error;
use crate::Result;
use num_complex::Complex64;
use std::fmt;

/// Step-index cylindrical waveguide: glass core of radius `radius_a` and
/// index `n_core` surrounded by an infinite cladding of index `n_clad`
/// (vacuum or air for a nanofiber), probed at vacuum wavelength `wavelength`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSpec {
    /// Core radius a [m].
    pub radius_a: f64,
    /// Core refractive index n1.
    pub n_core: f64,
    /// Cladding refractive index n2.
    pub n_clad: f64,
    /// Vacuum wavelength [m].
    pub wavelength: f64,
}

impl FiberSpec {
    pub fn new(radius_a: f64, n_core: f64, n_clad: f64, wavelength: f64) -> Result<Self> {
        if !(radius_a > 0.0) || !radius_a.is_finite() {
            return Err(Error::InvalidInput(format!(
                "core radius must be positive, got {radius_a}"
            )));
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::InvalidInput(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !(n_core > n_clad) || !(n_clad >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "need n_core > n_clad >= 1, got n_core={n_core}, n_clad={n_clad}"
            )));
        }
        Ok(FiberSpec {
            radius_a,
            n_core,
            n_clad,
            wavelength,
        })
    }

    /// Vacuum wavenumber k = 2 pi / lambda [rad/m].
    pub fn k(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Angular frequency omega = c k [rad/s].
    pub fn omega(&self) -> f64 {
        constants::C * self.k()
    }

    /// Core dielectric constant eps1 = n1^2 eps0 [F/m].
    pub fn eps1(&self) -> f64 {
        self.n_core * self.n_core * constants::EPS0
    }

    /// Cladding dielectric constant eps2 = n2^2 eps0 [F/m].
    pub fn eps2(&self) -> f64 {
        self.n_clad * self.n_clad * constants::EPS0
    }

    /// Numerical aperture sqrt(n1^2 - n2^2).
    pub fn numerical_aperture(&self) -> f64 {
        (self.n_core * self.n_core - self.n_clad * self.n_clad).sqrt()
    }

    /// Normalized frequency V = (2 pi / lambda) a sqrt(n1^2 - n2^2).
    pub fn v_number(&self) -> f64 {
        self.k() * self.radius_a * self.numerical_aperture()
    }

    /// Same geometry and indices at a different vacuum wavelength.
    pub fn at_wavelength(&self, wavelength: f64) -> Result<Self> {
        FiberSpec::new(self.radius_a, self.n_core, self.n_clad, wavelength)
    }

    /// Same indices and wavelength at a different core radius.
    pub fn at_radius(&self, radius_a: f64) -> Result<Self> {
        FiberSpec::new(radius_a, self.n_core, self.n_clad, self.wavelength)
    }

    /// Refractive index at radial coordinate r.
    pub fn index_at(&self, r: f64) -> f64 {
        if r < self.radius_a {
            self.n_core
        } else {
            self.n_clad
        }
    }
}

/// Vector mode family of the cylindrical waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeFamily {
    HE,
    EH,
    TE,
    TM,
}

impl ModeFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeFamily::HE => "HE",
            ModeFamily::EH => "EH",
            ModeFamily::TE => "TE",
            ModeFamily::TM => "TM",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HE" => Ok(ModeFamily::HE),
            "EH" => Ok(ModeFamily::EH),
            "TE" => Ok(ModeFamily::TE),
            "TM" => Ok(ModeFamily::TM),
            other => Err(Error::InvalidInput(format!("unknown mode family {other:?}"))),
        }
    }
}

/// Sign of the `exp(+-i l phi)` azimuthal dependence. Ignored for l = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    Plus,
    Minus,
}

impl Rotation {
    pub fn sign(&self) -> f64 {
        match self {
            Rotation::Plus => 1.0,
            Rotation::Minus => -1.0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Rotation::Plus => "plus",
            Rotation::Minus => "minus",
        }
    }
}

/// Mode label: family, azimuthal order l, radial order m, rotation.
///
/// TE/TM require l = 0; HE/EH require l >= 1. Radial order m counts roots
/// by descending effective index (m = 1 is the highest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeId {
    pub family: ModeFamily,
    pub l: u32,
    pub m: u32,
    pub rotation: Rotation,
}

impl ModeId {
    pub fn new(family: ModeFamily, l: u32, m: u32, rotation: Rotation) -> Result<Self> {
        let l_ok = match family {
            ModeFamily::TE | ModeFamily::TM => l == 0,
            ModeFamily::HE | ModeFamily::EH => l >= 1,
        };
        if !l_ok {
            return Err(Error::InvalidInput(format!(
                "family {} incompatible with l = {l}",
                family.as_str()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidInput("radial order m starts at 1".into()));
        }
        Ok(ModeId {
            family,
            l,
            m,
            rotation,
        })
    }

    /// Same mode, other rotation.
    pub fn conjugate_rotation(&self) -> ModeId {
        ModeId {
            rotation: match self.rotation {
                Rotation::Plus => Rotation::Minus,
                Rotation::Minus => Rotation::Plus,
            },
            ..*self
        }
    }

    /// True when `other` is the same eigenmode up to rotation.
    pub fn same_branch(&self, other: &ModeId) -> bool {
        self.family == other.family && self.l == other.l && self.m == other.m
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.family.as_str(), self.l, self.m)?;
        if self.l > 0 {
            write!(f, "{}", if self.rotation == Rotation::Plus { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// One solved guided mode: eigenvalue data plus the four amplitude
/// constants of the interior/exterior field expansions.
///
/// `a_const`, `b_const` scale the interior `J_l` fields, `c_const`,
/// `d_const` the exterior `K_l` fields. The boundary conditions fix
/// `C/A = J_l(ha)/K_l(qa)` and `D = B J_l(ha)/K_l(qa)`; for hybrid modes
/// `B = i l beta s A / (mu0 omega)` with the dimensionless parameter
/// `s_param` (sign tied to the rotation). TE modes have A = C = 0, TM
/// modes have B = D = 0.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    /// Waveguide this mode belongs to.
    pub fiber: FiberSpec,
    /// Mode label.
    pub mode: ModeId,
    /// Propagation constant beta [rad/m].
    pub beta_prop: f64,
    /// Effective index beta/k.
    pub n_eff: f64,
    /// Interior transverse wavenumber h = sqrt(k^2 n1^2 - beta^2) [rad/m].
    pub h: f64,
    /// Exterior decay constant q = sqrt(beta^2 - k^2 n2^2) [rad/m].
    pub q: f64,
    /// Interior E_z amplitude A [V/m].
    pub a_const: Complex64,
    /// Interior H_z amplitude B [A/m].
    pub b_const: Complex64,
    /// Exterior E_z amplitude C [V/m].
    pub c_const: Complex64,
    /// Exterior H_z amplitude D [A/m].
    pub d_const: Complex64,
    /// Dimensionless s = B mu0 omega / (i l beta A); 0 for TE/TM.
    pub s_param: f64,
    /// Power carried by the mode at these amplitudes [W].
    pub power: f64,
}

impl ModeSolution {
    /// All four amplitude constants scaled by a common real factor.
    pub fn scaled(&self, factor: f64) -> ModeSolution {
        let mut out = self.clone();
        out.a_const *= factor;
        out.b_const *= factor;
        out.c_const *= factor;
        out.d_const *= factor;
        out.power *= factor * factor;
        out
    }

    pub fn is_hybrid(&self) -> bool {
        matches!(self.mode.family, ModeFamily::HE | ModeFamily::EH)
    }
}
