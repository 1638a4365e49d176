//! Atom-photon coupling figures of merit for an emitter in the evanescent
//! field of a guided mode.
//!
//! The emission rate into the guided continuum follows the golden rule for
//! a quasi-1D reservoir,
//!
//! ```text
//! gamma_1D = (omega d^2 / (2 hbar eps0)) (d beta / d omega)
//!            * sum_{directions, rotations} |e_hat(r_atom) . u_d|^2
//! ```
//!
//! with the mode profile normalized so `int n^2(x,y) |e_hat|^2 dA = 1` over
//! the full cross-section (the n^2-weighted energy convention). From
//! `gamma_1D` and a radiative-channel model the report assembles the
//! emission enhancement `alpha = gamma_1D/gamma_0`, the coupling efficiency
//! `beta_c = gamma_1D/gamma_tot`, the cooperativity `C_1 = beta_c/(1 -
//! beta_c)`, the Purcell factor `gamma_tot/gamma_0`, and a single-pass
//! optical depth `OD = gamma_1D/gamma_0` (energy-flux route), which fixes
//! the effective mode area through `OD = sigma_0/A_mode`.
//!
//! The radiative channel defaults to the free-space rate; true
//! surface-modified radiative rates need full numerical electrodynamics
//! and can be injected through [`RadiativeModel::Scaled`].

use crate::constants;
use crate::error::Error;
use crate::fiber::{FiberSpec, ModeFamily, ModeSolution};
use crate::fields::PropagationSense;
use crate::modesolver::{dbeta_domega, solve_rotation_pair};
use crate::numerics::gauss_legendre_32;
use crate::Result;
use rayon::prelude::*;

/// Two-level emitter description.
///
/// If `gamma0_free` is omitted it is filled from the free-space golden
/// rule, `gamma_0 = (4 omega^3 / 3 c^2) d^2 / (4 pi eps0 hbar c)`.
#[derive(Debug, Clone)]
pub struct AtomSpec {
    /// Transition wavelength lambda_0 [m].
    pub transition_wavelength: f64,
    /// Dipole matrix element magnitude d [C m].
    pub dipole_d: f64,
    /// Free-space decay rate [rad/s]; computed from d when None.
    pub gamma0_free: Option<f64>,
    /// Dipole orientation, unit vector in the local (r, phi, z) frame.
    pub dipole_orientation: [f64; 3],
}

impl AtomSpec {
    pub fn new(
        transition_wavelength: f64,
        dipole_d: f64,
        gamma0_free: Option<f64>,
        dipole_orientation: [f64; 3],
    ) -> Result<Self> {
        if !(transition_wavelength > 0.0) || !(dipole_d > 0.0) {
            return Err(Error::InvalidInput(
                "transition wavelength and dipole moment must be positive".into(),
            ));
        }
        let norm = dipole_orientation.iter().map(|u| u * u).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("zero dipole orientation".into()));
        }
        Ok(AtomSpec {
            transition_wavelength,
            dipole_d,
            gamma0_free,
            dipole_orientation: dipole_orientation.map(|u| u / norm),
        })
    }

    /// Atom described by its measured decay rate; the dipole moment is the
    /// golden-rule inversion of `gamma0`.
    pub fn from_gamma0(
        transition_wavelength: f64,
        gamma0: f64,
        dipole_orientation: [f64; 3],
    ) -> Result<Self> {
        let d = dipole_from_gamma0(transition_wavelength, gamma0)?;
        AtomSpec::new(transition_wavelength, d, Some(gamma0), dipole_orientation)
    }

    /// Transition angular frequency [rad/s].
    pub fn omega0(&self) -> f64 {
        2.0 * std::f64::consts::PI * constants::C / self.transition_wavelength
    }

    /// Free-space decay rate: stored value or golden rule.
    pub fn gamma0(&self) -> f64 {
        self.gamma0_free.unwrap_or_else(|| gamma0_fermi(self))
    }

    /// Resonant scattering cross section sigma_0 = 3 lambda^2 / (2 pi).
    pub fn sigma0(&self) -> f64 {
        3.0 * self.transition_wavelength * self.transition_wavelength
            / (2.0 * std::f64::consts::PI)
    }
}

/// Free-space decay rate from Fermi's golden rule,
/// `gamma_0 = (4 omega^3/3 c^2) d^2/(4 pi eps0 hbar c)`.
pub fn gamma0_fermi(atom: &AtomSpec) -> f64 {
    let omega = atom.omega0();
    let d2 = atom.dipole_d * atom.dipole_d;
    4.0 * omega.powi(3) / (3.0 * constants::C * constants::C) * d2
        / (4.0 * std::f64::consts::PI * constants::EPS0 * constants::HBAR * constants::C)
}

/// Dipole moment magnitude that reproduces `gamma0` at this wavelength.
pub fn dipole_from_gamma0(transition_wavelength: f64, gamma0: f64) -> Result<f64> {
    if !(gamma0 > 0.0) || !(transition_wavelength > 0.0) {
        return Err(Error::InvalidInput(
            "need positive gamma0 and wavelength".into(),
        ));
    }
    let omega = 2.0 * std::f64::consts::PI * constants::C / transition_wavelength;
    let d2 = gamma0 * 3.0 * std::f64::consts::PI * constants::EPS0 * constants::HBAR
        * constants::C.powi(3)
        / omega.powi(3);
    Ok(d2.sqrt())
}

/// Field amplitude whose average energy in `volume` equals one photon:
/// `E = sqrt(hbar omega / (2 eps0 V))`.
pub fn single_photon_field(mode_volume: f64, omega: f64) -> f64 {
    (constants::HBAR * omega / (2.0 * constants::EPS0 * mode_volume)).sqrt()
}

/// Fabry-Perot comparison cavity: mirror transmission and length.
#[derive(Debug, Clone, Copy)]
pub struct CavityParams {
    /// Mirror transmission T in (0, 1].
    pub mirror_transmission: f64,
    /// Mirror separation L [m].
    pub length: f64,
}

impl CavityParams {
    pub fn new(mirror_transmission: f64, length: f64) -> Result<Self> {
        if !(mirror_transmission > 0.0 && mirror_transmission <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "mirror transmission must be in (0, 1], got {mirror_transmission}"
            )));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidInput("cavity length must be positive".into()));
        }
        Ok(CavityParams {
            mirror_transmission,
            length,
        })
    }

    /// Field half-width kappa = c T / 2 L [rad/s].
    pub fn kappa(&self) -> f64 {
        constants::C * self.mirror_transmission / (2.0 * self.length)
    }
}

/// Single-atom cavity cooperativity by the geometric route,
/// `C_1 = (sigma_0 / A_mode) (1 / T)`.
pub fn cavity_cooperativity(atom: &AtomSpec, cavity: &CavityParams, mode_area: f64) -> Result<f64> {
    if !(mode_area > 0.0) {
        return Err(Error::InvalidInput("mode area must be positive".into()));
    }
    Ok(atom.sigma0() / mode_area / cavity.mirror_transmission)
}

/// The same cooperativity assembled from rates: `g^2 / (kappa gamma_perp)`
/// with `g = d E_photon / hbar`, `E_photon` the single-photon field in
/// `V = A_mode L`, and `gamma_perp = gamma_0 / 2` the dipole half-width
/// (kappa is a half-width too, so the conventions match).
pub fn cavity_cooperativity_rates(
    atom: &AtomSpec,
    cavity: &CavityParams,
    mode_area: f64,
) -> Result<f64> {
    if !(mode_area > 0.0) {
        return Err(Error::InvalidInput("mode area must be positive".into()));
    }
    let volume = mode_area * cavity.length;
    let g = atom.dipole_d * single_photon_field(volume, atom.omega0()) / constants::HBAR;
    let gamma_perp = 0.5 * atom.gamma0();
    Ok(g * g / (cavity.kappa() * gamma_perp))
}

/// Radiative (non-guided) channel model for the total decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiativeModel {
    /// gamma_rad = gamma_0 (surface modification ignored).
    FreeSpace,
    /// gamma_rad = factor * gamma_0 (externally supplied modification).
    Scaled(f64),
}

impl RadiativeModel {
    fn gamma_rad(&self, gamma0: f64) -> f64 {
        match self {
            RadiativeModel::FreeSpace => gamma0,
            RadiativeModel::Scaled(f) => f * gamma0,
        }
    }
}

/// Atom-mode figures of merit at one geometry and atom position.
#[derive(Debug, Clone)]
pub struct CouplingReport {
    /// Single-photon coupling rate for a one-wavelength quantization cell
    /// V = A_mode lambda_0 [rad/s].
    pub g: f64,
    /// Free-space decay rate [rad/s].
    pub gamma0: f64,
    /// Emission rate into the guided mode, both directions and rotations
    /// summed [rad/s].
    pub gamma1d: f64,
    /// Total decay rate gamma_1D + gamma_rad [rad/s].
    pub gamma_tot: f64,
    /// Emission enhancement alpha = gamma_1D / gamma_0.
    pub alpha_enh: f64,
    /// Coupling efficiency beta = gamma_1D / gamma_tot.
    pub beta_c: f64,
    /// Single-atom cooperativity C_1 = beta/(1 - beta).
    pub c1: f64,
    /// Purcell factor gamma_tot / gamma_0 = alpha / beta.
    pub purcell: f64,
    /// Single-pass optical depth of one atom (flux route, = alpha).
    pub od_single: f64,
    /// Effective mode area sigma_0 / OD [m^2].
    pub mode_area: f64,
    /// Resonant scattering cross section sigma_0 [m^2].
    pub atom_area: f64,
}

impl CouplingReport {
    /// Total cooperativity of N identical atoms, C = C_1 N.
    pub fn collective(&self, n_atoms: f64) -> f64 {
        self.c1 * n_atoms
    }
}

/// Precomputed guided channel: the rotation pair of one hybrid mode, its
/// group-delay derivative, and the n^2-weighted profile normalization.
/// Build once per geometry, then query many atom positions cheaply.
#[derive(Debug, Clone)]
pub struct GuidedChannel {
    pub plus: ModeSolution,
    pub minus: ModeSolution,
    /// d beta / d omega [s/m].
    pub beta_slope: f64,
    /// int n^2 |E|^2 dA for each stored rotation [V^2].
    norm: f64,
}

impl GuidedChannel {
    /// Solve and prepare a hybrid-mode channel.
    pub fn new(fiber: &FiberSpec, family: ModeFamily, l: u32, m: u32) -> Result<Self> {
        let (plus, minus) = solve_rotation_pair(fiber, family, l, m, 1.0)?;
        let beta_slope = dbeta_domega(fiber, &plus.mode)?;
        let norm = profile_norm(&plus);
        Ok(GuidedChannel {
            plus,
            minus,
            beta_slope,
            norm,
        })
    }

    /// Guided emission rate for an atom at `radial_distance` from the axis.
    pub fn gamma_1d(&self, atom: &AtomSpec, radial_distance: f64) -> Result<f64> {
        let u = atom.dipole_orientation;
        self.gamma_1d_complex_dipole(
            atom,
            radial_distance,
            [u[0].into(), u[1].into(), u[2].into()],
        )
    }

    /// Guided emission rate with the induced dipole aligned to the local
    /// field of the circularly polarized (single-rotation) mode at the atom
    /// position — the convention behind near-surface emission-enhancement
    /// maps. The alignment makes the dipole complex (sigma-type).
    pub fn gamma_1d_field_aligned(&self, atom: &AtomSpec, radial_distance: f64) -> Result<f64> {
        let (e, _) = crate::fields::fields_at(
            &self.plus,
            PropagationSense::Forward,
            radial_distance,
            0.0,
            0.0,
            0.0,
        );
        let mag = (e[0].norm_sqr() + e[1].norm_sqr() + e[2].norm_sqr()).sqrt();
        if mag == 0.0 {
            return Err(Error::Domain("vanishing field at atom position".into()));
        }
        // d ~ e*, so that d . e = |e|
        let u = [e[0].conj() / mag, e[1].conj() / mag, e[2].conj() / mag];
        self.gamma_1d_complex_dipole(atom, radial_distance, u)
    }

    fn gamma_1d_complex_dipole(
        &self,
        atom: &AtomSpec,
        radial_distance: f64,
        u: [num_complex::Complex64; 3],
    ) -> Result<f64> {
        let fiber = &self.plus.fiber;
        if radial_distance <= fiber.radius_a {
            return Err(Error::Domain(format!(
                "atom at r = {radial_distance} m is inside the fiber (a = {} m)",
                fiber.radius_a
            )));
        }
        let omega = fiber.omega();
        let mut coupling_sum = 0.0;
        for sol in [&self.plus, &self.minus] {
            for sense in [PropagationSense::Forward, PropagationSense::Backward] {
                let (e, _) = crate::fields::fields_at(sol, sense, radial_distance, 0.0, 0.0, 0.0);
                let dot = e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
                coupling_sum += dot.norm_sqr() / self.norm;
            }
        }
        let d2 = atom.dipole_d * atom.dipole_d;
        Ok(omega * d2 / (2.0 * constants::HBAR * constants::EPS0) * self.beta_slope * coupling_sum)
    }
}

/// n^2-weighted profile normalization integral over the cross-section.
fn profile_norm(sol: &ModeSolution) -> f64 {
    let a = sol.fiber.radius_a;
    let q = sol.q;
    let (nodes, weights) = gauss_legendre_32();
    let density = |r: f64| {
        let (e, _) = crate::fields::fields_at(sol, PropagationSense::Forward, r, 0.0, 0.0, 0.0);
        let n2 = sol.fiber.index_at(r).powi(2);
        n2 * (e[0].norm_sqr() + e[1].norm_sqr() + e[2].norm_sqr()) * r
    };
    let interior = [0.0, 0.25 * a, 0.5 * a, 0.75 * a, a];
    let exterior = [a, a + 1.0 / q, a + 4.0 / q, a + 10.0 / q, a + 23.0 / q];
    let mut total = 0.0;
    for breaks in [interior, exterior] {
        for w in breaks.windows(2) {
            let c = 0.5 * (w[1] - w[0]);
            let m = 0.5 * (w[1] + w[0]);
            for (x, wt) in nodes.iter().zip(weights.iter()) {
                total += wt * c * density(m + c * x);
            }
        }
    }
    2.0 * std::f64::consts::PI * total
}

/// Guided emission rate of an atom near the fiber, both propagation
/// directions and both rotations of the mode pair summed.
pub fn gamma_1d(
    fiber: &FiberSpec,
    pair: (&ModeSolution, &ModeSolution),
    atom: &AtomSpec,
    radial_distance: f64,
) -> Result<f64> {
    let (plus, minus) = pair;
    if !plus.mode.same_branch(&minus.mode) {
        return Err(Error::ModeMismatch(format!(
            "{} and {} are different branches",
            plus.mode, minus.mode
        )));
    }
    let channel = GuidedChannel {
        plus: plus.clone(),
        minus: minus.clone(),
        beta_slope: dbeta_domega(fiber, &plus.mode)?,
        norm: profile_norm(plus),
    };
    channel.gamma_1d(atom, radial_distance)
}

/// Assemble the full coupling report for an atom near the fundamental mode.
///
/// `radial_distance` is measured from the fiber axis.
pub fn coupling_report(
    fiber: &FiberSpec,
    atom: &AtomSpec,
    radial_distance: f64,
    radiative_model: RadiativeModel,
) -> Result<CouplingReport> {
    let channel = GuidedChannel::new(fiber, ModeFamily::HE, 1, 1)?;
    report_from_channel(&channel, atom, radial_distance, radiative_model)
}

/// Report with the guided rate averaged uniformly over the three local
/// dipole axes (r, phi, z).
pub fn coupling_report_orientation_averaged(
    fiber: &FiberSpec,
    atom: &AtomSpec,
    radial_distance: f64,
    radiative_model: RadiativeModel,
) -> Result<CouplingReport> {
    let channel = GuidedChannel::new(fiber, ModeFamily::HE, 1, 1)?;
    let mut g1d = 0.0;
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let probe = AtomSpec {
            dipole_orientation: axis,
            ..atom.clone()
        };
        g1d += channel.gamma_1d(&probe, radial_distance)?;
    }
    assemble_report(atom, g1d / 3.0, radiative_model)
}

/// Report for a prebuilt channel (avoids re-solving inside sweeps).
pub fn report_from_channel(
    channel: &GuidedChannel,
    atom: &AtomSpec,
    radial_distance: f64,
    radiative_model: RadiativeModel,
) -> Result<CouplingReport> {
    let g1d = channel.gamma_1d(atom, radial_distance)?;
    assemble_report(atom, g1d, radiative_model)
}

fn assemble_report(
    atom: &AtomSpec,
    gamma1d: f64,
    radiative_model: RadiativeModel,
) -> Result<CouplingReport> {
    let gamma0 = atom.gamma0();
    let gamma_rad = radiative_model.gamma_rad(gamma0);
    let gamma_tot = gamma1d + gamma_rad;
    let alpha = gamma1d / gamma0;
    let beta_c = gamma1d / gamma_tot;
    let c1 = if beta_c < 1.0 {
        beta_c / (1.0 - beta_c)
    } else {
        f64::INFINITY
    };
    let od = alpha;
    let sigma0 = atom.sigma0();
    let mode_area = if od > 0.0 { sigma0 / od } else { f64::INFINITY };
    let g = if mode_area.is_finite() {
        atom.dipole_d * single_photon_field(mode_area * atom.transition_wavelength, atom.omega0())
            / constants::HBAR
    } else {
        0.0
    };
    Ok(CouplingReport {
        g,
        gamma0,
        gamma1d,
        gamma_tot,
        alpha_enh: alpha,
        beta_c,
        c1,
        purcell: gamma_tot / gamma0,
        od_single: od,
        mode_area,
        atom_area: sigma0,
    })
}

/// One row of the radius-distance coupling sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Fiber radius [m].
    pub radius: f64,
    /// Atom-surface distance [m].
    pub distance: f64,
    pub alpha: f64,
    pub beta_c: f64,
    pub c1: f64,
    pub purcell: f64,
}

/// Coupling figures over a (fiber radius) x (atom-surface distance) grid
/// for the fundamental mode. Distances are measured from the surface.
pub fn sweep_radius_distance(
    template: &FiberSpec,
    atom: &AtomSpec,
    radii: &[f64],
    surface_distances: &[f64],
    radiative_model: RadiativeModel,
) -> Result<Vec<SweepRow>> {
    let per_radius: Vec<Result<Vec<SweepRow>>> = radii
        .par_iter()
        .map(|&radius| {
            let fiber = template.at_radius(radius)?;
            let channel = GuidedChannel::new(&fiber, ModeFamily::HE, 1, 1)?;
            surface_distances
                .iter()
                .map(|&d| {
                    let report = report_from_channel(&channel, atom, radius + d, radiative_model)?;
                    Ok(SweepRow {
                        radius,
                        distance: d,
                        alpha: report.alpha_enh,
                        beta_c: report.beta_c,
                        c1: report.c1,
                        purcell: report.purcell,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(radii.len() * surface_distances.len());
    for group in per_radius {
        rows.extend(group?);
    }
    Ok(rows)
}
