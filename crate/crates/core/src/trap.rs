//! Two-color evanescent dipole trap: scalar light shifts of a red standing
//! wave and a blue running wave plus the surface van der Waals term, with
//! minimum location, depth, lattice contrast, and trap frequencies.
//!
//! The model is deliberately the scalar two-level one: the shift is
//! `U = -(3 pi c^2 / 2 omega_0^3) gamma_0 (1/(omega_0 - omega_L)
//! + 1/(omega_0 + omega_L)) I`, counter-rotating term included, applied to
//! the local intensity `I = (c eps0/2)|E|^2` of each trapping beam. Vector
//! shifts and multilevel structure are out of scope; each beam carries a
//! scalar `shift_weight` hook so externally computed corrections can be
//! folded in.
//!
//! A standing-wave beam pair interferes with the backward partner's `E_z`
//! sign flipped, so the axial lattice never reaches full contrast:
//! `I(z) = 2(|E_t|^2 + |E_z|^2) + 2(|E_t|^2 - |E_z|^2) cos(2 beta z)`.

use crate::constants;
use crate::coupling::AtomSpec;
use crate::error::Error;
use crate::fiber::{FiberSpec, ModeFamily};
use crate::fields::{quasilinear, PropagationSense, QuasiSign, QuasilinearMode};
use crate::modesolver::solve_rotation_pair;
use crate::numerics::golden_min;
use crate::Result;
use rayon::prelude::*;

/// Beam layout along the fiber axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamConfiguration {
    /// Two counter-propagating beams of `power_per_beam` each.
    StandingWave,
    /// A single beam of `power_per_beam`.
    RunningWave,
}

/// One trapping beam in the fundamental mode.
#[derive(Debug, Clone)]
pub struct TrapBeam {
    /// Vacuum wavelength [m].
    pub wavelength: f64,
    /// Power per beam [W].
    pub power_per_beam: f64,
    /// Quasilinear polarization axis [rad].
    pub polarization_azimuth: f64,
    pub configuration: BeamConfiguration,
    /// Scalar multiplier on this beam's light shift (default 1); hook for
    /// externally computed level-structure corrections.
    pub shift_weight: f64,
}

impl TrapBeam {
    pub fn new(
        wavelength: f64,
        power_per_beam: f64,
        polarization_azimuth: f64,
        configuration: BeamConfiguration,
    ) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(Error::InvalidInput("beam wavelength must be positive".into()));
        }
        if power_per_beam < 0.0 {
            return Err(Error::InvalidInput("beam power must be non-negative".into()));
        }
        Ok(TrapBeam {
            wavelength,
            power_per_beam,
            polarization_azimuth,
            configuration,
            shift_weight: 1.0,
        })
    }
}

/// Full two-color trap description.
#[derive(Debug, Clone)]
pub struct TrapConfig {
    /// Waveguide geometry; the wavelength field is replaced per beam.
    pub fiber: FiberSpec,
    pub atom: AtomSpec,
    /// Atomic mass [kg] (needed for trap frequencies).
    pub atom_mass: f64,
    /// Red-detuned (attractive) beam.
    pub red: TrapBeam,
    /// Blue-detuned (repulsive) beam.
    pub blue: TrapBeam,
    /// van der Waals coefficient C3 [J m^3]; no default, measured input.
    pub c3_vdw: f64,
}

impl TrapConfig {
    pub fn validate(&self) -> Result<()> {
        let l0 = self.atom.transition_wavelength;
        if !(self.red.wavelength > l0 && l0 > self.blue.wavelength) {
            return Err(Error::InvalidInput(format!(
                "need red wavelength > transition ({l0}) > blue wavelength, got red = {}, blue = {}",
                self.red.wavelength, self.blue.wavelength
            )));
        }
        if !(self.atom_mass > 0.0) {
            return Err(Error::InvalidInput("atom mass must be positive".into()));
        }
        if self.c3_vdw < 0.0 {
            return Err(Error::InvalidInput("C3 must be non-negative".into()));
        }
        Ok(())
    }
}

/// Sampling grid for the potential, radial offsets measured from the
/// surface (the grid never touches r <= a).
#[derive(Debug, Clone, Copy)]
pub struct TrapGrid {
    /// Closest sampled point above the surface [m].
    pub r_offset_min: f64,
    /// Farthest sampled point above the surface [m].
    pub r_offset_max: f64,
    pub n_r: usize,
    pub n_phi: usize,
    pub n_z: usize,
}

impl Default for TrapGrid {
    fn default() -> Self {
        TrapGrid {
            r_offset_min: 5e-9,
            r_offset_max: 800e-9,
            n_r: 96,
            n_phi: 48,
            n_z: 24,
        }
    }
}

/// Sampled total potential with the trap characterization.
#[derive(Debug, Clone)]
pub struct TrapProfile {
    /// Radial sample coordinates [m].
    pub r: Vec<f64>,
    /// Azimuthal sample coordinates [rad].
    pub phi: Vec<f64>,
    /// Axial sample coordinates over one lattice period [m].
    pub z: Vec<f64>,
    /// Per-sample (U_red, U_blue, U_vdw, U_total) [J], row-major (r, phi, z).
    pub samples: Vec<[f64; 4]>,
    /// Refined minimum position (r, phi, z).
    pub minimum_position: (f64, f64, f64),
    /// Potential at the minimum [J] (negative for a bound trap).
    pub u_min: f64,
    /// Trap depth [J]: smaller of the escape barriers toward the surface
    /// and toward infinity.
    pub depth: f64,
    /// Axial intensity contrast of the red lattice at the trap radius.
    pub lattice_contrast: f64,
    /// Same contrast measured on the red potential magnitude.
    pub lattice_contrast_potential: f64,
    /// (omega_r, omega_phi, omega_z) [rad/s].
    pub trap_frequencies: (f64, f64, f64),
}

impl TrapProfile {
    /// Depth in microkelvin.
    pub fn depth_uk(&self) -> f64 {
        self.depth / constants::K_B * 1e6
    }
}

/// Scalar two-level light shift of `intensity` at laser wavelength
/// `laser_wavelength`, counter-rotating term included [J].
pub fn scalar_shift(intensity: f64, atom: &AtomSpec, laser_wavelength: f64) -> Result<f64> {
    Ok(shift_per_intensity(atom, laser_wavelength)? * intensity)
}

/// The shift coefficient U/I [J per W m^-2].
pub fn shift_per_intensity(atom: &AtomSpec, laser_wavelength: f64) -> Result<f64> {
    if !(laser_wavelength > 0.0) {
        return Err(Error::InvalidInput("laser wavelength must be positive".into()));
    }
    let omega0 = atom.omega0();
    let omega_l = 2.0 * std::f64::consts::PI * constants::C / laser_wavelength;
    if ((omega_l - omega0) / omega0).abs() < 1e-9 {
        return Err(Error::Domain(
            "laser on atomic resonance: scalar shift diverges".into(),
        ));
    }
    let gamma0 = atom.gamma0();
    Ok(-(3.0 * std::f64::consts::PI * constants::C * constants::C)
        / (2.0 * omega0.powi(3))
        * gamma0
        * (1.0 / (omega0 - omega_l) + 1.0 / (omega0 + omega_l)))
}

/// Surface van der Waals potential -C3/d^3 [J] at distance d from the
/// surface.
pub fn vdw_potential(distance_from_surface: f64, c3: f64) -> Result<f64> {
    if !(distance_from_surface > 0.0) {
        return Err(Error::Domain(format!(
            "van der Waals distance must be positive, got {distance_from_surface}"
        )));
    }
    Ok(-c3 / distance_from_surface.powi(3))
}

/// Precomputed guided trapping field of one beam: the quasilinear pair in
/// the fundamental mode at the beam wavelength and power.
#[derive(Debug, Clone)]
pub struct BeamField {
    pub ql: QuasilinearMode,
    pub beta: f64,
    pub azimuth: f64,
    pub standing: bool,
}

impl BeamField {
    pub fn new(fiber: &FiberSpec, beam: &TrapBeam) -> Result<Self> {
        let beam_fiber = fiber.at_wavelength(beam.wavelength)?;
        let (plus, minus) =
            solve_rotation_pair(&beam_fiber, ModeFamily::HE, 1, 1, beam.power_per_beam)?;
        let beta = plus.beta_prop;
        let ql = quasilinear(plus, minus, QuasiSign::Plus)?;
        Ok(BeamField {
            ql,
            beta,
            azimuth: beam.polarization_azimuth,
            standing: beam.configuration == BeamConfiguration::StandingWave,
        })
    }

    /// (|E_transverse|^2, |E_z|^2) of the forward beam profile at (r, phi).
    fn profile_parts(&self, r: f64, phi: f64) -> (f64, f64) {
        let (e, _) = self
            .ql
            .fields_at(PropagationSense::Forward, r, phi - self.azimuth, 0.0, 0.0);
        (e[0].norm_sqr() + e[1].norm_sqr(), e[2].norm_sqr())
    }

    /// Intensity (c eps0 / 2)|E|^2 at a point, including the axial lattice
    /// when the beam is a standing-wave pair.
    pub fn intensity(&self, r: f64, phi: f64, z: f64) -> f64 {
        let (perp, long) = self.profile_parts(r, phi);
        let half_ce = 0.5 * constants::C * constants::EPS0;
        if self.standing {
            // counter-propagating partner has E_z flipped: the cross term
            // is |E_t|^2 - |E_z|^2
            half_ce
                * (2.0 * (perp + long) + 2.0 * (perp - long) * (2.0 * self.beta * z).cos())
        } else {
            half_ce * (perp + long)
        }
    }

    /// Axial intensity contrast (I_max - I_min)/(I_max + I_min) at (r, phi).
    pub fn axial_contrast(&self, r: f64, phi: f64) -> f64 {
        if !self.standing {
            return 0.0;
        }
        let (perp, long) = self.profile_parts(r, phi);
        (perp - long).abs() / (perp + long)
    }
}

/// Axial intensity of a standing-wave beam on the fundamental mode.
pub fn standing_wave_intensity(
    fiber: &FiberSpec,
    beam: &TrapBeam,
    r: f64,
    phi: f64,
    z: f64,
) -> Result<f64> {
    if beam.configuration != BeamConfiguration::StandingWave {
        return Err(Error::InvalidInput(
            "standing_wave_intensity needs a standing-wave beam".into(),
        ));
    }
    Ok(BeamField::new(fiber, beam)?.intensity(r, phi, z))
}

/// Potential evaluator combining both beams and the surface term.
pub struct TrapPotential {
    red: BeamField,
    blue: BeamField,
    red_coeff: f64,
    blue_coeff: f64,
    c3: f64,
    radius_a: f64,
    /// Red lattice period pi/beta_red [m].
    pub axial_period: f64,
}

impl TrapPotential {
    pub fn new(config: &TrapConfig) -> Result<Self> {
        config.validate()?;
        let red = BeamField::new(&config.fiber, &config.red)?;
        let blue = BeamField::new(&config.fiber, &config.blue)?;
        let red_coeff =
            shift_per_intensity(&config.atom, config.red.wavelength)? * config.red.shift_weight;
        let blue_coeff =
            shift_per_intensity(&config.atom, config.blue.wavelength)? * config.blue.shift_weight;
        let axial_period = std::f64::consts::PI / red.beta;
        Ok(TrapPotential {
            red,
            blue,
            red_coeff,
            blue_coeff,
            c3: config.c3_vdw,
            radius_a: config.fiber.radius_a,
            axial_period,
        })
    }

    /// (U_red, U_blue, U_vdw) at a point [J].
    pub fn components(&self, r: f64, phi: f64, z: f64) -> [f64; 3] {
        let u_red = self.red_coeff * self.red.intensity(r, phi, z);
        let u_blue = self.blue_coeff * self.blue.intensity(r, phi, z);
        let u_vdw = -self.c3 / (r - self.radius_a).powi(3);
        [u_red, u_blue, u_vdw]
    }

    /// Total potential [J].
    pub fn total(&self, r: f64, phi: f64, z: f64) -> f64 {
        let [a, b, c] = self.components(r, phi, z);
        a + b + c
    }
}

/// Refine one grid candidate and characterize it: golden-section descent,
/// surface-barrier depth, curvatures. Fails with `NoBoundMinimum` when the
/// candidate is a saddle, lies above its own barrier, or is not bound.
#[allow(clippy::too_many_arguments)]
fn characterize_minimum(
    pot: &TrapPotential,
    grid: &TrapGrid,
    r_axis: &[f64],
    phi_axis: &[f64],
    z_axis: &[f64],
    a: f64,
    atom_mass: f64,
    ir: usize,
    ip: usize,
    iz: usize,
) -> Result<((f64, f64, f64), f64, f64, (f64, f64, f64))> {
    // golden-section refinement along each axis, two rounds; the radial
    // bracket stays inside the grid cell pair so it cannot slide over the
    // barrier into the surface well
    let (mut r0, mut p0, mut z0) = (r_axis[ir], phi_axis[ip], z_axis[iz]);
    let (mut r_lo, mut r_hi) = (r_axis[ir - 1], r_axis[ir + 1]);
    let dp = phi_axis[1] - phi_axis[0];
    let dz = z_axis.get(1).copied().unwrap_or(pot.axial_period / 8.0);
    for _ in 0..2 {
        r0 = golden_min(|r| pot.total(r, p0, z0), r_lo, r_hi, 1e-13);
        p0 = golden_min(|p| pot.total(r0, p, z0), p0 - dp, p0 + dp, 1e-10);
        z0 = golden_min(|z| pot.total(r0, p0, z), z0 - dz, z0 + dz, 1e-13);
        let span = 0.25 * (r_hi - r_lo);
        r_lo = r0 - span;
        r_hi = r0 + span;
    }
    let _ = grid;
    let u_min = pot.total(r0, p0, z0);
    if !(u_min < 0.0) {
        return Err(Error::NoBoundMinimum(format!(
            "potential at the candidate minimum is non-negative ({u_min:.3e} J)"
        )));
    }

    // escape barrier toward the surface along the ray through the minimum
    let mut barrier = f64::NEG_INFINITY;
    let n_scan = 400;
    for i in 1..n_scan {
        let r = a + (r0 - a) * i as f64 / n_scan as f64;
        barrier = barrier.max(pot.total(r, p0, z0));
    }
    let depth = (-u_min).min(barrier - u_min);
    if !(depth > 0.0) {
        return Err(Error::NoBoundMinimum(format!(
            "no repulsive barrier between the minimum and the surface (barrier = {barrier:.3e} J)"
        )));
    }

    // curvatures by central differences; steps well below the trap size
    let h = 1e-9;
    let d2 = |f: &dyn Fn(f64) -> f64| (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    let k_r = d2(&|d| pot.total(r0 + d, p0, z0));
    let k_p = d2(&|d| pot.total(r0, p0 + d / r0, z0));
    let k_z = d2(&|d| pot.total(r0, p0, z0 + d));
    if k_r <= 0.0 || k_p <= 0.0 || k_z <= 0.0 {
        return Err(Error::NoBoundMinimum(format!(
            "curvature not positive at candidate minimum: ({k_r:.3e}, {k_p:.3e}, {k_z:.3e})"
        )));
    }
    let freqs = (
        (k_r / atom_mass).sqrt(),
        (k_p / atom_mass).sqrt(),
        (k_z / atom_mass).sqrt(),
    );
    Ok(((r0, p0, z0), u_min, depth, freqs))
}

/// Sample the total potential, locate the minimum, and characterize the
/// trap. Fails with `NoBoundMinimum` when no interior minimum with
/// positive depth exists.
pub fn total_potential(config: &TrapConfig, grid: &TrapGrid) -> Result<TrapProfile> {
    if !(grid.r_offset_min > 0.0 && grid.r_offset_max > grid.r_offset_min) {
        return Err(Error::InvalidInput(
            "grid radial offsets must satisfy 0 < min < max (the grid excludes r <= a)".into(),
        ));
    }
    if grid.n_r < 8 || grid.n_phi < 4 || grid.n_z < 4 {
        return Err(Error::InvalidInput("grid too coarse".into()));
    }
    let pot = TrapPotential::new(config)?;
    let a = config.fiber.radius_a;

    let r_axis: Vec<f64> = (0..grid.n_r)
        .map(|i| {
            a + grid.r_offset_min
                + (grid.r_offset_max - grid.r_offset_min) * i as f64 / (grid.n_r - 1) as f64
        })
        .collect();
    let phi_axis: Vec<f64> = (0..grid.n_phi)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / grid.n_phi as f64)
        .collect();
    let z_axis: Vec<f64> = (0..grid.n_z)
        .map(|i| pot.axial_period * i as f64 / grid.n_z as f64)
        .collect();

    // evaluate in parallel over (r, phi) columns; z reuses the profile
    let rp: Vec<(f64, f64)> = r_axis
        .iter()
        .flat_map(|&r| phi_axis.iter().map(move |&phi| (r, phi)))
        .collect();
    let columns: Vec<Vec<[f64; 4]>> = rp
        .par_iter()
        .map(|&(r, phi)| {
            z_axis
                .iter()
                .map(|&z| {
                    let [ur, ub, uv] = pot.components(r, phi, z);
                    [ur, ub, uv, ur + ub + uv]
                })
                .collect()
        })
        .collect();
    let mut samples = Vec::with_capacity(grid.n_r * grid.n_phi * grid.n_z);
    for col in columns {
        samples.extend(col);
    }

    // The total potential always dives to -inf at the surface (van der
    // Waals), so the trap is a LOCAL minimum behind the repulsive barrier,
    // never the global one. Collect the innermost radial local minimum of
    // every (phi, z) column, then try candidates deepest-first: some are
    // azimuthal saddles or near-surface slivers and fail characterization.
    let at =
        |ir: usize, ip: usize, iz: usize| samples[(ir * grid.n_phi + ip) * grid.n_z + iz][3];
    let mut candidates: Vec<(usize, usize, usize, f64)> = Vec::new();
    for ip in 0..grid.n_phi {
        for iz in 0..grid.n_z {
            for ir in 1..grid.n_r - 1 {
                let u = at(ir, ip, iz);
                if u < at(ir - 1, ip, iz) && u <= at(ir + 1, ip, iz) {
                    candidates.push((ir, ip, iz, u));
                    break;
                }
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoBoundMinimum(
            "no radially interior local minimum on the grid (potential monotone into the surface)"
                .into(),
        ));
    }
    candidates.sort_by(|x, y| x.3.partial_cmp(&y.3).unwrap());

    let mut last_reason = String::new();
    let mut characterized: Option<((f64, f64, f64), f64, f64, (f64, f64, f64))> = None;
    for &(ir, ip, iz, _) in candidates.iter().take(64) {
        match characterize_minimum(&pot, grid, &r_axis, &phi_axis, &z_axis, a, config.atom_mass, ir, ip, iz)
        {
            Ok(found) => {
                characterized = Some(found);
                break;
            }
            Err(Error::NoBoundMinimum(why)) => last_reason = why,
            Err(other) => return Err(other),
        }
    }
    let Some((minimum, u_min, depth, freqs)) = characterized else {
        return Err(Error::NoBoundMinimum(format!(
            "no candidate survived characterization; last failure: {last_reason}"
        )));
    };
    let (r0, p0, z0) = minimum;

    let contrast = pot.red.axial_contrast(r0, p0);
    // potential-contrast variant: modulation of the total potential
    // magnitude along z at the trap radius (includes the z-independent
    // blue and van der Waals offsets, so it differs from the intensity
    // contrast of the red lattice alone)
    let mut u_hi = f64::NEG_INFINITY;
    let mut u_lo = f64::INFINITY;
    for i in 0..64 {
        let u = pot
            .total(r0, p0, pot.axial_period * i as f64 / 64.0)
            .abs();
        u_hi = u_hi.max(u);
        u_lo = u_lo.min(u);
    }
    let contrast_pot = (u_hi - u_lo) / (u_hi + u_lo);

    Ok(TrapProfile {
        r: r_axis,
        phi: phi_axis,
        z: z_axis,
        samples,
        minimum_position: (r0, p0, z0),
        u_min,
        depth,
        lattice_contrast: contrast,
        lattice_contrast_potential: contrast_pot,
        trap_frequencies: freqs,
    })
}
