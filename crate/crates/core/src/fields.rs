//! Exact vector fields of a guided mode, power normalization, quasilinear
//! superpositions, and the evanescent far-field approximation.
//!
//! Conventions (these fix every sign downstream, including the chirality of
//! the longitudinal component):
//!
//! * time factor `exp(+i omega t)`, forward propagation `exp(-i beta z)`,
//!   azimuthal dependence `exp(+- i l phi)`; physical fields are the real
//!   parts;
//! * a backward-propagating mode is the mirror solution: transverse E kept,
//!   `E_z` sign flipped, transverse H flipped, `H_z` kept, with
//!   `exp(+i beta z)`;
//! * `r = a` evaluates on the exterior branch (atoms live outside);
//! * intensity is `I = (c eps0 / 2) |E|^2` with the full complex vector
//!   magnitude.

use crate::constants;
use crate::error::Error;
use crate::fiber::{FiberSpec, ModeSolution, Rotation};
use crate::numerics::gauss_legendre_32;
use crate::Result;
use num_complex::Complex64;

use crate::bessel::{bessel_j, bessel_j_prime, bessel_k, bessel_k_prime, bessel_k_scaled};

/// Propagation direction along the fiber axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationSense {
    Forward,
    Backward,
}

/// Complex E and H at one point, cylindrical components (r, phi, z).
#[derive(Debug, Clone)]
pub struct FieldSample {
    /// (r [m], phi [rad], z [m]).
    pub position: (f64, f64, f64),
    /// Electric field components (E_r, E_phi, E_z) [V/m].
    pub e: [Complex64; 3],
    /// Magnetic field components (H_r, H_phi, H_z) [A/m].
    pub h: [Complex64; 3],
}

/// Radial profile of the six components at azimuth phi, with the z and t
/// factors stripped (they are pure phases applied afterwards).
fn profile_at(sol: &ModeSolution, r: f64, phi: f64) -> ([Complex64; 3], [Complex64; 3]) {
    let fiber = &sol.fiber;
    let a = fiber.radius_a;
    let l = sol.mode.l;
    let lf = l as f64;
    let sigma = sol.mode.rotation.sign();
    let beta = sol.beta_prop;
    let omega = fiber.omega();
    let mu0w = constants::MU0 * omega;
    let i = Complex64::I;
    // keep the 1/r terms finite on the axis; they only appear for l >= 1
    // where the fields vanish or stay finite as r -> 0
    let r_safe = r.max(1e-9 * a);

    let (e, h);
    if r < a {
        let h_t = sol.h;
        let u = h_t * r_safe;
        let jl = bessel_j(l, u);
        let jp = bessel_j_prime(l, u);
        let pref = -i * beta / (h_t * h_t);
        let eps1w = fiber.eps1() * omega;
        let a_c = sol.a_const;
        let b_c = sol.b_const;
        let lr = if l == 0 {
            Complex64::ZERO
        } else {
            Complex64::new(lf / r_safe, 0.0)
        };
        let e_r = pref * (sigma * i * (mu0w / beta) * lr * b_c * jl + a_c * h_t * jp);
        let e_p = pref * (sigma * i * lr * a_c * jl - (mu0w * h_t / beta) * b_c * jp);
        let e_z = a_c * jl;
        let h_r = pref * (-sigma * i * (eps1w / beta) * lr * a_c * jl + b_c * h_t * jp);
        let h_p = pref * ((eps1w / beta) * a_c * h_t * jp + sigma * i * lr * b_c * jl);
        let h_z = b_c * jl;
        e = [e_r, e_p, e_z];
        h = [h_r, h_p, h_z];
    } else {
        let q = sol.q;
        let w = q * r_safe;
        let kl = bessel_k(l, w);
        let kp = bessel_k_prime(l, w);
        let pref = i * beta / (q * q);
        let eps2w = fiber.eps2() * omega;
        let c_c = sol.c_const;
        let d_c = sol.d_const;
        let lr = if l == 0 {
            Complex64::ZERO
        } else {
            Complex64::new(lf / r_safe, 0.0)
        };
        let e_r = pref * (sigma * i * (mu0w / beta) * lr * d_c * kl + c_c * q * kp);
        let e_p = pref * (sigma * i * lr * c_c * kl - (mu0w * q / beta) * d_c * kp);
        let e_z = c_c * kl;
        let h_r = pref * (-sigma * i * (eps2w / beta) * lr * c_c * kl + d_c * q * kp);
        let h_p = pref * ((eps2w / beta) * c_c * q * kp + sigma * i * lr * d_c * kl);
        let h_z = d_c * kl;
        e = [e_r, e_p, e_z];
        h = [h_r, h_p, h_z];
    }
    let az = Complex64::from_polar(1.0, sigma * lf * phi);
    (e.map(|c| c * az), h.map(|c| c * az))
}

/// Full complex fields of one mode at a point and time.
pub fn fields_at(
    sol: &ModeSolution,
    sense: PropagationSense,
    r: f64,
    phi: f64,
    z: f64,
    t: f64,
) -> ([Complex64; 3], [Complex64; 3]) {
    let (mut e, mut h) = profile_at(sol, r, phi);
    let omega = sol.fiber.omega();
    let beta = sol.beta_prop;
    let phase = match sense {
        PropagationSense::Forward => Complex64::from_polar(1.0, omega * t - beta * z),
        PropagationSense::Backward => Complex64::from_polar(1.0, omega * t + beta * z),
    };
    if sense == PropagationSense::Backward {
        e[2] = -e[2];
        h[0] = -h[0];
        h[1] = -h[1];
    }
    (e.map(|c| c * phase), h.map(|c| c * phase))
}

/// Evaluate the mode fields at a list of (r, phi, z) positions.
pub fn evaluate_fields(
    sol: &ModeSolution,
    sense: PropagationSense,
    points: &[(f64, f64, f64)],
    t: f64,
) -> Vec<FieldSample> {
    points
        .iter()
        .map(|&(r, phi, z)| {
            let (e, h) = fields_at(sol, sense, r, phi, z, t);
            FieldSample {
                position: (r, phi, z),
                e,
                h,
            }
        })
        .collect()
}

/// Time-averaged intensity (c eps0 / 2) |E|^2 [W/m^2].
pub fn intensity(e: &[Complex64; 3]) -> f64 {
    0.5 * constants::C * constants::EPS0 * (e[0].norm_sqr() + e[1].norm_sqr() + e[2].norm_sqr())
}

/// Time-averaged axial Poynting density S_z = Re(E x H*)_z / 2 [W/m^2].
pub fn poynting_z(e: &[Complex64; 3], h: &[Complex64; 3]) -> f64 {
    0.5 * (e[0] * h[1].conj() - e[1] * h[0].conj()).re
}

/// Analytic carried power of a hybrid mode, P = |A|^2 pi (D_in + D_out).
///
/// The closed forms integrate the axial Poynting flux over each region:
///
/// D_in  =  a^2 beta^3 / (4 mu0 omega h^2) *
///          [ (1+sl)(N1^2+sl)(J_{l+1}^2 - J_l J_{l+2})
///          + (1-sl)(N1^2-sl)(J_{l-1}^2 - J_l J_{l-2}) ]   (at ha)
///
/// D_out = -a^2 beta^3 / (4 mu0 omega q^2) * (J_l(ha)/K_l(qa))^2 *
///          [ (1+sl)(N2^2+sl)(K_{l+1}^2 - K_l K_{l+2})
///          + (1-sl)(N2^2-sl)(K_{l-1}^2 - K_l K_{l-2}) ]   (at qa)
///
/// with N_i = n_i k / beta. The K cross terms are negative, so the leading
/// minus sign makes D_out positive. TE/TM modes are rejected; they are
/// normalized by quadrature instead (see [`normalize_any`]).
pub fn power_analytic(sol: &ModeSolution) -> Result<f64> {
    if !sol.is_hybrid() {
        return Err(Error::Domain(format!(
            "analytic power formulas cover HE/EH modes only, got {}",
            sol.mode
        )));
    }
    let (din, dout) = d_in_out(sol);
    Ok(sol.a_const.norm_sqr() * std::f64::consts::PI * (din + dout))
}

/// The (D_in, D_out) pair of the analytic power normalization.
pub fn d_in_out(sol: &ModeSolution) -> (f64, f64) {
    let fiber = &sol.fiber;
    let a = fiber.radius_a;
    let l = sol.mode.l as i32;
    let lf = sol.mode.l as f64;
    // the closed forms are written in the plus-rotation convention; the
    // stored s carries the rotation sign, which must be stripped here or
    // the (1 +- s l) pairings swap and the power loses invariance
    let s = sol.s_param * sol.mode.rotation.sign();
    let beta = sol.beta_prop;
    let omega = fiber.omega();
    let k = fiber.k();
    let (ha, qa) = (sol.h * a, sol.q * a);
    let n1_sq = (fiber.n_core * k / beta).powi(2);
    let n2_sq = (fiber.n_clad * k / beta).powi(2);

    let j = |n: i32| crate::bessel::bessel_j_signed(n, ha);
    let jl = j(l);
    let cross_p = j(l + 1) * j(l + 1) - jl * j(l + 2);
    let cross_m = j(l - 1) * j(l - 1) - jl * j(l - 2);
    let din = a * a * beta.powi(3) / (4.0 * constants::MU0 * omega * sol.h * sol.h)
        * ((1.0 + s * lf) * (n1_sq + s * lf) * cross_p
            + (1.0 - s * lf) * (n1_sq - s * lf) * cross_m);

    // scaled K's: the exp factors cancel inside the ratio to K_l^2
    let ks = |n: i32| bessel_k_scaled(n.unsigned_abs(), qa);
    let kl = ks(l);
    let kcross_p = (ks(l + 1) * ks(l + 1) - kl * ks(l + 2)) / (kl * kl);
    let kcross_m = (ks(l - 1) * ks(l - 1) - kl * ks(l - 2)) / (kl * kl);
    let dout = -(a * a * beta.powi(3)) / (4.0 * constants::MU0 * omega * sol.q * sol.q)
        * jl
        * jl
        * ((1.0 + s * lf) * (n2_sq + s * lf) * kcross_p
            + (1.0 - s * lf) * (n2_sq - s * lf) * kcross_m);
    (din, dout)
}

/// Carried power by direct quadrature of the axial Poynting flux.
///
/// For a single-rotation mode the flux is azimuthally uniform, so this is
/// a radial integral times 2 pi; panels follow the exterior decay scale.
pub fn power_quadrature(sol: &ModeSolution) -> f64 {
    let a = sol.fiber.radius_a;
    let q = sol.q;
    let flux = |r: f64| {
        let (e, h) = profile_at(sol, r, 0.0);
        poynting_z(&e, &h) * r
    };
    let (nodes, weights) = gauss_legendre_32();
    let mut total = 0.0;
    let interior = [0.0, 0.25 * a, 0.5 * a, 0.75 * a, a];
    let exterior = [a, a + 1.0 / q, a + 4.0 / q, a + 10.0 / q, a + 23.0 / q];
    for breaks in [interior, exterior] {
        for w in breaks.windows(2) {
            let c = 0.5 * (w[1] - w[0]);
            let m = 0.5 * (w[1] + w[0]);
            let mut acc = 0.0;
            for (x, wt) in nodes.iter().zip(weights.iter()) {
                acc += wt * flux(m + c * x);
            }
            total += acc * c;
        }
    }
    2.0 * std::f64::consts::PI * total
}

/// Rescale a hybrid mode so it carries `power` watts, using the analytic
/// P = A^2 pi (D_in + D_out) normalization. Rejects TE/TM modes, whose
/// closed forms are not covered; use [`normalize_any`] for those.
pub fn normalize_to_power(sol: &ModeSolution, power: f64) -> Result<ModeSolution> {
    if power < 0.0 {
        return Err(Error::InvalidInput(format!("negative power {power}")));
    }
    let p_now = power_analytic(sol)?;
    if !(p_now > 0.0) {
        return Err(Error::Solver(format!(
            "non-positive analytic power {p_now} for {}",
            sol.mode
        )));
    }
    let mut out = sol.scaled((power / p_now).sqrt());
    out.power = power;
    Ok(out)
}

/// Rescale any mode to carry `power` watts: analytic route for hybrid
/// modes, Poynting quadrature for TE/TM.
pub fn normalize_any(sol: &ModeSolution, power: f64) -> Result<ModeSolution> {
    if sol.is_hybrid() {
        normalize_to_power(sol, power)
    } else {
        if power < 0.0 {
            return Err(Error::InvalidInput(format!("negative power {power}")));
        }
        let p_now = power_quadrature(sol);
        if !(p_now > 0.0) {
            return Err(Error::Solver(format!(
                "non-positive quadrature power {p_now} for {}",
                sol.mode
            )));
        }
        let mut out = sol.scaled((power / p_now).sqrt());
        out.power = power;
        Ok(out)
    }
}

/// Sign choice of the quasilinear superposition (E_+ +- E_-)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiSign {
    Plus,
    Minus,
}

/// Quasilinear superposition of the two rotations of one hybrid mode.
///
/// The `Plus` combination has its transverse major axis along phi = 0, the
/// `Minus` combination along phi = pi/2; the two are orthogonal patterns.
/// Carried power equals the power of either constituent.
#[derive(Debug, Clone)]
pub struct QuasilinearMode {
    pub plus: ModeSolution,
    pub minus: ModeSolution,
    pub sign: QuasiSign,
}

/// Build the quasilinear evaluator from the two rotations of one mode at
/// equal power.
pub fn quasilinear(
    plus: ModeSolution,
    minus: ModeSolution,
    sign: QuasiSign,
) -> Result<QuasilinearMode> {
    if !(plus.mode.rotation == Rotation::Plus && minus.mode.rotation == Rotation::Minus) {
        return Err(Error::ModeMismatch(
            "arguments must be the plus and minus rotations, in that order".into(),
        ));
    }
    if !plus.mode.same_branch(&minus.mode) {
        return Err(Error::ModeMismatch(format!(
            "{} and {} are different modes",
            plus.mode, minus.mode
        )));
    }
    let rel = (plus.power - minus.power).abs() / plus.power.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-9 {
        return Err(Error::ModeMismatch(format!(
            "rotations carry different powers ({} vs {} W)",
            plus.power, minus.power
        )));
    }
    Ok(QuasilinearMode { plus, minus, sign })
}

impl QuasilinearMode {
    /// Carried power [W] (equal to either constituent's).
    pub fn power(&self) -> f64 {
        self.plus.power
    }

    pub fn fiber(&self) -> &FiberSpec {
        &self.plus.fiber
    }

    pub fn beta(&self) -> f64 {
        self.plus.beta_prop
    }

    /// Complex fields of the superposition.
    pub fn fields_at(
        &self,
        sense: PropagationSense,
        r: f64,
        phi: f64,
        z: f64,
        t: f64,
    ) -> ([Complex64; 3], [Complex64; 3]) {
        let (ep, hp) = fields_at(&self.plus, sense, r, phi, z, t);
        let (em, hm) = fields_at(&self.minus, sense, r, phi, z, t);
        let s = match self.sign {
            QuasiSign::Plus => 1.0,
            QuasiSign::Minus => -1.0,
        };
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut e = [Complex64::ZERO; 3];
        let mut h = [Complex64::ZERO; 3];
        for i in 0..3 {
            e[i] = (ep[i] + s * em[i]) * inv;
            h[i] = (hp[i] + s * hm[i]) * inv;
        }
        (e, h)
    }

    /// Field sample (convenience wrapper).
    pub fn sample(&self, sense: PropagationSense, r: f64, phi: f64, z: f64, t: f64) -> FieldSample {
        let (e, h) = self.fields_at(sense, r, phi, z, t);
        FieldSample {
            position: (r, phi, z),
            e,
            h,
        }
    }
}

/// Phase offset arg(E_z) - arg(E_major_transverse), folded to (-pi, pi].
///
/// For a quasilinear mode sampled on its polarization plane the contract is
/// +- pi/2, with the sign flipping under propagation reversal. Undefined
/// (domain error) where E_z vanishes.
pub fn longitudinal_phase_check(sample: &FieldSample) -> Result<f64> {
    let e = &sample.e;
    let mag = (e[0].norm_sqr() + e[1].norm_sqr() + e[2].norm_sqr()).sqrt();
    if e[2].norm() < 1e-12 * mag || mag == 0.0 {
        return Err(Error::Domain(format!(
            "E_z vanishes at {:?}; phase undefined",
            sample.position
        )));
    }
    let major = if e[0].norm() >= e[1].norm() { e[0] } else { e[1] };
    if major.norm() < 1e-12 * mag {
        return Err(Error::Domain(format!(
            "transverse field vanishes at {:?}; phase undefined",
            sample.position
        )));
    }
    let mut d = e[2].arg() - major.arg();
    while d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    }
    while d <= -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    Ok(d)
}

/// Exterior component magnitude vs the far-field form c_i r^{-1/2} e^{-qr},
/// with c_i fitted once at the anchor r = a + lambda/2.
///
/// `component`: 0 = radial, 1 = azimuthal, 2 = longitudinal.
/// Returns (exact, approx) at radius r.
pub fn evanescent_approximation(
    sol: &ModeSolution,
    component: usize,
    r: f64,
) -> Result<(f64, f64)> {
    if component > 2 {
        return Err(Error::InvalidInput(format!(
            "component index {component} out of range 0..=2"
        )));
    }
    let a = sol.fiber.radius_a;
    if r <= a {
        return Err(Error::Domain(format!(
            "evanescent comparison needs r > a, got r = {r}"
        )));
    }
    let q = sol.q;
    let anchor = a + 0.5 * sol.fiber.wavelength;
    let (e0, _) = profile_at(sol, anchor, 0.0);
    let c_i = e0[component].norm() * anchor.sqrt() * (q * anchor).exp();
    let (e, _) = profile_at(sol, r, 0.0);
    let exact = e[component].norm();
    let approx = c_i / r.sqrt() * (-q * r).exp();
    Ok((exact, approx))
}
