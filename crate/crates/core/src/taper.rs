//! Heat-and-pull trajectory planning and flame-brush simulation.
//!
//! Target tapers are linear (fixed angle) from the unpulled fiber down to a
//! handoff radius, exponential from there to the waist, then a uniform
//! waist. The pull is discretized into steps of (velocity, flame travel,
//! duration); within one step the effective hot zone (flame travel plus
//! the nozzle width) stretches by the pulled length and thins by glass
//! volume conservation, `r -> r sqrt(L/(L + dL))`. The planner runs the
//! recursion backward from the waist: each step's hot zone is sized so the
//! material it leaves behind freezes into the next staircase segment of
//! the target profile.
//!
//! The forward simulator applies the same kinematics step by step and is
//! the verification oracle for the planner (round-trip testing).

use crate::error::Error;
use crate::fiber::{FiberSpec, ModeId};
use crate::modesolver::solve_neff;
use crate::Result;

/// Default symmetric pull speed per motor [m/s].
pub const DEFAULT_PULL_VELOCITY: f64 = 1e-4;

/// Piecewise taper profile: uniform waist, exponential neck, linear taper.
///
/// `radius_at` takes the one-sided coordinate `zeta` measured from the
/// edge of the uniform waist toward the unpulled fiber; the full fiber is
/// mirror-symmetric about the waist center.
#[derive(Debug, Clone, Copy)]
pub struct TaperProfile {
    /// Unpulled fiber radius [m].
    pub initial_radius: f64,
    /// Linear-taper angle Omega [rad].
    pub linear_angle: f64,
    /// Linear-to-exponential transition radius [m].
    pub handoff_radius: f64,
    /// Waist radius [m].
    pub waist_radius: f64,
    /// Uniform waist length [m].
    pub waist_length: f64,
}

impl TaperProfile {
    pub fn new(
        initial_radius: f64,
        linear_angle: f64,
        handoff_radius: f64,
        waist_radius: f64,
        waist_length: f64,
    ) -> Result<Self> {
        if !(waist_radius > 0.0 && waist_length > 0.0 && linear_angle > 0.0) {
            return Err(Error::InvalidInput(
                "waist radius, waist length and angle must be positive".into(),
            ));
        }
        if !(waist_radius <= handoff_radius && handoff_radius <= initial_radius) {
            return Err(Error::InvalidInput(format!(
                "need waist <= handoff <= initial radius, got {waist_radius} / {handoff_radius} / {initial_radius}"
            )));
        }
        Ok(TaperProfile {
            initial_radius,
            linear_angle,
            handoff_radius,
            waist_radius,
            waist_length,
        })
    }

    /// Non-fatal geometry warnings (angle outside the usual 0.3-5 mrad
    /// fabrication window).
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.linear_angle < 0.3e-3 || self.linear_angle > 5e-3 {
            w.push(format!(
                "linear taper angle {:.3} mrad outside the usual 0.3-5 mrad window",
                self.linear_angle * 1e3
            ));
        }
        w
    }

    /// Exponential decay length: slope continuity at the handoff gives
    /// z_e = handoff_radius / angle.
    pub fn exponential_scale(&self) -> f64 {
        self.handoff_radius / self.linear_angle
    }

    /// One-sided length of the exponential section [m].
    pub fn exponential_length(&self) -> f64 {
        self.exponential_scale() * (self.handoff_radius / self.waist_radius).ln()
    }

    /// One-sided length of the linear section [m].
    pub fn linear_length(&self) -> f64 {
        (self.initial_radius - self.handoff_radius) / self.linear_angle
    }

    /// Radius at one-sided coordinate zeta (0 at the waist edge).
    pub fn radius_at(&self, zeta: f64) -> f64 {
        if zeta <= 0.0 {
            return self.waist_radius;
        }
        let z_exp = self.exponential_length();
        if zeta <= z_exp {
            return self.waist_radius * (zeta / self.exponential_scale()).exp();
        }
        let lin = self.handoff_radius + self.linear_angle * (zeta - z_exp);
        lin.min(self.initial_radius)
    }

    /// One-sided coordinate where the taper reaches `radius`
    /// (inverse of `radius_at` on the tapered section).
    pub fn zeta_at_radius(&self, radius: f64) -> f64 {
        if radius <= self.waist_radius {
            return 0.0;
        }
        if radius <= self.handoff_radius {
            return self.exponential_scale() * (radius / self.waist_radius).ln();
        }
        self.exponential_length()
            + (radius.min(self.initial_radius) - self.handoff_radius) / self.linear_angle
    }
}

/// One pull step.
#[derive(Debug, Clone, Copy)]
pub struct PullStep {
    /// Pull velocity of each motor [m/s].
    pub velocity: f64,
    /// Flame travel length during the step [m].
    pub flame_travel: f64,
    /// Step duration [s].
    pub duration: f64,
}

impl PullStep {
    /// Total elongation produced by the step (two motors) [m].
    pub fn elongation(&self) -> f64 {
        2.0 * self.velocity * self.duration
    }

    /// Effective hot-zone width given the nozzle width [m].
    pub fn hot_zone(&self, nozzle: f64) -> f64 {
        self.flame_travel + nozzle
    }
}

/// Motor-step schedule realizing a target taper.
#[derive(Debug, Clone)]
pub struct PullPlan {
    /// Steps in forward execution order.
    pub steps: Vec<PullStep>,
    /// Nozzle contribution to the effective hot zone [m].
    pub hot_zone_width: f64,
    /// The taper this plan was computed for.
    pub predicted_profile: TaperProfile,
}

impl PullPlan {
    /// Total elongation of the whole plan [m].
    pub fn total_elongation(&self) -> f64 {
        self.steps.iter().map(|s| s.elongation()).sum()
    }
}

/// Compute the motor trajectory realizing `target`, recursing backward
/// from the waist. `hot_zone_width` is the nozzle (zero-travel) hot zone.
pub fn plan_pull(target: &TaperProfile, hot_zone_width: f64) -> Result<PullPlan> {
    plan_pull_with_velocity(target, hot_zone_width, DEFAULT_PULL_VELOCITY)
}

pub fn plan_pull_with_velocity(
    target: &TaperProfile,
    hot_zone_width: f64,
    velocity: f64,
) -> Result<PullPlan> {
    if !(hot_zone_width > 0.0) {
        return Err(Error::InvalidInput("hot zone width must be positive".into()));
    }
    if !(velocity > 0.0) {
        return Err(Error::InvalidInput("pull velocity must be positive".into()));
    }
    if target.waist_radius == target.initial_radius {
        // nothing to pull
        return Ok(PullPlan {
            steps: Vec::new(),
            hot_zone_width,
            predicted_profile: *target,
        });
    }

    // staircase radii, geometric so each step thins by the same small ratio:
    // the simulated staircase then stays within the per-step ratio of the
    // smooth target everywhere (and adjacent-sample jumps stay below 1e-3)
    let ratio_budget: f64 = 1.001;
    let total_ratio = target.initial_radius / target.waist_radius;
    let n_steps = (total_ratio.ln() / ratio_budget.ln()).ceil().max(2.0) as usize;
    let mut radii = Vec::with_capacity(n_steps + 1);
    for i in 0..=n_steps {
        radii.push(
            target.initial_radius
                * (target.waist_radius / target.initial_radius).powf(i as f64 / n_steps as f64),
        );
    }

    // one-sided frozen segment lengths between consecutive staircase radii
    let seg_len: Vec<f64> = (1..n_steps)
        .map(|i| target.zeta_at_radius(radii[i - 1]) - target.zeta_at_radius(radii[i]))
        .collect();

    // backward recursion for the hot-zone widths:
    //   L_N (1/f_N^2) = waist length, L_i = (L_{i+1} + 2 s_i) f_i^2
    // where f_i = rho_i / rho_{i-1} is the per-step thinning factor
    let f2 = |i: usize| (radii[i] / radii[i - 1]).powi(2);
    let mut zones = vec![0.0; n_steps + 1]; // 1-indexed
    zones[n_steps] = target.waist_length * f2(n_steps);
    for i in (1..n_steps).rev() {
        zones[i] = (zones[i + 1] + 2.0 * seg_len[i - 1]) * f2(i);
    }

    let mut steps = Vec::with_capacity(n_steps);
    for i in 1..=n_steps {
        let travel = zones[i] - hot_zone_width;
        if travel < 0.0 {
            return Err(Error::Infeasible(format!(
                "step {i} (radius {:.4e} -> {:.4e} m) needs hot zone {:.4e} m, \
                 smaller than the nozzle width {hot_zone_width:.4e} m (negative sweep)",
                radii[i - 1],
                radii[i],
                zones[i]
            )));
        }
        let elong = zones[i] * (1.0 / f2(i) - 1.0);
        steps.push(PullStep {
            velocity,
            flame_travel: travel,
            duration: elong / (2.0 * velocity),
        });
    }
    Ok(PullPlan {
        steps,
        hot_zone_width,
        predicted_profile: *target,
    })
}

/// Piecewise-constant radius profile, symmetric about z = 0.
#[derive(Debug, Clone)]
pub struct RadiusProfile {
    /// One-sided segments (length, radius) from the center outward; the
    /// profile continues at `outer_radius` beyond them.
    pub segments: Vec<(f64, f64)>,
    pub outer_radius: f64,
}

impl RadiusProfile {
    fn uniform(radius: f64) -> Self {
        RadiusProfile {
            segments: Vec::new(),
            outer_radius: radius,
        }
    }

    /// Radius at one-sided coordinate |z| from the center.
    pub fn radius_at(&self, z_abs: f64) -> f64 {
        let mut acc = 0.0;
        for &(len, r) in &self.segments {
            acc += len;
            if z_abs <= acc {
                return r;
            }
        }
        self.outer_radius
    }

    /// One-sided extent of the tracked (pulled) region [m].
    pub fn tracked_length(&self) -> f64 {
        self.segments.iter().map(|s| s.0).sum()
    }

    /// Glass volume in the tracked region plus a margin of unpulled fiber,
    /// one-sided [m^3].
    pub fn volume(&self, margin: f64) -> f64 {
        let mut v = 0.0;
        for &(len, r) in &self.segments {
            v += std::f64::consts::PI * r * r * len;
        }
        v + std::f64::consts::PI * self.outer_radius * self.outer_radius * margin
    }

    /// Sampled (z, r) pairs over the full symmetric profile.
    pub fn sampled(&self, points_per_side: usize) -> Vec<(f64, f64)> {
        let half = self.tracked_length() * 1.05;
        let mut out = Vec::with_capacity(2 * points_per_side + 1);
        for i in 0..=(2 * points_per_side) {
            let z = -half + 2.0 * half * i as f64 / (2 * points_per_side) as f64;
            out.push((z, self.radius_at(z.abs())));
        }
        out
    }
}

/// Forward flame-brush simulation of a pull plan.
///
/// State evolves step by step: the hot zone (centered on the waist)
/// stretches by the pulled length, thins by volume conservation, and the
/// material that the next, narrower hot zone leaves out freezes in place.
pub fn simulate_pull(plan: &PullPlan, initial_radius: f64) -> Result<RadiusProfile> {
    if !(initial_radius > 0.0) {
        return Err(Error::InvalidInput("initial radius must be positive".into()));
    }
    let mut profile = RadiusProfile::uniform(initial_radius);
    let mut state: Option<(f64, f64)> = None; // current (hot length, radius)

    for (i, step) in plan.steps.iter().enumerate() {
        if !(step.velocity > 0.0 && step.duration > 0.0) {
            return Err(Error::InvalidInput(format!(
                "step {i} has non-positive velocity or duration"
            )));
        }
        let zone = step.hot_zone(plan.hot_zone_width);
        let elong = step.elongation();
        // material entering this step's hot zone
        let (cur_len, cur_r) = match state {
            None => (zone, initial_radius),
            Some((len, r)) => {
                if zone > len + 1e-15 {
                    return Err(Error::Infeasible(format!(
                        "step {i} hot zone {zone:.4e} m reaches outside the previously \
                         pulled region ({len:.4e} m); plan is inconsistent"
                    )));
                }
                // freeze the flanks left outside the new hot zone
                let frozen = 0.5 * (len - zone);
                if frozen > 0.0 {
                    profile.segments.insert(0, (frozen, r));
                }
                (zone, r)
            }
        };
        let factor = (cur_len / (cur_len + elong)).sqrt();
        state = Some((cur_len + elong, cur_r * factor));
    }
    if let Some((len, r)) = state {
        profile.segments.insert(0, (0.5 * len, r));
    }
    Ok(profile)
}

/// Interpolation table of the propagation-constant difference of a mode
/// pair versus fiber radius (log-spaced). Radii where either mode is cut
/// off carry `dbeta = 0`, which freezes the accumulated beat phase there.
#[derive(Debug, Clone)]
pub struct BeatTable {
    pub radii: Vec<f64>,
    pub dbeta: Vec<f64>,
}

impl BeatTable {
    /// Build the table by solving the pair across [r_min, r_max].
    pub fn build(
        template: &FiberSpec,
        pair: (&ModeId, &ModeId),
        r_min: f64,
        r_max: f64,
        samples: usize,
    ) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && samples >= 8) {
            return Err(Error::InvalidInput("bad beat-table range".into()));
        }
        let mut radii = Vec::with_capacity(samples);
        let mut dbeta = Vec::with_capacity(samples);
        for i in 0..samples {
            let r = r_min * (r_max / r_min).powf(i as f64 / (samples - 1) as f64);
            let fiber = template.at_radius(r)?;
            let k = fiber.k();
            let value = match (solve_neff(&fiber, pair.0), solve_neff(&fiber, pair.1)) {
                (Ok(n0), Ok(n1)) => (n0 - n1).abs() * k,
                _ => 0.0,
            };
            radii.push(r);
            dbeta.push(value);
        }
        Ok(BeatTable { radii, dbeta })
    }

    /// Linear interpolation in radius; zero outside the table.
    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.radii[0] {
            return if (r / self.radii[0]) > 0.999 {
                self.dbeta[0]
            } else {
                0.0
            };
        }
        if r >= *self.radii.last().unwrap() {
            return *self.dbeta.last().unwrap();
        }
        let idx = self.radii.partition_point(|&x| x < r).max(1);
        let (r0, r1) = (self.radii[idx - 1], self.radii[idx]);
        let t = (r - r0) / (r1 - r0);
        self.dbeta[idx - 1] * (1.0 - t) + self.dbeta[idx] * t
    }
}

/// Synthetic two-mode transmission trace of a pull.
#[derive(Debug, Clone)]
pub struct TransmissionSignal {
    /// Elongation samples [m].
    pub elongation: Vec<f64>,
    /// Normalized transmitted power at each sample.
    pub transmission: Vec<f64>,
    /// Instantaneous spatial beat frequency d(phase)/(2 pi ds) [cycles/m],
    /// the generating law the spectrogram ridge should track.
    pub instantaneous_frequency: Vec<f64>,
    /// Waist radius at each sample [m].
    pub waist_radius: Vec<f64>,
}

/// Generate the two-mode interference transmission signal of a pull:
/// `T(s) = 1 - 4 eta (1 - eta) sin^2(delta_phi(s)/2)` with
/// `delta_phi(s) = int dbeta(r(z, s)) dz` along the evolving profile and a
/// parasitic coupling fraction `eta` (a free synthetic-data parameter).
pub fn transmission_signal(
    plan: &PullPlan,
    initial_radius: f64,
    beat: &BeatTable,
    eta: f64,
    sample_spacing: f64,
) -> Result<TransmissionSignal> {
    if !(0.0..=0.5).contains(&eta) {
        return Err(Error::InvalidInput(format!(
            "coupling fraction eta must be in [0, 0.5], got {eta}"
        )));
    }
    if !(sample_spacing > 0.0) {
        return Err(Error::InvalidInput("sample spacing must be positive".into()));
    }

    // walk the plan continuously in elongation; maintain the same state as
    // simulate_pull plus the frozen-flank phase contribution
    let mut elong_points = Vec::new();
    let mut trans = Vec::new();
    let mut waist = Vec::new();
    let mut phases = Vec::new();

    let mut frozen_phase = 0.0; // 2 * sum over frozen one-sided segments
    let mut state: Option<(f64, f64)> = None;
    let mut s_total = 0.0;
    let mut next_sample = 0.0;

    for step in &plan.steps {
        let zone = step.hot_zone(plan.hot_zone_width);
        let elong = step.elongation();
        let (len0, r0) = match state {
            None => (zone, initial_radius),
            Some((len, r)) => {
                let frozen = 0.5 * (len - zone);
                if frozen > 0.0 {
                    frozen_phase += 2.0 * frozen * beat.eval(r);
                }
                (zone, r)
            }
        };
        // within the step, elongation x in [0, elong]:
        // hot length len0 + x, radius r0 sqrt(len0/(len0+x))
        let mut x = next_sample - s_total;
        while x <= elong {
            let hot_len = len0 + x;
            let r_w = r0 * (len0 / hot_len).sqrt();
            let phase = frozen_phase + hot_len * beat.eval(r_w);
            elong_points.push(s_total + x);
            phases.push(phase);
            waist.push(r_w);
            trans.push(1.0 - 4.0 * eta * (1.0 - eta) * (0.5 * phase).sin().powi(2));
            next_sample += sample_spacing;
            x += sample_spacing;
        }
        state = Some((len0 + elong, r0 * (len0 / (len0 + elong)).sqrt()));
        s_total += elong;
    }

    // central-difference instantaneous frequency of the accumulated phase
    let n = elong_points.len();
    if n < 3 {
        return Err(Error::SignalTooShort(
            "fewer than 3 transmission samples; reduce sample spacing".into(),
        ));
    }
    let mut freq = vec![0.0; n];
    for i in 0..n {
        let (i0, i1) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        freq[i] = (phases[i1] - phases[i0])
            / (elong_points[i1] - elong_points[i0])
            / (2.0 * std::f64::consts::PI);
    }
    Ok(TransmissionSignal {
        elongation: elong_points,
        transmission: trans,
        instantaneous_frequency: freq,
        waist_radius: waist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_target() -> TaperProfile {
        // 2 mrad linear to 6 um, exponential to 250 nm, 5 mm waist
        TaperProfile::new(62.5e-6, 2e-3, 6e-6, 250e-9, 5e-3).unwrap()
    }

    #[test]
    fn profile_geometry() {
        let t = reference_target();
        assert!(t.warnings().is_empty());
        // linear section length (62.5 - 6) um / 2 mrad = 28.25 mm
        assert!((t.linear_length() - 28.25e-3).abs() < 1e-9);
        // monotone non-increasing toward the waist
        let mut last = f64::INFINITY;
        for i in 0..200 {
            let zeta = 40e-3 * (200 - i) as f64 / 200.0;
            let r = t.radius_at(zeta);
            assert!(r <= last + 1e-18);
            last = r;
        }
        // continuity at the handoff
        let ze = t.exponential_length();
        assert!((t.radius_at(ze - 1e-9) - t.radius_at(ze + 1e-9)).abs() < 1e-11);
        // inverse
        for &r in &[300e-9, 1e-6, 6e-6, 20e-6] {
            assert!((t.radius_at(t.zeta_at_radius(r)) - r).abs() < 1e-12);
        }
        // warning outside the angle window
        let steep = TaperProfile::new(62.5e-6, 8e-3, 6e-6, 250e-9, 5e-3).unwrap();
        assert_eq!(steep.warnings().len(), 1);
    }

    #[test]
    fn plan_exists_for_reference_target() {
        let plan = plan_pull(&reference_target(), 1e-3).unwrap();
        assert!(!plan.steps.is_empty());
        for s in &plan.steps {
            assert!(s.velocity > 0.0 && s.duration > 0.0 && s.flame_travel >= 0.0);
        }
        // deterministic
        let plan2 = plan_pull(&reference_target(), 1e-3).unwrap();
        assert_eq!(plan.steps.len(), plan2.steps.len());
        assert_eq!(plan.total_elongation(), plan2.total_elongation());
    }

    #[test]
    fn degenerate_plan_is_empty() {
        let t = TaperProfile::new(62.5e-6, 2e-3, 62.5e-6, 62.5e-6, 5e-3).unwrap();
        let plan = plan_pull(&t, 1e-3).unwrap();
        assert!(plan.steps.is_empty());
    }

    #[test]
    fn round_trip_reproduces_target() {
        let target = reference_target();
        let plan = plan_pull(&target, 1e-3).unwrap();
        let profile = simulate_pull(&plan, target.initial_radius).unwrap();
        // compare the staircase against the smooth target everywhere on the
        // tapered region, 1% relative
        let total = profile.tracked_length();
        let waist_half = 0.5 * target.waist_length;
        let mut worst: f64 = 0.0;
        for i in 0..4000 {
            let z = total * i as f64 / 4000.0;
            let r_sim = profile.radius_at(z);
            let zeta = z - waist_half;
            let r_tgt = target.radius_at(zeta.max(0.0));
            worst = worst.max((r_sim - r_tgt).abs() / r_tgt);
        }
        assert!(worst < 0.01, "radius error {worst}");
        // waist region is uniform at the waist radius
        assert!((profile.radius_at(0.0) - target.waist_radius).abs() < 1e-2 * target.waist_radius);
        assert!(
            (profile.radius_at(0.9 * waist_half) - target.waist_radius).abs()
                < 1e-2 * target.waist_radius
        );
    }

    #[test]
    fn volume_is_conserved() {
        let target = reference_target();
        let plan = plan_pull(&target, 1e-3).unwrap();
        let profile = simulate_pull(&plan, target.initial_radius).unwrap();
        // the pulled region came from a shorter piece of unpulled fiber:
        // tracked length minus total elongation / 2 per side
        let tracked = profile.tracked_length();
        let original_len = tracked - 0.5 * plan.total_elongation();
        let v_now = profile.volume(0.0);
        let v_before = std::f64::consts::PI * target.initial_radius.powi(2) * original_len;
        assert!(
            ((v_now - v_before) / v_before).abs() < 1e-6,
            "volume drift {}",
            (v_now - v_before) / v_before
        );
    }

    #[test]
    fn single_step_pure_exponential_thinning() {
        // constant hot zone, no flame travel: the continuous limit is
        // r = r0 exp(-x / 2L); the n-step discretization converges to it
        // with ln-error ~ (x/L)^2 / (2n)
        let zone = 2e-3;
        let r0 = 10e-6;
        let elong = 4e-3;
        let n = 512;
        let steps: Vec<PullStep> = (0..n)
            .map(|_| PullStep {
                velocity: 1e-4,
                flame_travel: 0.0,
                duration: elong / n as f64 / 2e-4,
            })
            .collect();
        let plan = PullPlan {
            steps,
            hot_zone_width: zone,
            predicted_profile: TaperProfile::new(r0, 1e-3, r0, r0 * 0.1, zone).unwrap(),
        };
        let profile = simulate_pull(&plan, r0).unwrap();
        let r_waist = profile.radius_at(0.0);
        let expect = r0 * (-elong / (2.0 * zone)).exp();
        assert!(
            ((r_waist - expect) / expect).abs() < 5e-3,
            "waist {r_waist} vs exponential {expect}"
        );
    }

    #[test]
    fn elongation_kinematics() {
        let step = PullStep {
            velocity: 1.5e-4,
            flame_travel: 0.5e-3,
            duration: 10.0,
        };
        assert!((step.elongation() - 2.0 * 1.5e-4 * 10.0).abs() < 1e-18);
        assert!((step.hot_zone(1e-3) - 1.5e-3).abs() < 1e-18);
    }

    #[test]
    fn longer_waist_needs_more_elongation() {
        let short = TaperProfile::new(62.5e-6, 2e-3, 6e-6, 250e-9, 3e-3).unwrap();
        let long = TaperProfile::new(62.5e-6, 2e-3, 6e-6, 250e-9, 8e-3).unwrap();
        let e_short = plan_pull(&short, 1e-3).unwrap().total_elongation();
        let e_long = plan_pull(&long, 1e-3).unwrap().total_elongation();
        assert!(e_long > e_short);
    }

    #[test]
    fn infeasible_when_nozzle_exceeds_final_zone() {
        // the last zones shrink toward f^2 * waist length: a huge nozzle
        // forces a negative sweep
        let t = TaperProfile::new(62.5e-6, 2e-3, 6e-6, 250e-9, 0.2e-3).unwrap();
        match plan_pull(&t, 5e-3) {
            Err(Error::Infeasible(msg)) => assert!(msg.contains("negative sweep")),
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn simulated_profile_is_staircase_continuous() {
        let target = reference_target();
        let plan = plan_pull(&target, 1e-3).unwrap();
        let profile = simulate_pull(&plan, target.initial_radius).unwrap();
        // every staircase step is below the 1e-3 relative budget
        for w in profile.segments.windows(2) {
            let jump = (w[1].1 - w[0].1).abs() / w[0].1;
            assert!(jump < 1.2e-3, "segment jump {jump}");
        }
        // and adjacent samples taken finer than the shortest segment see
        // at most one step each
        let min_seg = profile
            .segments
            .iter()
            .map(|s| s.0)
            .fold(f64::INFINITY, f64::min);
        let n = (profile.tracked_length() * 1.05 / min_seg).ceil() as usize + 1;
        let samples = profile.sampled(n);
        for w in samples.windows(2) {
            let jump = (w[1].1 - w[0].1).abs() / w[0].1;
            assert!(jump < 1.2e-3, "radius jump {jump}");
        }
    }
}
