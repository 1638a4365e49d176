//! Guided-mode eigenvalue problem of the two-layer step-index cylinder.
//!
//! The characteristic equation is solved per azimuthal order `l` and per
//! `+R`/`-R` branch by scanning the open interval `n_clad < n_eff < n_core`,
//! bracketing sign changes, and refining each bracket with bisection plus a
//! secant polish. The residual has poles (zeros of `J_l(ha)`) interleaved
//! with its roots, so the scan grid carries extra points hugging each pole
//! and logarithmic fans at both interval edges where near-cutoff roots pile
//! up; brackets whose refined point still has a large residual are rejected
//! as pole crossings.
//!
//! Branch labeling: for `l >= 1` the `-R` branch holds the `HE` modes and
//! `+R` the `EH` modes. For `l = 0` the same algebra reduces to the TE
//! characteristic equation on `+R` and the TM one on `-R` (the reduction is
//! exercised in the tests), which fixes the TE/TM labeling convention.

use crate::bessel::{bessel_j, bessel_j_prime, bessel_j_signed, bessel_k_scaled};
use crate::constants;
use crate::error::Error;
use crate::fiber::{FiberSpec, ModeFamily, ModeId, ModeSolution, Rotation};
use crate::numerics::{bisect, secant_polish};
use crate::Result;
use num_complex::Complex64;

/// Eigenvalue-equation branch: the sign in front of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    PlusR,
    MinusR,
}

impl Branch {
    /// Mode family this branch produces at azimuthal order `l`.
    pub fn family(&self, l: u32) -> ModeFamily {
        match (self, l) {
            (Branch::PlusR, 0) => ModeFamily::TE,
            (Branch::MinusR, 0) => ModeFamily::TM,
            (Branch::PlusR, _) => ModeFamily::EH,
            (Branch::MinusR, _) => ModeFamily::HE,
        }
    }

    pub fn for_family(family: ModeFamily) -> Branch {
        match family {
            ModeFamily::TE | ModeFamily::EH => Branch::PlusR,
            ModeFamily::TM | ModeFamily::HE => Branch::MinusR,
        }
    }

    fn sign(&self) -> f64 {
        match self {
            Branch::PlusR => 1.0,
            Branch::MinusR => -1.0,
        }
    }
}

/// A scan bracket whose refinement did not converge to a root.
#[derive(Debug, Clone)]
pub struct UnconvergedBracket {
    pub l: u32,
    pub branch: Branch,
    pub n_eff_lo: f64,
    pub n_eff_hi: f64,
    pub reason: String,
}

/// Output of [`solve_modes`]: every guided mode found, plus any bracket the
/// refinement could not resolve (never silently dropped).
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub modes: Vec<ModeSolution>,
    pub unconverged: Vec<UnconvergedBracket>,
}

/// Normalized frequency V of the waveguide.
pub fn v_number(fiber: &FiberSpec) -> f64 {
    fiber.v_number()
}

/// Characteristic-equation residual (LHS minus RHS) at a trial effective
/// index. Zero crossings away from the `J_l(ha)` poles are guided modes.
pub fn eigen_residual(fiber: &FiberSpec, l: u32, branch: Branch, n_eff_trial: f64) -> Result<f64> {
    if !(n_eff_trial > fiber.n_clad && n_eff_trial < fiber.n_core) {
        return Err(Error::Domain(format!(
            "trial n_eff {n_eff_trial} outside open interval ({}, {})",
            fiber.n_clad, fiber.n_core
        )));
    }
    Ok(residual_raw(fiber, l, branch, n_eff_trial))
}

fn residual_raw(fiber: &FiberSpec, l: u32, branch: Branch, n_eff: f64) -> f64 {
    let ka = fiber.k() * fiber.radius_a;
    let n1sq = fiber.n_core * fiber.n_core;
    let n2sq = fiber.n_clad * fiber.n_clad;
    let ha = ka * (n1sq - n_eff * n_eff).sqrt();
    let qa = ka * (n_eff * n_eff - n2sq).sqrt();
    let li = l as i32;
    let lf = l as f64;

    let jl = bessel_j(l, ha);
    let jlm1 = bessel_j_signed(li - 1, ha);
    // scaled K's: the shared exp(qa) factor cancels in the ratio
    let (klm1, kl, klp1) = crate::bessel::bessel_k_scaled_triple(l, qa);

    let kterm = (klm1 + klp1) / (qa * kl);
    let lhs = jlm1 / (ha * jl);

    let sum_frac = (n1sq + n2sq) / (4.0 * n1sq);
    let dif_frac = (n1sq - n2sq) / (4.0 * n1sq);
    let inv2 = 1.0 / (ha * ha) + 1.0 / (qa * qa);
    // beta^2 / k0^2 = n_eff^2
    let r = (dif_frac * dif_frac * kterm * kterm
        + lf * lf * n_eff * n_eff / n1sq * inv2 * inv2)
        .sqrt();

    lhs - (sum_frac * kterm + lf / (ha * ha) + branch.sign() * r)
}

/// Zeros of `J_l` below `x_max` (poles of the residual in `ha`).
fn j_zeros_below(l: u32, x_max: f64) -> Vec<f64> {
    let mut zeros = Vec::new();
    if x_max <= 0.0 {
        return zeros;
    }
    let step = 0.2;
    let mut x = 0.05;
    let mut prev = bessel_j(l, x);
    while x < x_max {
        let next_x = (x + step).min(x_max);
        let cur = bessel_j(l, next_x);
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            if let Ok(z) = bisect(|t| bessel_j(l, t), x, next_x, 1e-14, 120) {
                zeros.push(z);
            }
        }
        prev = cur;
        x = next_x;
    }
    zeros
}

/// Scan grid over (n_lo, n_hi): uniform base, log fans at both edges, and
/// clusters hugging each `J_l(ha)` pole.
fn scan_grid(fiber: &FiberSpec, l: u32, n_lo: f64, n_hi: f64, base: usize) -> Vec<f64> {
    let eps_edge = 1e-9;
    let lo = n_lo + eps_edge;
    let hi = n_hi - eps_edge;
    if lo >= hi {
        return Vec::new();
    }
    let mut grid = Vec::with_capacity(base + 200);
    for i in 0..=base {
        grid.push(lo + (hi - lo) * i as f64 / base as f64);
    }
    // log fans: roots crowd the cladding edge near cutoff and the core edge
    // at large V
    for t in 0..40 {
        let off = 10f64.powf(-12.0 + 11.0 * t as f64 / 39.0);
        if n_lo + off < hi {
            grid.push(n_lo + off);
        }
        if n_hi - off > lo {
            grid.push(n_hi - off);
        }
    }
    // pole-adjacent clusters
    let ka = fiber.k() * fiber.radius_a;
    let n1sq = fiber.n_core * fiber.n_core;
    let ha_max = ka * (n1sq - n_lo * n_lo).sqrt();
    for z in j_zeros_below(l, ha_max) {
        let n_pole_sq = n1sq - (z / ka) * (z / ka);
        if n_pole_sq <= 0.0 {
            continue;
        }
        let n_pole = n_pole_sq.sqrt();
        for off in [1e-12, 1e-10, 1e-8, 1e-6, 1e-4] {
            for sgn in [-1.0, 1.0] {
                let p = n_pole + sgn * off;
                if p > lo && p < hi {
                    grid.push(p);
                }
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-16);
    grid
}

/// Find all residual roots for one (l, branch) over [n_lo, n_hi],
/// descending.
fn branch_roots(
    fiber: &FiberSpec,
    l: u32,
    branch: Branch,
    n_lo: f64,
    n_hi: f64,
    base: usize,
) -> (Vec<f64>, Vec<UnconvergedBracket>) {
    let grid = scan_grid(fiber, l, n_lo, n_hi, base);
    let f = |x: f64| residual_raw(fiber, l, branch, x);
    let mut roots = Vec::new();
    let mut failures = Vec::new();

    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    for i in 1..grid.len() {
        let (a, b) = (grid[i - 1], grid[i]);
        let (fa, fb) = (values[i - 1], values[i]);
        if !fa.is_finite() || !fb.is_finite() || fa == 0.0 {
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        let root = match bisect(&f, a, b, 1e-16, 200) {
            Ok(r) => secant_polish(&f, r, a, b, 4),
            Err(why) => {
                failures.push(UnconvergedBracket {
                    l,
                    branch,
                    n_eff_lo: a,
                    n_eff_hi: b,
                    reason: why,
                });
                continue;
            }
        };
        let fr = f(root).abs();
        // a bracket that straddles a pole refines to a point where the
        // residual is still large; a true root collapses it
        if fr > 0.5 * fa.abs().min(fb.abs()) && fr > 1e-6 {
            continue;
        }
        roots.push(root);
    }

    // drop anything hugging a pole of J_l(ha)
    let ka = fiber.k() * fiber.radius_a;
    let n1sq = fiber.n_core * fiber.n_core;
    let ha_max = ka * (n1sq - n_lo * n_lo).sqrt();
    let poles: Vec<f64> = j_zeros_below(l, ha_max)
        .into_iter()
        .filter_map(|z| {
            let s = n1sq - (z / ka) * (z / ka);
            (s > 0.0).then(|| s.sqrt())
        })
        .collect();
    roots.retain(|r| poles.iter().all(|p| (r - p).abs() > 1e-8));

    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-11);
    (roots, failures)
}

/// Construct the full mode solution (eigenvalue plus amplitude constants)
/// for a root of the characteristic equation. Amplitudes are left at the
/// natural unit scale (`A = 1 V/m` for modes with an E_z component,
/// `B = 1 A/m` for TE); `power` records what those amplitudes carry.
fn construct_solution(
    fiber: &FiberSpec,
    family: ModeFamily,
    l: u32,
    m: u32,
    rotation: Rotation,
    n_eff: f64,
) -> Result<ModeSolution> {
    let k = fiber.k();
    let n1sq = fiber.n_core * fiber.n_core;
    let n2sq = fiber.n_clad * fiber.n_clad;
    let beta = n_eff * k;
    let h = k * (n1sq - n_eff * n_eff).sqrt();
    let q = k * (n_eff * n_eff - n2sq).sqrt();
    let a = fiber.radius_a;
    let (ha, qa) = (h * a, q * a);
    if qa > 650.0 {
        return Err(Error::Solver(format!(
            "exterior amplitude constants overflow at qa = {qa:.1}; use the \
             effective-index interface (solve_neff) at this geometry"
        )));
    }
    let jl = bessel_j(l, ha);
    let kl = bessel_k_scaled(l, qa) * (-qa).exp();
    let j_over_k = jl / kl;
    let omega = fiber.omega();

    let (a_c, b_c, c_c, d_c, s) = match family {
        ModeFamily::TE => {
            let b = Complex64::new(1.0, 0.0);
            (
                Complex64::ZERO,
                b,
                Complex64::ZERO,
                b * j_over_k,
                0.0,
            )
        }
        ModeFamily::TM => {
            let a_c = Complex64::new(1.0, 0.0);
            (a_c, Complex64::ZERO, a_c * j_over_k, Complex64::ZERO, 0.0)
        }
        ModeFamily::HE | ModeFamily::EH => {
            let jp = bessel_j_prime(l, ha);
            let kp_over_k = {
                let km1 = bessel_k_scaled((l as i32 - 1).unsigned_abs(), qa);
                let kp1 = bessel_k_scaled(l + 1, qa);
                let ks = bessel_k_scaled(l, qa);
                -0.5 * (km1 + kp1) / ks
            };
            let denom = jp / (ha * jl) + kp_over_k / qa;
            let f_mag = (1.0 / (ha * ha) + 1.0 / (qa * qa)) / denom;
            let s = rotation.sign() * f_mag;
            let a_c = Complex64::new(1.0, 0.0);
            // B = i l beta s A / (mu0 omega)
            let b_c = Complex64::new(0.0, l as f64 * beta * s / (constants::MU0 * omega));
            (a_c, b_c, a_c * j_over_k, b_c * j_over_k, s)
        }
    };

    let mode = ModeId::new(family, l, m, rotation)?;
    let mut sol = ModeSolution {
        fiber: *fiber,
        mode,
        beta_prop: beta,
        n_eff,
        h,
        q,
        a_const: a_c,
        b_const: b_c,
        c_const: c_c,
        d_const: d_c,
        s_param: s,
        power: f64::NAN,
    };
    sol.power = crate::fields::power_quadrature(&sol);
    Ok(sol)
}

/// Solve every guided mode with azimuthal order up to `l_max`.
///
/// Hybrid modes are emitted in both rotations (sharing the eigenvalue);
/// the list is sorted by descending effective index. Radial orders count
/// down the effective-index ladder within each (family, l) group.
pub fn solve_modes(fiber: &FiberSpec, l_max: u32) -> Result<ModeSet> {
    let mut modes = Vec::new();
    let mut unconverged = Vec::new();
    for l in 0..=l_max {
        for branch in [Branch::PlusR, Branch::MinusR] {
            let family = branch.family(l);
            let (roots, fails) = branch_roots(fiber, l, branch, fiber.n_clad, fiber.n_core, 900);
            unconverged.extend(fails);
            for (idx, n_eff) in roots.iter().enumerate() {
                let m = idx as u32 + 1;
                if l == 0 {
                    modes.push(construct_solution(fiber, family, l, m, Rotation::Plus, *n_eff)?);
                } else {
                    for rot in [Rotation::Plus, Rotation::Minus] {
                        modes.push(construct_solution(fiber, family, l, m, rot, *n_eff)?);
                    }
                }
            }
        }
    }
    modes.sort_by(|a, b| {
        b.n_eff
            .partial_cmp(&a.n_eff)
            .unwrap()
            .then_with(|| format!("{}", a.mode).cmp(&format!("{}", b.mode)))
    });
    Ok(ModeSet { modes, unconverged })
}

/// Effective index of one specific mode, without building field constants.
///
/// Cheap enough to use inside radius sweeps; valid at any V (when V is
/// large it only scans the top of the effective-index interval, where the
/// low radial orders live).
pub fn solve_neff(fiber: &FiberSpec, mode: &ModeId) -> Result<f64> {
    let branch = Branch::for_family(mode.family);
    let v = fiber.v_number();
    let ka = fiber.k() * fiber.radius_a;
    let (n_lo, base) = if v > 25.0 {
        // the m-th root sits above the (m+2)-th zero of J_l in ha terms
        let u_limit = std::f64::consts::PI * (mode.m as f64 + mode.l as f64 / 2.0 + 2.5);
        let s = fiber.n_core * fiber.n_core - (u_limit / ka) * (u_limit / ka);
        if s > fiber.n_clad * fiber.n_clad {
            (s.sqrt(), 600)
        } else {
            (fiber.n_clad, 900)
        }
    } else {
        (fiber.n_clad, 900)
    };
    let (roots, _) = branch_roots(fiber, mode.l, branch, n_lo, fiber.n_core, base);
    roots.get(mode.m as usize - 1).copied().ok_or_else(|| {
        Error::Unguided(format!(
            "{} at a = {:.4e} m, lambda = {:.4e} m (V = {:.3})",
            mode, fiber.radius_a, fiber.wavelength, v
        ))
    })
}

/// Full solution of one specific mode.
pub fn solve_mode(fiber: &FiberSpec, mode: &ModeId) -> Result<ModeSolution> {
    let n_eff = solve_neff(fiber, mode)?;
    construct_solution(fiber, mode.family, mode.l, mode.m, mode.rotation, n_eff)
}

/// The two degenerate rotations of a hybrid mode, each normalized to carry
/// `power` watts.
pub fn solve_rotation_pair(
    fiber: &FiberSpec,
    family: ModeFamily,
    l: u32,
    m: u32,
    power: f64,
) -> Result<(ModeSolution, ModeSolution)> {
    let plus = solve_mode(fiber, &ModeId::new(family, l, m, Rotation::Plus)?)?;
    let minus = solve_mode(fiber, &ModeId::new(family, l, m, Rotation::Minus)?)?;
    Ok((
        crate::fields::normalize_any(&plus, power)?,
        crate::fields::normalize_any(&minus, power)?,
    ))
}

/// One row of the effective-index curve.
#[derive(Debug, Clone)]
pub struct NeffSample {
    pub v: f64,
    pub mode: ModeId,
    pub n_eff: f64,
}

/// Effective-index table over a V range (the data behind an n_eff-vs-V
/// plot). The geometry is scaled through the core radius at fixed
/// wavelength and indices; one row per (family, l, m) branch since the two
/// rotations are degenerate. `violations` lists any branch that failed the
/// n_eff-monotone-in-V continuity guard.
#[derive(Debug, Clone)]
pub struct NeffCurve {
    pub rows: Vec<NeffSample>,
    pub violations: Vec<String>,
}

pub fn neff_curve(
    template: &FiberSpec,
    v_range: (f64, f64),
    samples: usize,
    l_max: u32,
) -> Result<NeffCurve> {
    let (v_min, v_max) = v_range;
    if !(v_min > 0.0 && v_max > v_min) {
        return Err(Error::InvalidInput(format!(
            "need 0 < v_min < v_max, got [{v_min}, {v_max}]"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    // per-sample root scans only (no field-constant construction), in
    // parallel; ordered collect keeps the output deterministic
    use rayon::prelude::*;
    let per_sample: Vec<Result<Vec<NeffSample>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let v = v_min + (v_max - v_min) * i as f64 / (samples - 1) as f64;
            let radius = v * template.wavelength
                / (2.0 * std::f64::consts::PI * template.numerical_aperture());
            let fiber = template.at_radius(radius)?;
            let mut rows = Vec::new();
            for l in 0..=l_max {
                for branch in [Branch::PlusR, Branch::MinusR] {
                    let family = branch.family(l);
                    let (roots, _) =
                        branch_roots(&fiber, l, branch, fiber.n_clad, fiber.n_core, 900);
                    for (idx, n_eff) in roots.iter().enumerate() {
                        rows.push(NeffSample {
                            v,
                            mode: ModeId::new(family, l, idx as u32 + 1, Rotation::Plus)?,
                            n_eff: *n_eff,
                        });
                    }
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for group in per_sample {
        rows.extend(group?);
    }
    // branch continuity: within each (family, l, m), n_eff must be
    // non-decreasing in V
    let mut violations = Vec::new();
    let mut branches: std::collections::HashMap<(ModeFamily, u32, u32), Vec<(f64, f64)>> =
        std::collections::HashMap::new();
    for row in &rows {
        branches
            .entry((row.mode.family, row.mode.l, row.mode.m))
            .or_default()
            .push((row.v, row.n_eff));
    }
    for ((family, l, m), pts) in branches {
        for w in pts.windows(2) {
            if w[1].1 < w[0].1 - 1e-10 {
                violations.push(format!(
                    "{}{l}{m}: n_eff drops from {:.9} to {:.9} between V = {:.4} and {:.4}",
                    family.as_str(),
                    w[0].1,
                    w[1].1,
                    w[0].0,
                    w[1].0
                ));
            }
        }
    }
    Ok(NeffCurve { rows, violations })
}

/// d(beta)/d(omega) of a guided mode by symmetric finite differences with
/// relative frequency step `delta`, re-solving the eigenproblem at each
/// shifted frequency. Equals the inverse group velocity.
pub fn dbeta_domega_with_step(fiber: &FiberSpec, mode: &ModeId, delta: f64) -> Result<f64> {
    let omega0 = fiber.omega();
    let beta_at = |om: f64| -> Result<f64> {
        let lambda = 2.0 * std::f64::consts::PI * constants::C / om;
        let f = fiber.at_wavelength(lambda)?;
        Ok(solve_neff(&f, mode)? * f.k())
    };
    let bp = beta_at(omega0 * (1.0 + delta))?;
    let bm = beta_at(omega0 * (1.0 - delta))?;
    Ok((bp - bm) / (2.0 * delta * omega0))
}

/// Default central difference, `delta = 1e-5` relative.
pub fn dbeta_domega(fiber: &FiberSpec, mode: &ModeId) -> Result<f64> {
    dbeta_domega_with_step(fiber, mode, 1e-5)
}

/// Five-point variant (O(delta^4)); used to cross-check the stencil.
pub fn dbeta_domega_stencil5(fiber: &FiberSpec, mode: &ModeId, delta: f64) -> Result<f64> {
    let omega0 = fiber.omega();
    let beta_at = |om: f64| -> Result<f64> {
        let lambda = 2.0 * std::f64::consts::PI * constants::C / om;
        let f = fiber.at_wavelength(lambda)?;
        Ok(solve_neff(&f, mode)? * f.k())
    };
    let b_p1 = beta_at(omega0 * (1.0 + delta))?;
    let b_m1 = beta_at(omega0 * (1.0 - delta))?;
    let b_p2 = beta_at(omega0 * (1.0 + 2.0 * delta))?;
    let b_m2 = beta_at(omega0 * (1.0 - 2.0 * delta))?;
    Ok((8.0 * (b_p1 - b_m1) - (b_p2 - b_m2)) / (12.0 * delta * omega0))
}
