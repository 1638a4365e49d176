//! Acceptance suite: one test per numbered criterion of the project
//! contract, each printing a PASS/FAIL line with the measured values
//! (run with `--nocapture` to see the lines for passing tests).
//!
//! Three checks are deliberately left red where the underlying claim is
//! unattainable in the implemented model; the printed diagnostics carry
//! the measured values and the nearby conventions that do reach the
//! target. See the test output and the doc comments on those tests.

use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use onf_core::coupling::{
    self, AtomSpec, CavityParams, GuidedChannel, RadiativeModel,
};
use onf_core::fields::{self, PropagationSense, QuasiSign};
use onf_core::modesolver::{self, solve_modes, solve_neff};
use onf_core::spectra;
use onf_core::taper;
use onf_core::trap::{BeamConfiguration, TrapBeam, TrapConfig, TrapGrid};
use onf_core::{Error, FiberSpec, ModeFamily, ModeId, Rotation};

/// The suite contains several wall-clock assertions; serialize the tests
/// so they do not contend for the thread pool.
fn lock() -> std::sync::MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn silica(radius: f64, lambda: f64) -> FiberSpec {
    FiberSpec::new(radius, 1.45367, 1.0, lambda).unwrap()
}

fn rb_atom() -> AtomSpec {
    AtomSpec::from_gamma0(
        780e-9,
        2.0 * std::f64::consts::PI * 6.0666e6,
        [1.0, 0.0, 0.0],
    )
    .unwrap()
}

fn v_to_radius(template: &FiberSpec, v: f64) -> f64 {
    v * template.wavelength / (2.0 * std::f64::consts::PI * template.numerical_aperture())
}

fn he11() -> ModeId {
    ModeId::new(ModeFamily::HE, 1, 1, Rotation::Plus).unwrap()
}

fn tm01() -> ModeId {
    ModeId::new(ModeFamily::TM, 0, 1, Rotation::Plus).unwrap()
}

fn report(n: u32, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {n:02}: {} - {details}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Cutoff of a mode family by bisection on guidedness over V.
fn cutoff_v(template: &FiberSpec, mode: &ModeId, v_lo: f64, v_hi: f64) -> f64 {
    let (mut lo, mut hi) = (v_lo, v_hi);
    assert!(solve_neff(&template.at_radius(v_to_radius(template, hi)).unwrap(), mode).is_ok());
    assert!(solve_neff(&template.at_radius(v_to_radius(template, lo)).unwrap(), mode).is_err());
    for _ in 0..24 {
        let mid = 0.5 * (lo + hi);
        let fiber = template.at_radius(v_to_radius(template, mid)).unwrap();
        if solve_neff(&fiber, mode).is_ok() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_01_te_tm_cutoff_and_sweep_time() {
    let _g = lock();
    let template = silica(300e-9, 795e-9);
    let te = ModeId::new(ModeFamily::TE, 0, 1, Rotation::Plus).unwrap();
    let v_te = cutoff_v(&template, &te, 2.3, 2.5);
    let v_tm = cutoff_v(&template, &tm01(), 2.3, 2.5);

    let t0 = Instant::now();
    let curve = modesolver::neff_curve(&template, (0.5, 5.0), 500, 2).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();

    let ok = (v_te - 2.405).abs() <= 1e-3 && (v_tm - 2.405).abs() <= 1e-3 && elapsed < 10.0;
    report(
        1,
        ok,
        &format!(
            "TE01 appears at V = {v_te:.6}, TM01 at V = {v_tm:.6} (target 2.405 +- 1e-3); \
             500-point sweep took {elapsed:.2} s (< 10 s), {} rows",
            curve.rows.len()
        ),
    );
    assert!((v_te - 2.405).abs() <= 1e-3, "TE01 cutoff at {v_te}");
    assert!((v_tm - 2.405).abs() <= 1e-3, "TM01 cutoff at {v_tm}");
    assert!(elapsed < 10.0, "sweep took {elapsed} s");
}

#[test]
fn criterion_02_he21_cutoff() {
    let _g = lock();
    let template = silica(300e-9, 795e-9);
    let he21 = ModeId::new(ModeFamily::HE, 2, 1, Rotation::Plus).unwrap();
    let v_c = cutoff_v(&template, &he21, 2.5, 3.2);
    let ok = (2.7..=2.9).contains(&v_c);
    report(2, ok, &format!("HE21 cutoff found at V = {v_c:.5} (target [2.7, 2.9])"));
    assert!(ok, "HE21 cutoff {v_c}");
}

#[test]
fn criterion_03_tangential_continuity() {
    let _g = lock();
    let mut worst: f64 = 0.0;
    let mut n_modes = 0;
    for (radius, lambda) in [(180e-9, 780e-9), (390e-9, 795e-9)] {
        let fiber = silica(radius, lambda);
        let set = solve_modes(&fiber, 2).unwrap();
        n_modes += set.modes.len();
        for sol in &set.modes {
            let a = fiber.radius_a;
            for phi in [0.0, 0.7, 2.1] {
                let (ein, hin) =
                    fields::fields_at(sol, PropagationSense::Forward, a * (1.0 - 1e-12), phi, 0.0, 0.0);
                let (eout, hout) =
                    fields::fields_at(sol, PropagationSense::Forward, a, phi, 0.0, 0.0);
                for idx in [1usize, 2] {
                    for (fin, fout) in [(ein[idx], eout[idx]), (hin[idx], hout[idx])] {
                        let scale = fin.norm().max(fout.norm());
                        if scale > 0.0 {
                            worst = worst.max((fin - fout).norm() / scale);
                        }
                    }
                }
            }
        }
    }
    let ok = worst < 1e-9;
    report(
        3,
        ok,
        &format!(
            "tangential E/H continuity across r = a: worst relative mismatch {worst:.2e} \
             over {n_modes} modes of the 360-nm/780-nm and 780-nm/795-nm geometries (< 1e-9)"
        ),
    );
    assert!(ok, "continuity mismatch {worst}");
}

/// 2D Poynting quadrature over r in (0, 20a), phi in [0, 2pi).
fn poynting_2d(sol: &onf_core::ModeSolution) -> f64 {
    let a = sol.fiber.radius_a;
    let (nodes, weights) = onf_core::numerics::gauss_legendre(48);
    let r_outer = 20.0 * a;
    let breaks = [0.0, 0.5 * a, a, 2.0 * a, 5.0 * a, 10.0 * a, r_outer];
    let n_phi = 32;
    let mut total = 0.0;
    for ip in 0..n_phi {
        let phi = 2.0 * std::f64::consts::PI * ip as f64 / n_phi as f64;
        let mut radial = 0.0;
        for w in breaks.windows(2) {
            let c = 0.5 * (w[1] - w[0]);
            let m = 0.5 * (w[1] + w[0]);
            for (x, wt) in nodes.iter().zip(weights.iter()) {
                let r = m + c * x;
                let (e, h) = fields::fields_at(sol, PropagationSense::Forward, r, phi, 0.0, 0.0);
                radial += wt * c * fields::poynting_z(&e, &h) * r;
            }
        }
        total += radial * 2.0 * std::f64::consts::PI / n_phi as f64;
    }
    total
}

#[test]
fn criterion_04_normalization_cross_check() {
    let _g = lock();
    let mut worst: f64 = 0.0;
    let mut checked = Vec::new();
    for radius in [500e-9, 560e-9, 620e-9] {
        let fiber = silica(radius, 780e-9);
        for family in [ModeFamily::HE, ModeFamily::EH] {
            let id = ModeId::new(family, 1, 1, Rotation::Plus).unwrap();
            let sol = modesolver::solve_mode(&fiber, &id).unwrap();
            let analytic = fields::power_analytic(&sol).unwrap();
            let quad = poynting_2d(&sol);
            let rel = ((analytic - quad) / quad).abs();
            worst = worst.max(rel);
            checked.push(format!("{}@{:.0}nm: {rel:.1e}", id, radius * 1e9));
        }
    }
    let ok = worst < 1e-6;
    report(
        4,
        ok,
        &format!(
            "analytic P = A^2 pi (D_in + D_out) vs 2D Poynting quadrature: worst \
             relative difference {worst:.2e} (< 1e-6) [{}]",
            checked.join(", ")
        ),
    );
    assert!(ok, "normalization mismatch {worst}");
}

#[test]
fn criterion_05_quadrature_phase() {
    let _g = lock();
    let fiber = silica(180e-9, 780e-9);
    let (plus, minus) = modesolver::solve_rotation_pair(&fiber, ModeFamily::HE, 1, 1, 1e-3).unwrap();
    let ql = fields::quasilinear(plus, minus, QuasiSign::Plus).unwrap();
    let mut worst: f64 = 0.0;
    for r in [fiber.radius_a * 1.1, fiber.radius_a * 1.5, fiber.radius_a + 200e-9] {
        let fwd = ql.sample(PropagationSense::Forward, r, 0.0, 0.0, 0.0);
        let bwd = ql.sample(PropagationSense::Backward, r, 0.0, 0.0, 0.0);
        let df = fields::longitudinal_phase_check(&fwd).unwrap();
        let db = fields::longitudinal_phase_check(&bwd).unwrap();
        worst = worst
            .max((df - std::f64::consts::FRAC_PI_2).abs())
            .max((db + std::f64::consts::FRAC_PI_2).abs());
    }
    let ok = worst < 1e-9;
    report(
        5,
        ok,
        &format!(
            "arg(E_z) - arg(E_major) = +pi/2 forward, -pi/2 backward; worst deviation \
             {worst:.2e} rad (< 1e-9)"
        ),
    );
    assert!(ok, "phase deviation {worst}");
}

/// Criterion 6 is red by mathematics: with the amplitude anchored at
/// r = a + lambda/2, the far-field form c r^{-1/2} e^{-qr} deviates from
/// the exact K_l fields pointwise by the Bessel asymptotic error term
/// (4l^2-1)/(8x)-style, several percent at qr = 5 for the longitudinal
/// component. The same numbers normalized to the surface field (the
/// convention evanescent-profile plots use) stay far below 1%. Both are
/// printed; the stated pointwise bound is asserted and fails honestly.
#[test]
fn criterion_06_evanescent_asymptotic() {
    let _g = lock();
    let mut worst_rel: f64 = 0.0;
    let mut worst_surf: f64 = 0.0;
    let mut per_component = Vec::new();
    for (radius, lambda) in [(180e-9, 780e-9), (390e-9, 795e-9)] {
        let fiber = silica(radius, lambda);
        let sol = modesolver::solve_mode(&fiber, &he11()).unwrap();
        let sol = fields::normalize_any(&sol, 1e-3).unwrap();
        let q = sol.q;
        let (e_surf, _) = fields::fields_at(
            &sol,
            PropagationSense::Forward,
            fiber.radius_a,
            0.0,
            0.0,
            0.0,
        );
        for comp in 0..3usize {
            let surf = e_surf[comp].norm();
            let mut comp_worst: f64 = 0.0;
            for i in 0..=40 {
                let qr = 5.0 + 7.0 * i as f64 / 40.0;
                let r = qr / q;
                let (exact, approx) = fields::evanescent_approximation(&sol, comp, r).unwrap();
                if exact <= 0.0 {
                    continue;
                }
                let rel = ((approx - exact) / exact).abs();
                comp_worst = comp_worst.max(rel);
                worst_rel = worst_rel.max(rel);
                worst_surf = worst_surf.max((approx - exact).abs() / surf);
            }
            per_component.push(format!(
                "{}[{comp}]: {comp_worst:.3}",
                if radius < 200e-9 { "360nm" } else { "780nm" }
            ));
        }
    }
    let ok = worst_rel < 0.01;
    report(
        6,
        ok,
        &format!(
            "far-field form vs exact exterior fields for qr >= 5: worst pointwise-relative \
             deviation {worst_rel:.3} (stated bound 0.01; unattainable: the K_l asymptotic \
             error term is (4l^2-1)/(8x)-order). Normalized to the surface field the worst \
             deviation is {worst_surf:.2e}, well under 0.01. Per component: [{}]",
            per_component.join(", ")
        ),
    );
    assert!(
        ok,
        "pointwise-relative deviation {worst_rel:.4} exceeds the stated 1% bound \
         (expected: the asymptotic error term is 3/(8x) for E_z; surface-normalized \
         deviation is {worst_surf:.2e})"
    );
}

#[test]
fn criterion_07_coupling_identities_sweep() {
    let _g = lock();
    let atom = rb_atom();
    let template = silica(200e-9, 780e-9);
    let radii: Vec<f64> = (0..50).map(|i| 150e-9 + 250e-9 * i as f64 / 49.0).collect();
    let distances: Vec<f64> = (0..50).map(|i| 10e-9 + 490e-9 * i as f64 / 49.0).collect();
    let rows = coupling::sweep_radius_distance(
        &template,
        &atom,
        &radii,
        &distances,
        RadiativeModel::FreeSpace,
    )
    .unwrap();
    assert_eq!(rows.len(), 2500);
    let mut worst_c1: f64 = 0.0;
    let mut worst_purcell: f64 = 0.0;
    let mut worst_beta2: f64 = 0.0;
    for r in &rows {
        let c1_identity = r.beta_c / (1.0 - r.beta_c);
        worst_c1 = worst_c1.max((r.c1 - c1_identity).abs() / c1_identity.max(1e-30));
        // purcell = alpha / beta
        let p_identity = r.alpha / r.beta_c;
        worst_purcell = worst_purcell.max((r.purcell - p_identity).abs() / p_identity);
        if r.beta_c < 0.1 {
            // exact algebra: C1 - beta = beta^2/(1-beta) <= 1.112 beta^2 here
            let dev = (r.c1 - r.beta_c).abs();
            worst_beta2 = worst_beta2.max(dev / (r.beta_c * r.beta_c).max(1e-300));
        }
    }
    let ok = worst_c1 < 1e-12 && worst_purcell < 1e-12 && worst_beta2 < 1.2;
    report(
        7,
        ok,
        &format!(
            "50x50 radius-distance sweep: C1 = beta/(1-beta) worst {worst_c1:.2e} (< 1e-12); \
             Purcell = alpha/beta worst {worst_purcell:.2e} (< 1e-12); |C1 - beta| <= \
             {worst_beta2:.3} beta^2 where beta < 0.1 (second-order bound 1.2)"
        ),
    );
    assert!(ok, "identities violated: {worst_c1} {worst_purcell} {worst_beta2}");
}

#[test]
fn criterion_08_cavity_cooperativity_routes() {
    let _g = lock();
    let atom = rb_atom();
    let mut worst: f64 = 0.0;
    for (t, l, area_factor) in [(0.01, 0.01, 2.0), (0.05, 0.002, 0.7), (1.0, 0.05, 1.0)] {
        let cavity = CavityParams::new(t, l).unwrap();
        let area = area_factor * atom.sigma0();
        let c_geo = coupling::cavity_cooperativity(&atom, &cavity, area).unwrap();
        let c_rate = coupling::cavity_cooperativity_rates(&atom, &cavity, area).unwrap();
        worst = worst.max(((c_geo - c_rate) / c_geo).abs());
    }
    let ok = worst < 1e-9;
    report(
        8,
        ok,
        &format!(
            "(sigma0/A_mode)(1/T) route vs g^2/(kappa gamma_perp) route: worst relative \
             difference {worst:.2e} (< 1e-9) over three synthetic cavities"
        ),
    );
    assert!(ok, "cavity routes disagree by {worst}");
}

/// Shared trap solve for criteria 9 and 10: the contract's beam powers on
/// a 500-nm-diameter fiber. The polarizations are co-aligned: the crossed
/// arrangement does not produce a bound minimum at these powers in the
/// scalar two-level model (the blue barrier is weakest exactly where the
/// red well is deepest), which the suite prints for the record.
fn contract_trap() -> &'static (onf_core::trap::TrapProfile, f64) {
    static TRAP: OnceLock<(onf_core::trap::TrapProfile, f64)> = OnceLock::new();
    TRAP.get_or_init(|| {
        let config = TrapConfig {
            fiber: silica(250e-9, 780e-9),
            atom: rb_atom(),
            atom_mass: 1.44316e-25,
            red: TrapBeam::new(1064e-9, 3e-3, 0.0, BeamConfiguration::StandingWave).unwrap(),
            blue: TrapBeam::new(750e-9, 6.5e-3, 0.0, BeamConfiguration::RunningWave).unwrap(),
            c3_vdw: 5.6e-49, // documented Rb-fused-silica value [J m^3]
        };
        let t0 = Instant::now();
        let profile = onf_core::trap::total_potential(&config, &TrapGrid::default()).unwrap();
        (profile, t0.elapsed().as_secs_f64())
    })
}

/// Criterion 9 is red on the minimum-position clause: the scalar two-level
/// model with the stated powers binds at ~341 nm from the surface, not
/// 150-250 nm. The machinery reproduces an independent published-style
/// two-color configuration (circular polarization, Cs-scale atom, 30/29 mW
/// at 1064/700 nm: minimum 202 nm out, 2.25 mK deep), so the distance gap
/// is a property of these powers in this model, not of the solver. Depth,
/// boundness, and runtime clauses pass.
#[test]
fn criterion_09_trap_reproduction() {
    let _g = lock();
    let (profile, elapsed) = contract_trap();
    let d_surface = profile.minimum_position.0 - 250e-9;
    let depth_uk = profile.depth_uk();
    let dist_ok = (150e-9..=250e-9).contains(&d_surface);
    let depth_ok = (100.0..=1000.0).contains(&depth_uk);
    let time_ok = *elapsed < 60.0;
    report(
        9,
        dist_ok && depth_ok && time_ok,
        &format!(
            "3 mW x 2 at 1064 nm + 6.5 mW at 750 nm (co-polarized; crossed polarizations do \
             not bind at these powers), C3 = 5.6e-49 J m^3, Rb-scale atom: bound minimum \
             {:.1} nm from the surface (stated window 150-250 nm), depth {:.0} uK (window \
             100-1000 uK), solved in {:.1} s (< 60 s); trap frequencies 2pi x ({:.0}, {:.0}, \
             {:.0}) kHz",
            d_surface * 1e9,
            depth_uk,
            elapsed,
            profile.trap_frequencies.0 / (2e3 * std::f64::consts::PI),
            profile.trap_frequencies.1 / (2e3 * std::f64::consts::PI),
            profile.trap_frequencies.2 / (2e3 * std::f64::consts::PI),
        ),
    );
    assert!(depth_ok, "depth {depth_uk} uK outside [100, 1000]");
    assert!(time_ok, "trap solve took {elapsed} s");
    assert!(
        dist_ok,
        "minimum at {:.1} nm from the surface, outside the stated 150-250 nm window \
         (model-level gap, see ledger: the D2-only two-level blue/red shift ratio places \
         the crossing farther out than the targeted ~200 nm)",
        d_surface * 1e9
    );
}

#[test]
fn criterion_10_lattice_contrast() {
    let _g = lock();
    let (profile, _) = contract_trap();
    let c = profile.lattice_contrast;
    let ok = (c - 0.65).abs() <= 0.10;
    report(
        10,
        ok,
        &format!(
            "axial intensity contrast of the 1064-nm lattice at the trap radius: {:.1}% \
             (target 65% +- 10 points); potential-magnitude contrast {:.1}%",
            c * 100.0,
            profile.lattice_contrast_potential * 100.0
        ),
    );
    assert!(ok, "contrast {c}");
}

/// Criterion 11: the stated 250-500 nm span contains radii where the
/// HE11:TM01 composition is undefined (TM01 cut off below 288.4 nm) or
/// where the inversion's own monotonicity precondition refuses (the
/// beat frequency peaks near 331 nm). Those radii are asserted to refuse
/// exactly as the op contract demands; the identity and the noise bound
/// are asserted over the entire attainable band.
#[test]
fn criterion_11_radius_inversion() {
    let _g = lock();
    use rand::Rng;
    use rand::SeedableRng;
    use rayon::prelude::*;

    let template = silica(400e-9, 795e-9);
    let band = (340e-9, 500e-9);

    // (a) cutoff: below 288.4 nm the forward model must refuse
    for a in [250e-9, 270e-9, 285e-9] {
        match spectra::beat_frequency(&template.at_radius(a).unwrap(), (&he11(), &tm01())) {
            Err(Error::Unguided(_)) => {}
            other => panic!("expected Unguided at a = {a}, got {other:?}"),
        }
    }
    // (b) non-monotone band: inversion over a range spanning the beat
    // maximum must refuse rather than extrapolate
    match spectra::radius_from_beat(2.9e5, (&he11(), &tm01()), &template, (300e-9, 400e-9)) {
        Err(Error::NonMonotone(_)) => {}
        other => panic!("expected NonMonotone refusal, got {other:?}"),
    }

    // (c) identity on the attainable band
    let radii: Vec<f64> = (0..17).map(|i| 340e-9 + 160e-9 * i as f64 / 16.0).collect();
    let worst = radii
        .par_iter()
        .map(|&a_true| {
            let f = spectra::beat_frequency(&template.at_radius(a_true).unwrap(), (&he11(), &tm01()))
                .unwrap();
            let a_rec =
                spectra::radius_from_beat(f, (&he11(), &tm01()), &template, band).unwrap();
            (a_rec - a_true).abs()
        })
        .reduce(|| 0.0, f64::max);

    // (d) noise: 0.1% Gaussian perturbations of the beat frequency at 390 nm
    let f390 = spectra::beat_frequency(&template.at_radius(390e-9).unwrap(), (&he11(), &tm01()))
        .unwrap();
    let recovered: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // Box-Muller from two uniforms
            let (u1, u2): (f64, f64) = (rng.random_range(1e-12..1.0), rng.random_range(0.0..1.0));
            let gauss = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            let f_noisy = f390 * (1.0 + 1e-3 * gauss);
            spectra::radius_from_beat(f_noisy, (&he11(), &tm01()), &template, (360e-9, 430e-9))
                .unwrap()
        })
        .collect();
    let mean = recovered.iter().sum::<f64>() / recovered.len() as f64;
    let scatter = (recovered.iter().map(|r| (r - mean).powi(2)).sum::<f64>()
        / (recovered.len() - 1) as f64)
        .sqrt();

    let ok = worst < 1e-12 && scatter < 0.5e-9;
    report(
        11,
        ok,
        &format!(
            "HE11:TM01 at 795 nm: round-trip identity worst |a_rec - a_true| = {worst:.2e} m \
             (< 1e-12) over the attainable band 340-500 nm; 0.1% frequency noise gives \
             {:.3} nm radius scatter over 100 trials (< 0.5 nm). Excluded as the op contract \
             demands: a < 288.4 nm (TM01 cut off, Unguided), 288-340 nm (beat-frequency \
             maximum near 331 nm, NonMonotone refusal verified)",
            scatter * 1e9
        ),
    );
    assert!(ok, "identity {worst}, scatter {scatter}");
}

#[test]
fn criterion_12_pull_plan_round_trip() {
    let _g = lock();
    let target = taper::TaperProfile::new(62.5e-6, 2e-3, 6e-6, 250e-9, 5e-3).unwrap();
    let plan = taper::plan_pull(&target, 1e-3).unwrap();
    let profile = taper::simulate_pull(&plan, target.initial_radius).unwrap();

    let waist_half = 0.5 * target.waist_length;
    let total = profile.tracked_length();
    let mut worst: f64 = 0.0;
    for i in 0..6000 {
        let z = total * i as f64 / 6000.0;
        let r_sim = profile.radius_at(z);
        let r_tgt = target.radius_at((z - waist_half).max(0.0));
        worst = worst.max((r_sim - r_tgt).abs() / r_tgt);
    }

    let tracked = profile.tracked_length();
    let original_len = tracked - 0.5 * plan.total_elongation();
    let v_now = profile.volume(0.0);
    let v_before = std::f64::consts::PI * target.initial_radius.powi(2) * original_len;
    let vol_drift = ((v_now - v_before) / v_before).abs();

    let ok = worst < 0.01 && vol_drift < 1e-6;
    report(
        12,
        ok,
        &format!(
            "2 mrad -> 6 um -> exponential -> 250 nm with 5 mm waist: simulate(plan) matches \
             the target within {:.3}% radius everywhere (< 1%); glass volume conserved to \
             {vol_drift:.2e} (< 1e-6); {} steps, {:.1} mm total elongation",
            worst * 100.0,
            plan.steps.len(),
            plan.total_elongation() * 1e3
        ),
    );
    assert!(ok, "round trip worst {worst}, volume drift {vol_drift}");
}

#[test]
fn criterion_13_spectrogram_ridge_tracks_generator() {
    let _g = lock();
    let template = silica(400e-9, 795e-9);
    // stop the pull above the HE11:TM01 beat-frequency maximum (~331 nm)
    // so the chirp stays monotone; windows spanning a frequency fold have
    // no single well-defined instantaneous frequency to track
    let target = taper::TaperProfile::new(2e-6, 2e-3, 1.2e-6, 400e-9, 1.2e-3).unwrap();
    let plan = taper::plan_pull(&target, 0.2e-3).unwrap();
    let beat =
        taper::BeatTable::build(&template, (&he11(), &tm01()), 380e-9, 2.2e-6, 140).unwrap();
    let ds = 1e-6;
    let window = 0.12e-3;
    let hop = 0.03e-3;
    let sig = taper::transmission_signal(&plan, 2e-6, &beat, 0.05, ds).unwrap();
    let spec = spectra::spectrogram(&sig.transmission, ds, 0.0, window, hop).unwrap();
    let ridges = spectra::extract_ridges(&spec, 1).unwrap();
    assert!(!ridges.is_empty(), "no ridge extracted from the chirp");
    let ridge = &ridges[0];
    let df = spec.bin_width();

    let mut worst_bins: f64 = 0.0;
    let mut usable = 0;
    for &(center, f_found, _) in &ridge.points {
        let idx = sig
            .elongation
            .iter()
            .position(|&s| s >= center)
            .unwrap_or(sig.elongation.len() - 1);
        let f_gen = sig.instantaneous_frequency[idx];
        if f_gen * window < 3.0 {
            continue; // below STFT resolution: fewer than 3 cycles per window
        }
        worst_bins = worst_bins.max((f_found - f_gen).abs() / df);
        usable += 1;
    }
    let coverage = ridge.points.len() as f64 / spec.window_centers.len() as f64;
    let ok = worst_bins <= 1.0 && usable > 10 && coverage > 0.7;
    report(
        13,
        ok,
        &format!(
            "synthetic two-mode chirp: ridge tracks the generating law within {worst_bins:.2} \
             frequency bins (<= 1) in every one of {usable} resolvable windows; ridge covers \
             {:.0}% of all windows",
            coverage * 100.0
        ),
    );
    assert!(ok, "ridge off by {worst_bins} bins, usable {usable}, coverage {coverage}");
}

/// Criterion 14 is red on the alpha > 1.05 clause under the project's
/// chosen n^2-weighted profile normalization: the guided-channel matrix is
/// diagonal in the local frame, the radial dipole is exactly optimal, and
/// max alpha = 0.73. The unweighted-normalization convention gives ~1.09
/// and the total enhancement gamma_tot/gamma_0 (the quantity that tends
/// to the free-space value at large distance, matching how the ~1.2
/// benchmark behaves) reaches ~1.7; both are printed. The
/// interior-maximum clause passes.
#[test]
fn criterion_14_alpha_enhancement() {
    let _g = lock();
    let atom = rb_atom();
    let template = silica(200e-9, 780e-9);
    let radii: Vec<f64> = (0..18).map(|i| 140e-9 + 14e-9 * i as f64).collect();
    let mut alpha_max: f64 = 0.0;
    let mut alpha_unweighted_max: f64 = 0.0;
    let mut total_max: f64 = 0.0;
    let mut argmax_idx = 0usize;
    let mut alpha_by_radius = vec![0.0f64; radii.len()];
    for (i, &a) in radii.iter().enumerate() {
        let fiber = template.at_radius(a).unwrap();
        let channel = GuidedChannel::new(&fiber, ModeFamily::HE, 1, 1).unwrap();
        // profile-normalization ratio for the unweighted convention
        let ratio = {
            let (nodes, weights) = onf_core::numerics::gauss_legendre(32);
            let sol = &channel.plus;
            let q = sol.q;
            let density = |r: f64, weighted: bool| {
                let (e, _) = fields::fields_at(sol, PropagationSense::Forward, r, 0.0, 0.0, 0.0);
                let n2 = if weighted { fiber.index_at(r).powi(2) } else { 1.0 };
                n2 * (e[0].norm_sqr() + e[1].norm_sqr() + e[2].norm_sqr()) * r
            };
            let mut num = 0.0;
            let mut den = 0.0;
            let breaks = [0.0, 0.5 * a, a, a + 2.0 / q, a + 8.0 / q, a + 23.0 / q];
            for w in breaks.windows(2) {
                let c = 0.5 * (w[1] - w[0]);
                let m = 0.5 * (w[1] + w[0]);
                for (x, wt) in nodes.iter().zip(weights.iter()) {
                    num += wt * c * density(m + c * x, true);
                    den += wt * c * density(m + c * x, false);
                }
            }
            num / den
        };
        for d in [5e-9, 10e-9, 20e-9, 50e-9] {
            let g1d = channel.gamma_1d(&atom, a + d).unwrap();
            let alpha = g1d / atom.gamma0();
            if alpha > alpha_max {
                alpha_max = alpha;
                argmax_idx = i;
            }
            alpha_unweighted_max = alpha_unweighted_max.max(alpha * ratio);
            total_max = total_max.max(1.0 + alpha);
            if d == 5e-9 {
                alpha_by_radius[i] = alpha_by_radius[i].max(alpha);
            }
        }
    }
    let interior =
        argmax_idx > 0 && argmax_idx < radii.len() - 1 && {
            // genuinely interior: neighbors on the 5-nm row are lower
            alpha_by_radius[argmax_idx - 1] < alpha_by_radius[argmax_idx]
                && alpha_by_radius[argmax_idx + 1] < alpha_by_radius[argmax_idx]
        };
    let over = alpha_max > 1.05;
    report(
        14,
        interior && over,
        &format!(
            "alpha sweep over radius x near-surface distance: interior maximum at a = {:.0} nm \
             ({}); max alpha = {alpha_max:.3} under the n^2-weighted normalization (stated \
             bound > 1.05; the radial dipole is exactly optimal here). Same point under the \
             unweighted convention: {alpha_unweighted_max:.3}; total enhancement \
             gamma_tot/gamma_0: {total_max:.3}",
            radii[argmax_idx] * 1e9,
            if interior { "interior" } else { "boundary" },
        ),
    );
    assert!(interior, "alpha argmax not interior");
    assert!(
        over,
        "max alpha = {alpha_max:.3} under the n^2-weighted normalization does not reach 1.05 \
         (unweighted convention reaches {alpha_unweighted_max:.3}, total enhancement \
         {total_max:.3}; see ledger)"
    );
}
