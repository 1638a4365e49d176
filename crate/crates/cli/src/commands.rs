//! Command implementations: each consumes the parsed config and produces
//! in-memory artifacts; nothing touches the filesystem until every
//! computation has succeeded (so failed runs leave no partial output).

use crate::config::{parse_mode_label, Cfg};
use crate::units::Unit;
use crate::CliError;
use onf_core::export::{self, Table};
use onf_core::fields::PropagationSense;
use onf_core::trap::{BeamConfiguration, TrapBeam, TrapConfig, TrapGrid};
use onf_core::{coupling, fields, modesolver, spectra, taper, trap};
use onf_core::{FiberSpec, ModeFamily};

/// One output file, rendered.
pub struct Artifact {
    pub name: String,
    pub content: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn table_artifact(stem: &str, table: &Table, format: Format) -> Artifact {
    match format {
        Format::Csv => Artifact {
            name: format!("{stem}.csv"),
            content: table.to_csv(),
        },
        Format::Json => Artifact {
            name: format!("{stem}.json"),
            content: table.to_json(),
        },
    }
}

fn fiber_from_cfg(cfg: &Cfg) -> Result<FiberSpec, CliError> {
    let radius = cfg.quantity("radius", Unit::Meter).map_err(CliError::Config)?;
    let n_core = cfg.number("n_core").map_err(CliError::Config)?;
    let n_clad = cfg.number_or("n_clad", 1.0).map_err(CliError::Config)?;
    let wavelength = cfg
        .quantity("wavelength", Unit::Meter)
        .map_err(CliError::Config)?;
    FiberSpec::new(radius, n_core, n_clad, wavelength).map_err(CliError::from_core)
}

fn atom_from_cfg(cfg: &Cfg) -> Result<coupling::AtomSpec, CliError> {
    let lambda0 = cfg
        .quantity("transition_wavelength", Unit::Meter)
        .map_err(CliError::Config)?;
    let orientation = cfg
        .vector3_or("orientation", [1.0, 0.0, 0.0])
        .map_err(CliError::Config)?;
    // gamma0 [rad/s] or dipole [C m]: raw SI numbers (outside the unit grammar)
    if let Ok(gamma0) = cfg.number("gamma0") {
        coupling::AtomSpec::from_gamma0(lambda0, gamma0, orientation).map_err(CliError::from_core)
    } else {
        let d = cfg.number("dipole").map_err(|_| {
            CliError::Config("need either \"gamma0\" [rad/s] or \"dipole\" [C m]".into())
        })?;
        coupling::AtomSpec::new(lambda0, d, None, orientation).map_err(CliError::from_core)
    }
}

pub fn run(
    command: &str,
    cfg: &Cfg,
    format: Format,
    verbose: bool,
) -> Result<Vec<Artifact>, CliError> {
    let artifacts = match command {
        "modes" => cmd_modes(cfg, format, verbose)?,
        "neff-curve" => cmd_neff_curve(cfg, format)?,
        "fields" => cmd_fields(cfg, format)?,
        "coupling-sweep" => cmd_coupling_sweep(cfg, format)?,
        "trap" => cmd_trap(cfg, format)?,
        "pull-plan" => cmd_pull_plan(cfg, format, verbose)?,
        "simulate-pull" => cmd_simulate_pull(cfg, format)?,
        "spectrogram" => cmd_spectrogram(cfg, format)?,
        "radius-extract" => cmd_radius_extract(cfg)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown command {other:?}; expected one of modes, fields, neff-curve, \
                 coupling-sweep, trap, pull-plan, simulate-pull, spectrogram, radius-extract"
            )))
        }
    };
    cfg.reject_unknown().map_err(CliError::Config)?;
    Ok(artifacts)
}

fn cmd_modes(cfg: &Cfg, format: Format, verbose: bool) -> Result<Vec<Artifact>, CliError> {
    let fiber = fiber_from_cfg(cfg)?;
    let l_max = cfg.integer_or("l_max", 2).map_err(CliError::Config)? as u32;
    let set = modesolver::solve_modes(&fiber, l_max).map_err(CliError::from_core)?;
    if verbose {
        eprintln!(
            "V = {:.6}; {} guided modes, {} unconverged brackets",
            fiber.v_number(),
            set.modes.len(),
            set.unconverged.len()
        );
    }
    if !set.unconverged.is_empty() {
        for u in &set.unconverged {
            eprintln!(
                "warning: unconverged bracket l = {}, n_eff in [{:.9}, {:.9}]: {}",
                u.l, u.n_eff_lo, u.n_eff_hi, u.reason
            );
        }
    }
    Ok(vec![table_artifact(
        "modes",
        &export::modes_table(&set.modes),
        format,
    )])
}

fn cmd_neff_curve(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let n_core = cfg.number("n_core").map_err(CliError::Config)?;
    let n_clad = cfg.number_or("n_clad", 1.0).map_err(CliError::Config)?;
    let wavelength = cfg
        .quantity_or("wavelength", Unit::Meter, 780e-9)
        .map_err(CliError::Config)?;
    let v_min = cfg.number("v_min").map_err(CliError::Config)?;
    let v_max = cfg.number("v_max").map_err(CliError::Config)?;
    let samples = cfg.integer_or("samples", 200).map_err(CliError::Config)? as usize;
    let l_max = cfg.integer_or("l_max", 2).map_err(CliError::Config)? as u32;
    let template =
        FiberSpec::new(200e-9, n_core, n_clad, wavelength).map_err(CliError::from_core)?;
    let curve = modesolver::neff_curve(&template, (v_min, v_max), samples, l_max)
        .map_err(CliError::from_core)?;
    for v in &curve.violations {
        eprintln!("warning: branch continuity: {v}");
    }
    Ok(vec![table_artifact(
        "neff_curve",
        &export::neff_curve_table(&curve),
        format,
    )])
}

fn cmd_fields(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let fiber = fiber_from_cfg(cfg)?;
    let power = cfg
        .quantity_or("power", Unit::Watt, 1e-3)
        .map_err(CliError::Config)?;
    let family = ModeFamily::parse(&cfg.string_or("mode_family", "HE").map_err(CliError::Config)?)
        .map_err(CliError::from_core)?;
    let l = cfg.integer_or("mode_l", 1).map_err(CliError::Config)? as u32;
    let m = cfg.integer_or("mode_m", 1).map_err(CliError::Config)? as u32;
    let sense = match cfg
        .string_or("sense", "forward")
        .map_err(CliError::Config)?
        .as_str()
    {
        "forward" => PropagationSense::Forward,
        "backward" => PropagationSense::Backward,
        other => {
            return Err(CliError::Config(format!(
                "sense must be \"forward\" or \"backward\", got {other:?}"
            )))
        }
    };
    let extent = cfg
        .quantity_or("grid_extent", Unit::Meter, 3.0 * fiber.radius_a)
        .map_err(CliError::Config)?;
    let n = cfg.integer_or("grid_points", 81).map_err(CliError::Config)? as usize;
    let z = cfg
        .quantity_or("z", Unit::Meter, 0.0)
        .map_err(CliError::Config)?;
    if n < 2 {
        return Err(CliError::Config("grid_points must be at least 2".into()));
    }

    let (xy, mut cyl) = export::cartesian_grid(extent, n);
    for p in cyl.iter_mut() {
        p.2 = z;
    }

    let quasilinear = cfg.bool_or("quasilinear", true).map_err(CliError::Config)?;
    let (samples, surface) = if quasilinear && matches!(family, ModeFamily::HE | ModeFamily::EH) {
        let (plus, minus) = modesolver::solve_rotation_pair(&fiber, family, l, m, power)
            .map_err(CliError::from_core)?;
        let ql = fields::quasilinear(plus, minus, fields::QuasiSign::Plus)
            .map_err(CliError::from_core)?;
        let surface = export::surface_intensity_ring(
            |r, phi| ql.fields_at(sense, r, phi, z, 0.0).0,
            fiber.radius_a,
        );
        (export::quasilinear_grid_samples(&ql, sense, &cyl), surface)
    } else {
        let id = onf_core::ModeId::new(family, l, m, onf_core::Rotation::Plus)
            .map_err(CliError::from_core)?;
        let sol = modesolver::solve_mode(&fiber, &id).map_err(CliError::from_core)?;
        let sol = fields::normalize_any(&sol, power).map_err(CliError::from_core)?;
        let surface = export::surface_intensity_ring(
            |r, phi| fields::fields_at(&sol, sense, r, phi, z, 0.0).0,
            fiber.radius_a,
        );
        (fields::evaluate_fields(&sol, sense, &cyl, 0.0), surface)
    };
    Ok(vec![table_artifact(
        "fields_grid",
        &export::field_grid_table(&samples, &xy, z, surface),
        format,
    )])
}

fn cmd_coupling_sweep(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let n_core = cfg.number("n_core").map_err(CliError::Config)?;
    let n_clad = cfg.number_or("n_clad", 1.0).map_err(CliError::Config)?;
    let atom = atom_from_cfg(cfg)?;
    let r_min = cfg
        .quantity("radius_min", Unit::Meter)
        .map_err(CliError::Config)?;
    let r_max = cfg
        .quantity("radius_max", Unit::Meter)
        .map_err(CliError::Config)?;
    let nr = cfg.integer_or("radius_samples", 20).map_err(CliError::Config)? as usize;
    let d_min = cfg
        .quantity("distance_min", Unit::Meter)
        .map_err(CliError::Config)?;
    let d_max = cfg
        .quantity("distance_max", Unit::Meter)
        .map_err(CliError::Config)?;
    let nd = cfg
        .integer_or("distance_samples", 20)
        .map_err(CliError::Config)? as usize;
    let radiative_factor = cfg
        .number_or("radiative_factor", -1.0)
        .map_err(CliError::Config)?;
    let model = if radiative_factor >= 0.0 {
        coupling::RadiativeModel::Scaled(radiative_factor)
    } else {
        coupling::RadiativeModel::FreeSpace
    };
    if nr < 2 || nd < 1 || !(r_max > r_min) || !(d_max >= d_min) {
        return Err(CliError::Config("bad sweep ranges".into()));
    }
    let template = FiberSpec::new(r_min, n_core, n_clad, atom.transition_wavelength)
        .map_err(CliError::from_core)?;
    let radii: Vec<f64> = (0..nr)
        .map(|i| r_min + (r_max - r_min) * i as f64 / (nr - 1) as f64)
        .collect();
    let distances: Vec<f64> = (0..nd)
        .map(|i| {
            if nd == 1 {
                d_min
            } else {
                d_min + (d_max - d_min) * i as f64 / (nd - 1) as f64
            }
        })
        .collect();
    let rows = coupling::sweep_radius_distance(&template, &atom, &radii, &distances, model)
        .map_err(CliError::from_core)?;
    Ok(vec![table_artifact(
        "coupling_sweep",
        &export::coupling_sweep_table(&rows),
        format,
    )])
}

fn cmd_trap(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let fiber = fiber_from_cfg(cfg)?;
    let atom = atom_from_cfg(cfg)?;
    let atom_mass = cfg.number("atom_mass").map_err(CliError::Config)?;
    let c3 = cfg.number("c3").map_err(|_| {
        CliError::Config(
            "missing required key \"c3\" [J m^3]: the van der Waals coefficient is a required \
             measured input with no default"
                .into(),
        )
    })?;
    let red = TrapBeam::new(
        cfg.quantity("red_wavelength", Unit::Meter)
            .map_err(CliError::Config)?,
        cfg.quantity("red_power", Unit::Watt)
            .map_err(CliError::Config)?,
        cfg.quantity_or("red_azimuth", Unit::Radian, 0.0)
            .map_err(CliError::Config)?,
        BeamConfiguration::StandingWave,
    )
    .map_err(CliError::from_core)?;
    let blue_running = cfg.bool_or("blue_running", true).map_err(CliError::Config)?;
    let blue = TrapBeam::new(
        cfg.quantity("blue_wavelength", Unit::Meter)
            .map_err(CliError::Config)?,
        cfg.quantity("blue_power", Unit::Watt)
            .map_err(CliError::Config)?,
        cfg.quantity_or("blue_azimuth", Unit::Radian, 0.0)
            .map_err(CliError::Config)?,
        if blue_running {
            BeamConfiguration::RunningWave
        } else {
            BeamConfiguration::StandingWave
        },
    )
    .map_err(CliError::from_core)?;
    let config = TrapConfig {
        fiber,
        atom,
        atom_mass,
        red,
        blue,
        c3_vdw: c3,
    };
    let grid = TrapGrid {
        r_offset_min: cfg
            .quantity_or("grid_r_min", Unit::Meter, 5e-9)
            .map_err(CliError::Config)?,
        r_offset_max: cfg
            .quantity_or("grid_r_max", Unit::Meter, 800e-9)
            .map_err(CliError::Config)?,
        n_r: cfg.integer_or("grid_nr", 96).map_err(CliError::Config)? as usize,
        n_phi: cfg.integer_or("grid_nphi", 48).map_err(CliError::Config)? as usize,
        n_z: cfg.integer_or("grid_nz", 24).map_err(CliError::Config)? as usize,
    };
    let profile = trap::total_potential(&config, &grid).map_err(CliError::from_core)?;
    Ok(vec![
        table_artifact("trap_profile", &export::trap_profile_table(&profile), format),
        Artifact {
            name: "trap_summary.json".into(),
            content: export::trap_summary_json(&profile, config.fiber.radius_a),
        },
    ])
}

fn cmd_pull_plan(cfg: &Cfg, format: Format, verbose: bool) -> Result<Vec<Artifact>, CliError> {
    let target = taper::TaperProfile::new(
        cfg.quantity("initial_radius", Unit::Meter)
            .map_err(CliError::Config)?,
        cfg.quantity("angle", Unit::Radian)
            .map_err(CliError::Config)?,
        cfg.quantity("handoff_radius", Unit::Meter)
            .map_err(CliError::Config)?,
        cfg.quantity("waist_radius", Unit::Meter)
            .map_err(CliError::Config)?,
        cfg.quantity("waist_length", Unit::Meter)
            .map_err(CliError::Config)?,
    )
    .map_err(CliError::from_core)?;
    for w in target.warnings() {
        eprintln!("warning: {w}");
    }
    let hot_zone = cfg
        .quantity("hot_zone", Unit::Meter)
        .map_err(CliError::Config)?;
    let velocity = cfg
        .number_or("pull_velocity", taper::DEFAULT_PULL_VELOCITY)
        .map_err(CliError::Config)?;
    let plan = taper::plan_pull_with_velocity(&target, hot_zone, velocity)
        .map_err(CliError::from_core)?;
    if verbose {
        eprintln!(
            "{} steps, total elongation {:.3} mm",
            plan.steps.len(),
            plan.total_elongation() * 1e3
        );
    }
    // forward-simulate the plan for the predicted profile artifact
    let simulated =
        taper::simulate_pull(&plan, target.initial_radius).map_err(CliError::from_core)?;
    let mut target_table = Table::new(vec!["z [m]", "r [m]"]);
    let half_waist = 0.5 * target.waist_length;
    let total = simulated.tracked_length() * 1.05;
    let n_samp = 2000;
    for i in 0..=(2 * n_samp) {
        let z = -total + total * i as f64 / n_samp as f64;
        let r = target.radius_at((z.abs() - half_waist).max(0.0));
        target_table.push(vec![
            export::Cell::Num(z),
            export::Cell::Num(r),
        ]);
    }
    Ok(vec![
        Artifact {
            name: "pull_plan.json".into(),
            content: export::pull_plan_json(&plan),
        },
        table_artifact("target_profile", &target_table, format),
        table_artifact(
            "predicted_profile",
            &export::radius_profile_table(&simulated, 2000),
            format,
        ),
    ])
}

/// Parse a pull-plan JSON produced by the pull-plan command.
fn parse_plan_json(text: &str) -> Result<taper::PullPlan, CliError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("plan file is not valid JSON: {e}")))?;
    let hot_zone = v["hot_zone_width [m]"]
        .as_f64()
        .ok_or_else(|| CliError::Config("plan missing \"hot_zone_width [m]\"".into()))?;
    let t = &v["target"];
    let target = taper::TaperProfile::new(
        t["initial_radius [m]"].as_f64().unwrap_or(0.0),
        t["linear_angle [rad]"].as_f64().unwrap_or(0.0),
        t["handoff_radius [m]"].as_f64().unwrap_or(0.0),
        t["waist_radius [m]"].as_f64().unwrap_or(0.0),
        t["waist_length [m]"].as_f64().unwrap_or(0.0),
    )
    .map_err(CliError::from_core)?;
    let steps_v = v["steps"]
        .as_array()
        .ok_or_else(|| CliError::Config("plan missing \"steps\" array".into()))?;
    let mut steps = Vec::with_capacity(steps_v.len());
    for (i, s) in steps_v.iter().enumerate() {
        steps.push(taper::PullStep {
            velocity: s["velocity [m/s]"]
                .as_f64()
                .ok_or_else(|| CliError::Config(format!("step {i}: missing velocity")))?,
            flame_travel: s["flame_travel [m]"]
                .as_f64()
                .ok_or_else(|| CliError::Config(format!("step {i}: missing flame_travel")))?,
            duration: s["duration [s]"]
                .as_f64()
                .ok_or_else(|| CliError::Config(format!("step {i}: missing duration")))?,
        });
    }
    Ok(taper::PullPlan {
        steps,
        hot_zone_width: hot_zone,
        predicted_profile: target,
    })
}

fn cmd_simulate_pull(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let plan_path = cfg.string("plan_file").map_err(CliError::Config)?;
    let text = std::fs::read_to_string(&plan_path)
        .map_err(|e| CliError::Config(format!("cannot read plan file {plan_path:?}: {e}")))?;
    let plan = parse_plan_json(&text)?;
    let initial = cfg
        .quantity_or(
            "initial_radius",
            Unit::Meter,
            plan.predicted_profile.initial_radius,
        )
        .map_err(CliError::Config)?;
    let profile = taper::simulate_pull(&plan, initial).map_err(CliError::from_core)?;
    let mut artifacts = vec![table_artifact(
        "simulated_profile",
        &export::radius_profile_table(&profile, 2000),
        format,
    )];

    // optional synthetic two-mode transmission trace of the same pull
    if let Ok(pair) = cfg.mode_pair("probe_pair") {
        let probe_lambda = cfg
            .quantity("probe_wavelength", Unit::Meter)
            .map_err(CliError::Config)?;
        let n_core = cfg.number("n_core").map_err(CliError::Config)?;
        let n_clad = cfg.number_or("n_clad", 1.0).map_err(CliError::Config)?;
        let eta = cfg.number_or("eta", 0.05).map_err(CliError::Config)?;
        let ds = cfg
            .quantity_or("sample_spacing", Unit::Meter, 1e-6)
            .map_err(CliError::Config)?;
        let mode_a = parse_mode_label(&pair.0).map_err(CliError::Config)?;
        let mode_b = parse_mode_label(&pair.1).map_err(CliError::Config)?;
        let template = FiberSpec::new(plan.predicted_profile.waist_radius, n_core, n_clad, probe_lambda)
            .map_err(CliError::from_core)?;
        let beat = taper::BeatTable::build(
            &template,
            (&mode_a, &mode_b),
            0.95 * plan.predicted_profile.waist_radius,
            1.05 * initial,
            160,
        )
        .map_err(CliError::from_core)?;
        let sig = taper::transmission_signal(&plan, initial, &beat, eta, ds)
            .map_err(CliError::from_core)?;
        artifacts.push(table_artifact(
            "transmission",
            &export::transmission_table(&sig),
            format,
        ));
    }
    Ok(artifacts)
}

/// Read a two-column (elongation, value) CSV with a header row.
fn read_signal_csv(text: &str) -> Result<(Vec<f64>, f64, f64), CliError> {
    let mut elong = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue; // header
        }
        let mut parts = line.split(',');
        let s: f64 = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(|| CliError::Config(format!("signal line {} malformed", i + 1)))?;
        let v: f64 = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(|| CliError::Config(format!("signal line {} malformed", i + 1)))?;
        elong.push(s);
        values.push(v);
    }
    if values.len() < 16 {
        return Err(CliError::Config(
            "signal file has fewer than 16 samples".into(),
        ));
    }
    let ds = (elong[elong.len() - 1] - elong[0]) / (elong.len() - 1) as f64;
    for w in elong.windows(2) {
        if ((w[1] - w[0]) - ds).abs() > 1e-3 * ds.abs() {
            return Err(CliError::Config(
                "signal samples are not uniformly spaced in elongation".into(),
            ));
        }
    }
    Ok((values, ds, elong[0]))
}

fn cmd_spectrogram(cfg: &Cfg, format: Format) -> Result<Vec<Artifact>, CliError> {
    let path = cfg.string("signal_file").map_err(CliError::Config)?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read signal file {path:?}: {e}")))?;
    let (values, ds, start) = read_signal_csv(&text)?;
    let window = cfg
        .quantity("window", Unit::Meter)
        .map_err(CliError::Config)?;
    let hop = cfg.quantity("hop", Unit::Meter).map_err(CliError::Config)?;
    let count = cfg.integer_or("ridge_count", 3).map_err(CliError::Config)? as usize;
    let spec = spectra::spectrogram(&values, ds, start, window, hop).map_err(CliError::from_core)?;
    let ridges = spectra::extract_ridges(&spec, count).map_err(CliError::from_core)?;
    Ok(vec![
        table_artifact("spectrogram", &export::spectrogram_table(&spec), format),
        table_artifact("ridges", &export::ridge_table(&ridges), format),
    ])
}

fn cmd_radius_extract(cfg: &Cfg) -> Result<Vec<Artifact>, CliError> {
    let n_core = cfg.number("n_core").map_err(CliError::Config)?;
    let n_clad = cfg.number_or("n_clad", 1.0).map_err(CliError::Config)?;
    let wavelength = cfg
        .quantity("wavelength", Unit::Meter)
        .map_err(CliError::Config)?;
    let (label_a, label_b) = cfg.mode_pair("pair").map_err(CliError::Config)?;
    let mode_a = parse_mode_label(&label_a).map_err(CliError::Config)?;
    let mode_b = parse_mode_label(&label_b).map_err(CliError::Config)?;
    // measured beat frequency in cycles/m (outside the unit grammar)
    let freq = cfg.number("measured_frequency").map_err(CliError::Config)?;
    let s_min = cfg
        .quantity("search_min", Unit::Meter)
        .map_err(CliError::Config)?;
    let s_max = cfg
        .quantity("search_max", Unit::Meter)
        .map_err(CliError::Config)?;
    let template =
        FiberSpec::new(0.5 * (s_min + s_max), n_core, n_clad, wavelength).map_err(CliError::from_core)?;
    let radius =
        spectra::radius_from_beat(freq, (&mode_a, &mode_b), &template, (s_min, s_max))
            .map_err(CliError::from_core)?;
    let beat_len =
        spectra::beat_length(&template.at_radius(radius).map_err(CliError::from_core)?, (&mode_a, &mode_b))
            .map_err(CliError::from_core)?;
    Ok(vec![Artifact {
        name: "radius.json".into(),
        content: format!(
            "{{\n  \"pair\": [\"{label_a}\", \"{label_b}\"],\n  \"measured_frequency [cycles/m]\": {},\n  \
             \"radius [m]\": {},\n  \"beat_length [m]\": {}\n}}",
            export::format_float(freq),
            export::format_float(radius),
            export::format_float(beat_len),
        ),
    }])
}
