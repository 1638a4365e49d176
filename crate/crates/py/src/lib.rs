//! Python extension module exposing the main nanofiber-workbench types and
//! operations: mode solving, field evaluation, coupling figures, trap
//! characterization, pull planning, and beat spectroscopy.
//!
//! Build with `cargo build -p onf-py --release`, then import the produced
//! cdylib as `onfpy` (see python/smoke_test.py for a loader).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use onf_core::fields::{PropagationSense, QuasiSign};
use onf_core::trap::{BeamConfiguration, TrapBeam, TrapConfig, TrapGrid};
use onf_core::{coupling, fields, modesolver, spectra, taper, trap};

fn err(e: onf_core::Error) -> PyErr {
    match &e {
        onf_core::Error::InvalidInput(_) => PyValueError::new_err(e.to_string()),
        onf_core::Error::Solver(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_mode(label: &str) -> PyResult<onf_core::ModeId> {
    let s = label.trim();
    if s.len() < 4 {
        return Err(PyValueError::new_err(format!(
            "mode label {label:?} too short (e.g. \"HE11\")"
        )));
    }
    let family = onf_core::ModeFamily::parse(&s[..2]).map_err(err)?;
    let digits = &s[2..];
    if !digits.chars().all(|c| c.is_ascii_digit()) || digits.len() < 2 {
        return Err(PyValueError::new_err(format!(
            "mode label {label:?} must end in l and m digits"
        )));
    }
    let l: u32 = digits[..1].parse().unwrap();
    let m: u32 = digits[1..].parse().unwrap();
    onf_core::ModeId::new(family, l, m, onf_core::Rotation::Plus).map_err(err)
}

/// Step-index fiber description (SI units).
#[pyclass(name = "FiberSpec", from_py_object)]
#[derive(Clone)]
struct PyFiberSpec {
    inner: onf_core::FiberSpec,
}

#[pymethods]
impl PyFiberSpec {
    #[new]
    fn new(radius_a: f64, n_core: f64, n_clad: f64, wavelength: f64) -> PyResult<Self> {
        Ok(PyFiberSpec {
            inner: onf_core::FiberSpec::new(radius_a, n_core, n_clad, wavelength).map_err(err)?,
        })
    }

    #[getter]
    fn radius_a(&self) -> f64 {
        self.inner.radius_a
    }

    #[getter]
    fn n_core(&self) -> f64 {
        self.inner.n_core
    }

    #[getter]
    fn n_clad(&self) -> f64 {
        self.inner.n_clad
    }

    #[getter]
    fn wavelength(&self) -> f64 {
        self.inner.wavelength
    }

    fn v_number(&self) -> f64 {
        self.inner.v_number()
    }

    fn at_radius(&self, radius_a: f64) -> PyResult<Self> {
        Ok(PyFiberSpec {
            inner: self.inner.at_radius(radius_a).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "FiberSpec(radius_a={:.4e}, n_core={}, n_clad={}, wavelength={:.4e})",
            self.inner.radius_a, self.inner.n_core, self.inner.n_clad, self.inner.wavelength
        )
    }
}

/// One guided mode (read-only view).
#[pyclass(name = "ModeSolution")]
struct PyModeSolution {
    inner: onf_core::ModeSolution,
}

#[pymethods]
impl PyModeSolution {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.mode.family.as_str()
    }

    #[getter]
    fn l(&self) -> u32 {
        self.inner.mode.l
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.mode.m
    }

    #[getter]
    fn rotation(&self) -> &'static str {
        self.inner.mode.rotation.as_str()
    }

    #[getter]
    fn n_eff(&self) -> f64 {
        self.inner.n_eff
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta_prop
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    #[getter]
    fn s_param(&self) -> f64 {
        self.inner.s_param
    }

    #[getter]
    fn power(&self) -> f64 {
        self.inner.power
    }

    fn __repr__(&self) -> String {
        format!("ModeSolution({}, n_eff={:.9})", self.inner.mode, self.inner.n_eff)
    }
}

/// All guided modes up to azimuthal order l_max, sorted by descending
/// effective index.
#[pyfunction]
fn solve_modes(fiber: &PyFiberSpec, l_max: u32) -> PyResult<Vec<PyModeSolution>> {
    let set = modesolver::solve_modes(&fiber.inner, l_max).map_err(err)?;
    Ok(set
        .modes
        .into_iter()
        .map(|m| PyModeSolution { inner: m })
        .collect())
}

/// Effective index of one labeled mode (e.g. "HE11").
#[pyfunction]
fn solve_neff(fiber: &PyFiberSpec, mode: &str) -> PyResult<f64> {
    modesolver::solve_neff(&fiber.inner, &parse_mode(mode)?).map_err(err)
}

/// d(beta)/d(omega) of a labeled mode [s/m].
#[pyfunction]
fn dbeta_domega(fiber: &PyFiberSpec, mode: &str) -> PyResult<f64> {
    modesolver::dbeta_domega(&fiber.inner, &parse_mode(mode)?).map_err(err)
}

/// Complex E and H of the quasilinearly polarized fundamental-family mode
/// at a point: returns ((E_r, E_phi, E_z), (H_r, H_phi, H_z)).
#[pyfunction]
#[pyo3(signature = (fiber, mode, power, r, phi, z, forward=true))]
fn quasilinear_field(
    fiber: &PyFiberSpec,
    mode: &str,
    power: f64,
    r: f64,
    phi: f64,
    z: f64,
    forward: bool,
) -> PyResult<([Complex64; 3], [Complex64; 3])> {
    let id = parse_mode(mode)?;
    let (plus, minus) =
        modesolver::solve_rotation_pair(&fiber.inner, id.family, id.l, id.m, power).map_err(err)?;
    let ql = fields::quasilinear(plus, minus, QuasiSign::Plus).map_err(err)?;
    let sense = if forward {
        PropagationSense::Forward
    } else {
        PropagationSense::Backward
    };
    Ok(ql.fields_at(sense, r, phi, z, 0.0))
}

/// Atom-photon coupling report for the fundamental mode as a dict.
#[pyfunction]
#[pyo3(signature = (fiber, transition_wavelength, gamma0, surface_distance,
                    orientation=(1.0, 0.0, 0.0), radiative_factor=None))]
#[allow(clippy::too_many_arguments)]
fn coupling_report(
    py: Python<'_>,
    fiber: &PyFiberSpec,
    transition_wavelength: f64,
    gamma0: f64,
    surface_distance: f64,
    orientation: (f64, f64, f64),
    radiative_factor: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let atom = coupling::AtomSpec::from_gamma0(
        transition_wavelength,
        gamma0,
        [orientation.0, orientation.1, orientation.2],
    )
    .map_err(err)?;
    let model = match radiative_factor {
        Some(f) => coupling::RadiativeModel::Scaled(f),
        None => coupling::RadiativeModel::FreeSpace,
    };
    let rep = coupling::coupling_report(
        &fiber.inner,
        &atom,
        fiber.inner.radius_a + surface_distance,
        model,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("g", rep.g)?;
    d.set_item("gamma0", rep.gamma0)?;
    d.set_item("gamma1d", rep.gamma1d)?;
    d.set_item("gamma_tot", rep.gamma_tot)?;
    d.set_item("alpha", rep.alpha_enh)?;
    d.set_item("beta_c", rep.beta_c)?;
    d.set_item("c1", rep.c1)?;
    d.set_item("purcell", rep.purcell)?;
    d.set_item("od_single", rep.od_single)?;
    d.set_item("mode_area", rep.mode_area)?;
    d.set_item("atom_area", rep.atom_area)?;
    Ok(d.into())
}

/// Two-color trap characterization as a dict.
#[pyfunction]
#[pyo3(signature = (fiber, transition_wavelength, gamma0, atom_mass, c3,
                    red_wavelength, red_power, blue_wavelength, blue_power,
                    blue_azimuth=0.0, coarse=true))]
#[allow(clippy::too_many_arguments)]
fn trap_summary(
    py: Python<'_>,
    fiber: &PyFiberSpec,
    transition_wavelength: f64,
    gamma0: f64,
    atom_mass: f64,
    c3: f64,
    red_wavelength: f64,
    red_power: f64,
    blue_wavelength: f64,
    blue_power: f64,
    blue_azimuth: f64,
    coarse: bool,
) -> PyResult<Py<PyDict>> {
    let atom =
        coupling::AtomSpec::from_gamma0(transition_wavelength, gamma0, [1.0, 0.0, 0.0])
            .map_err(err)?;
    let config = TrapConfig {
        fiber: fiber.inner,
        atom,
        atom_mass,
        red: TrapBeam::new(red_wavelength, red_power, 0.0, BeamConfiguration::StandingWave)
            .map_err(err)?,
        blue: TrapBeam::new(
            blue_wavelength,
            blue_power,
            blue_azimuth,
            BeamConfiguration::RunningWave,
        )
        .map_err(err)?,
        c3_vdw: c3,
    };
    let grid = if coarse {
        TrapGrid {
            n_r: 64,
            n_phi: 24,
            n_z: 16,
            ..TrapGrid::default()
        }
    } else {
        TrapGrid::default()
    };
    let profile = trap::total_potential(&config, &grid).map_err(err)?;
    let d = PyDict::new(py);
    let (r0, p0, z0) = profile.minimum_position;
    d.set_item("minimum_r", r0)?;
    d.set_item("minimum_phi", p0)?;
    d.set_item("minimum_z", z0)?;
    d.set_item("distance_from_surface", r0 - fiber.inner.radius_a)?;
    d.set_item("depth_j", profile.depth)?;
    d.set_item("depth_uk", profile.depth_uk())?;
    d.set_item("lattice_contrast", profile.lattice_contrast)?;
    d.set_item(
        "trap_frequencies",
        (
            profile.trap_frequencies.0,
            profile.trap_frequencies.1,
            profile.trap_frequencies.2,
        ),
    )?;
    Ok(d.into())
}

/// Plan a heat-and-pull run; returns a dict with the step list.
#[pyfunction]
fn plan_pull(
    py: Python<'_>,
    initial_radius: f64,
    angle: f64,
    handoff_radius: f64,
    waist_radius: f64,
    waist_length: f64,
    hot_zone_width: f64,
) -> PyResult<Py<PyDict>> {
    let target = taper::TaperProfile::new(
        initial_radius,
        angle,
        handoff_radius,
        waist_radius,
        waist_length,
    )
    .map_err(err)?;
    let plan = taper::plan_pull(&target, hot_zone_width).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("hot_zone_width", plan.hot_zone_width)?;
    d.set_item("total_elongation", plan.total_elongation())?;
    let steps = PyList::empty(py);
    for s in &plan.steps {
        steps.append((s.velocity, s.flame_travel, s.duration))?;
    }
    d.set_item("steps", steps)?;
    Ok(d.into())
}

/// Forward-simulate a pull plan; returns sampled (z, r) pairs.
#[pyfunction]
#[pyo3(signature = (steps, hot_zone_width, initial_radius, points=2000))]
fn simulate_pull(
    steps: Vec<(f64, f64, f64)>,
    hot_zone_width: f64,
    initial_radius: f64,
    points: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let plan = taper::PullPlan {
        steps: steps
            .into_iter()
            .map(|(velocity, flame_travel, duration)| taper::PullStep {
                velocity,
                flame_travel,
                duration,
            })
            .collect(),
        hot_zone_width,
        predicted_profile: taper::TaperProfile::new(
            initial_radius,
            1e-3,
            initial_radius,
            initial_radius * 0.5,
            hot_zone_width,
        )
        .map_err(err)?,
    };
    let profile = taper::simulate_pull(&plan, initial_radius).map_err(err)?;
    Ok(profile.sampled(points))
}

/// Beat length 2 pi / |beta_1 - beta_2| of a labeled mode pair [m].
#[pyfunction]
fn beat_length(fiber: &PyFiberSpec, mode_a: &str, mode_b: &str) -> PyResult<f64> {
    spectra::beat_length(&fiber.inner, (&parse_mode(mode_a)?, &parse_mode(mode_b)?)).map_err(err)
}

/// Spatial beat frequency of a labeled mode pair [cycles/m].
#[pyfunction]
fn beat_frequency(fiber: &PyFiberSpec, mode_a: &str, mode_b: &str) -> PyResult<f64> {
    spectra::beat_frequency(&fiber.inner, (&parse_mode(mode_a)?, &parse_mode(mode_b)?))
        .map_err(err)
}

/// Invert a measured beat frequency to the fiber radius [m].
#[pyfunction]
fn radius_from_beat(
    fiber: &PyFiberSpec,
    mode_a: &str,
    mode_b: &str,
    measured_frequency: f64,
    search_min: f64,
    search_max: f64,
) -> PyResult<f64> {
    spectra::radius_from_beat(
        measured_frequency,
        (&parse_mode(mode_a)?, &parse_mode(mode_b)?),
        &fiber.inner,
        (search_min, search_max),
    )
    .map_err(err)
}

/// Gabor spectrogram of a uniformly sampled signal; returns
/// (window_centers, frequency_bins, psd rows).
#[pyfunction]
fn spectrogram(
    values: Vec<f64>,
    sample_spacing: f64,
    start: f64,
    window_width: f64,
    hop: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    let s = spectra::spectrogram(&values, sample_spacing, start, window_width, hop).map_err(err)?;
    Ok((s.window_centers, s.frequency_bins, s.psd))
}

#[pymodule]
fn onfpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFiberSpec>()?;
    m.add_class::<PyModeSolution>()?;
    m.add_function(wrap_pyfunction!(solve_modes, m)?)?;
    m.add_function(wrap_pyfunction!(solve_neff, m)?)?;
    m.add_function(wrap_pyfunction!(dbeta_domega, m)?)?;
    m.add_function(wrap_pyfunction!(quasilinear_field, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_report, m)?)?;
    m.add_function(wrap_pyfunction!(trap_summary, m)?)?;
    m.add_function(wrap_pyfunction!(plan_pull, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pull, m)?)?;
    m.add_function(wrap_pyfunction!(beat_length, m)?)?;
    m.add_function(wrap_pyfunction!(beat_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(radius_from_beat, m)?)?;
    m.add_function(wrap_pyfunction!(spectrogram, m)?)?;
    Ok(())
}
