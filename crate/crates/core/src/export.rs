//! Tabular artifact construction: every emitted table carries unit-labeled
//! column headers and renders to CSV or JSON rows deterministically (floats
//! are written in shortest round-trip form, so identical data gives
//! byte-identical files).

use crate::coupling::SweepRow;
use crate::fiber::ModeSolution;
use crate::fields::{FieldSample, PropagationSense};
use crate::modesolver::NeffCurve;
use crate::spectra::{BeatRidge, Spectrogram};
use crate::taper::{PullPlan, RadiusProfile};
use crate::trap::TrapProfile;

/// A column-labeled table of mixed string/number cells.
#[derive(Debug, Clone)]
pub struct Table {
    /// Column names, each carrying its unit in square brackets.
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(v) => {
                if v.is_finite() {
                    format_float(*v)
                } else {
                    format!("\"{v}\"")
                }
            }
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => format!("\"{s}\""),
        }
    }
}

/// Shortest round-trip decimal; deterministic across runs.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:e}")
    }
}

impl Table {
    pub fn new<S: Into<String>>(headers: Vec<S>) -> Self {
        Table {
            headers: headers.into_iter().map(|h| h.into()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| c.csv()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by header name.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            let fields: Vec<String> = self
                .headers
                .iter()
                .zip(row.iter())
                .map(|(h, c)| format!("\"{h}\": {}", c.json()))
                .collect();
            out.push_str("  {");
            out.push_str(&fields.join(", "));
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push(']');
        out
    }
}

/// Mode list table: one row per solved mode.
pub fn modes_table(modes: &[ModeSolution]) -> Table {
    let mut t = Table::new(vec![
        "family",
        "l",
        "m",
        "rotation",
        "n_eff",
        "beta [rad/m]",
        "h [rad/m]",
        "q [rad/m]",
        "s",
        "power [W]",
    ]);
    for m in modes {
        t.push(vec![
            Cell::Text(m.mode.family.as_str().into()),
            Cell::Int(m.mode.l as i64),
            Cell::Int(m.mode.m as i64),
            Cell::Text(m.mode.rotation.as_str().into()),
            Cell::Num(m.n_eff),
            Cell::Num(m.beta_prop),
            Cell::Num(m.h),
            Cell::Num(m.q),
            Cell::Num(m.s_param),
            Cell::Num(m.power),
        ]);
    }
    t
}

/// Effective-index curve table.
pub fn neff_curve_table(curve: &NeffCurve) -> Table {
    let mut t = Table::new(vec!["V", "family", "l", "m", "n_eff"]);
    for row in &curve.rows {
        t.push(vec![
            Cell::Num(row.v),
            Cell::Text(row.mode.family.as_str().into()),
            Cell::Int(row.mode.l as i64),
            Cell::Int(row.mode.m as i64),
            Cell::Num(row.n_eff),
        ]);
    }
    t
}

/// Cartesian field-grid table: positions, all six complex components, and
/// the intensity normalized both to its grid peak and to the surface
/// value (the two conventions in circulation for component plots).
pub fn field_grid_table(
    samples: &[FieldSample],
    xy: &[(f64, f64)],
    z: f64,
    surface_intensity: f64,
) -> Table {
    let mut t = Table::new(vec![
        "x [m]",
        "y [m]",
        "z [m]",
        "Re_Ex [V/m]",
        "Im_Ex [V/m]",
        "Re_Ey [V/m]",
        "Im_Ey [V/m]",
        "Re_Ez [V/m]",
        "Im_Ez [V/m]",
        "Re_Hx [A/m]",
        "Im_Hx [A/m]",
        "Re_Hy [A/m]",
        "Im_Hy [A/m]",
        "Re_Hz [A/m]",
        "Im_Hz [A/m]",
        "E_sq [V^2/m^2]",
        "E_sq_over_peak",
        "E_sq_over_surface",
    ]);
    let peak = samples
        .iter()
        .map(|s| s.e.iter().map(|c| c.norm_sqr()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    for (s, &(x, y)) in samples.iter().zip(xy.iter()) {
        let phi = s.position.1;
        let (c, sn) = (phi.cos(), phi.sin());
        let ex = s.e[0] * c - s.e[1] * sn;
        let ey = s.e[0] * sn + s.e[1] * c;
        let hx = s.h[0] * c - s.h[1] * sn;
        let hy = s.h[0] * sn + s.h[1] * c;
        let esq: f64 = s.e.iter().map(|v| v.norm_sqr()).sum();
        t.push(vec![
            Cell::Num(x),
            Cell::Num(y),
            Cell::Num(z),
            Cell::Num(ex.re),
            Cell::Num(ex.im),
            Cell::Num(ey.re),
            Cell::Num(ey.im),
            Cell::Num(s.e[2].re),
            Cell::Num(s.e[2].im),
            Cell::Num(hx.re),
            Cell::Num(hx.im),
            Cell::Num(hy.re),
            Cell::Num(hy.im),
            Cell::Num(s.h[2].re),
            Cell::Num(s.h[2].im),
            Cell::Num(esq),
            Cell::Num(if peak > 0.0 { esq / peak } else { 0.0 }),
            Cell::Num(if surface_intensity > 0.0 {
                esq / surface_intensity
            } else {
                0.0
            }),
        ]);
    }
    t
}

/// Coupling sweep table (the data behind alpha/beta/C1/Purcell maps).
pub fn coupling_sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(vec![
        "radius [m]",
        "distance [m]",
        "alpha",
        "beta_c",
        "C1",
        "purcell",
    ]);
    for r in rows {
        t.push(vec![
            Cell::Num(r.radius),
            Cell::Num(r.distance),
            Cell::Num(r.alpha),
            Cell::Num(r.beta_c),
            Cell::Num(r.c1),
            Cell::Num(r.purcell),
        ]);
    }
    t
}

/// Trap potential samples in microkelvin.
pub fn trap_profile_table(profile: &TrapProfile) -> Table {
    let mut t = Table::new(vec![
        "r [m]",
        "phi [rad]",
        "z [m]",
        "U_red [uK]",
        "U_blue [uK]",
        "U_vdw [uK]",
        "U_total [uK]",
    ]);
    let to_uk = 1e6 / crate::constants::K_B;
    let mut idx = 0;
    for &r in &profile.r {
        for &phi in &profile.phi {
            for &z in &profile.z {
                let s = profile.samples[idx];
                idx += 1;
                t.push(vec![
                    Cell::Num(r),
                    Cell::Num(phi),
                    Cell::Num(z),
                    Cell::Num(s[0] * to_uk),
                    Cell::Num(s[1] * to_uk),
                    Cell::Num(s[2] * to_uk),
                    Cell::Num(s[3] * to_uk),
                ]);
            }
        }
    }
    t
}

/// Trap summary key-value JSON (minimum, depth, contrast, frequencies).
pub fn trap_summary_json(profile: &TrapProfile, radius_a: f64) -> String {
    let (r0, p0, z0) = profile.minimum_position;
    let (wr, wp, wz) = profile.trap_frequencies;
    format!(
        "{{\n  \"minimum_r [m]\": {},\n  \"minimum_phi [rad]\": {},\n  \"minimum_z [m]\": {},\n  \
         \"distance_from_surface [m]\": {},\n  \"u_min [J]\": {},\n  \"depth [J]\": {},\n  \
         \"depth [uK]\": {},\n  \"lattice_contrast_intensity\": {},\n  \
         \"lattice_contrast_potential\": {},\n  \"omega_r [rad/s]\": {},\n  \
         \"omega_phi [rad/s]\": {},\n  \"omega_z [rad/s]\": {}\n}}",
        format_float(r0),
        format_float(p0),
        format_float(z0),
        format_float(r0 - radius_a),
        format_float(profile.u_min),
        format_float(profile.depth),
        format_float(profile.depth_uk()),
        format_float(profile.lattice_contrast),
        format_float(profile.lattice_contrast_potential),
        format_float(wr),
        format_float(wp),
        format_float(wz),
    )
}

/// Pull-plan JSON: step list plus metadata.
pub fn pull_plan_json(plan: &PullPlan) -> String {
    let mut out = String::from("{\n");
    let p = &plan.predicted_profile;
    out.push_str(&format!(
        "  \"hot_zone_width [m]\": {},\n  \"total_elongation [m]\": {},\n  \
         \"target\": {{\"initial_radius [m]\": {}, \"linear_angle [rad]\": {}, \
         \"handoff_radius [m]\": {}, \"waist_radius [m]\": {}, \"waist_length [m]\": {}}},\n",
        format_float(plan.hot_zone_width),
        format_float(plan.total_elongation()),
        format_float(p.initial_radius),
        format_float(p.linear_angle),
        format_float(p.handoff_radius),
        format_float(p.waist_radius),
        format_float(p.waist_length),
    ));
    out.push_str("  \"steps\": [\n");
    for (i, s) in plan.steps.iter().enumerate() {
        out.push_str(&format!(
            "    {{\"velocity [m/s]\": {}, \"flame_travel [m]\": {}, \"duration [s]\": {}}}{}\n",
            format_float(s.velocity),
            format_float(s.flame_travel),
            format_float(s.duration),
            if i + 1 < plan.steps.len() { "," } else { "" }
        ));
    }
    out.push_str("  ]\n}");
    out
}

/// Taper radius profile table.
pub fn radius_profile_table(profile: &RadiusProfile, points_per_side: usize) -> Table {
    let mut t = Table::new(vec!["z [m]", "r [m]"]);
    for (z, r) in profile.sampled(points_per_side) {
        t.push(vec![Cell::Num(z), Cell::Num(r)]);
    }
    t
}

/// Spectrogram long-format table (center, frequency, psd).
pub fn spectrogram_table(spec: &Spectrogram) -> Table {
    let mut t = Table::new(vec![
        "center [m]",
        "frequency [cycles/m]",
        "psd [signal^2 m]",
    ]);
    for (w, &center) in spec.window_centers.iter().enumerate() {
        for (k, &f) in spec.frequency_bins.iter().enumerate() {
            t.push(vec![Cell::Num(center), Cell::Num(f), Cell::Num(spec.psd[w][k])]);
        }
    }
    t
}

/// Ridge table: one row per tracked point.
pub fn ridge_table(ridges: &[BeatRidge]) -> Table {
    let mut t = Table::new(vec![
        "ridge",
        "center [m]",
        "frequency [cycles/m]",
        "amplitude [signal^2 m]",
        "label",
    ]);
    for (i, ridge) in ridges.iter().enumerate() {
        for &(c, f, a) in &ridge.points {
            t.push(vec![
                Cell::Int(i as i64),
                Cell::Num(c),
                Cell::Num(f),
                Cell::Num(a),
                Cell::Text(ridge.label.clone().unwrap_or_default()),
            ]);
        }
    }
    t
}

/// Transmission-signal table.
pub fn transmission_table(sig: &crate::taper::TransmissionSignal) -> Table {
    let mut t = Table::new(vec![
        "elongation [m]",
        "transmission",
        "instantaneous_frequency [cycles/m]",
        "waist_radius [m]",
    ]);
    for i in 0..sig.elongation.len() {
        t.push(vec![
            Cell::Num(sig.elongation[i]),
            Cell::Num(sig.transmission[i]),
            Cell::Num(sig.instantaneous_frequency[i]),
            Cell::Num(sig.waist_radius[i]),
        ]);
    }
    t
}

/// Cartesian sampling helper for field grids: (x, y) positions mapped to
/// cylindrical points at fixed z.
pub fn cartesian_grid(extent: f64, n: usize) -> (Vec<(f64, f64)>, Vec<(f64, f64, f64)>) {
    let mut xy = Vec::with_capacity(n * n);
    let mut cyl = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let x = -extent + 2.0 * extent * ix as f64 / (n - 1) as f64;
            let y = -extent + 2.0 * extent * iy as f64 / (n - 1) as f64;
            xy.push((x, y));
            cyl.push(((x * x + y * y).sqrt(), y.atan2(x), 0.0));
        }
    }
    (xy, cyl)
}

/// Peak intensity |E|^2 on the exterior surface ring of a field evaluator.
pub fn surface_intensity_ring<F>(eval: F, radius_a: f64) -> f64
where
    F: Fn(f64, f64) -> [num_complex::Complex64; 3],
{
    let mut peak = 0.0_f64;
    for i in 0..64 {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
        let e = eval(radius_a, phi);
        peak = peak.max(e.iter().map(|c| c.norm_sqr()).sum());
    }
    peak
}

/// Evaluate a quasilinear mode on a Cartesian grid (z = 0 plane).
pub fn quasilinear_grid_samples(
    ql: &crate::fields::QuasilinearMode,
    sense: PropagationSense,
    points: &[(f64, f64, f64)],
) -> Vec<FieldSample> {
    points
        .iter()
        .map(|&(r, phi, z)| ql.sample(sense, r, phi, z, 0.0))
        .collect()
}
