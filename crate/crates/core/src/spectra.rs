//! Gabor (Gaussian-windowed short-time Fourier) analysis of transmission
//! traces, beat-ridge extraction, and inversion of mode-pair beat
//! frequencies to the fiber radius.
//!
//! Spectrogram conventions: per window the signal is mean-removed,
//! multiplied by a Gaussian of sigma = width/6 truncated at the window
//! edges, zero-padded by 4x, and squared into a one-sided power spectral
//! density normalized so the per-window Parseval identity
//! `sum psd df = sum x_windowed^2 ds` holds exactly. Peak positions use
//! parabolic interpolation for sub-bin resolution.

use crate::error::Error;
use crate::fiber::{FiberSpec, ModeId};
use crate::modesolver::solve_neff;
use crate::numerics::parabolic_peak_offset;
use crate::Result;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Power spectral density over sliding windows.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    /// Window centers [m of elongation].
    pub window_centers: Vec<f64>,
    /// Frequency bins [cycles/m].
    pub frequency_bins: Vec<f64>,
    /// psd[window][bin], units signal^2 per (cycles/m).
    pub psd: Vec<Vec<f64>>,
    /// Per-window energy of the detrended, windowed samples (Parseval
    /// reference): sum x^2 ds.
    pub window_energy: Vec<f64>,
}

impl Spectrogram {
    pub fn bin_width(&self) -> f64 {
        self.frequency_bins[1] - self.frequency_bins[0]
    }
}

/// One tracked spectral ridge.
#[derive(Debug, Clone)]
pub struct BeatRidge {
    /// (window center [m], frequency [cycles/m], psd amplitude).
    pub points: Vec<(f64, f64, f64)>,
    /// Mode-pair label, filled by the caller after identification.
    pub label: Option<String>,
}

impl BeatRidge {
    pub fn mean_amplitude(&self) -> f64 {
        self.points.iter().map(|p| p.2).sum::<f64>() / self.points.len() as f64
    }
}

/// Gaussian-windowed STFT of a uniformly sampled signal.
///
/// `values` are samples spaced `sample_spacing` apart starting at
/// `start`; `window_width` and `hop` are in the same length units.
pub fn spectrogram(
    values: &[f64],
    sample_spacing: f64,
    start: f64,
    window_width: f64,
    hop: f64,
) -> Result<Spectrogram> {
    if !(sample_spacing > 0.0 && window_width > 0.0 && hop > 0.0) {
        return Err(Error::InvalidInput(
            "sample spacing, window width and hop must be positive".into(),
        ));
    }
    let n_win = (window_width / sample_spacing).round() as usize;
    if n_win < 8 {
        return Err(Error::InvalidInput(
            "window spans fewer than 8 samples".into(),
        ));
    }
    if values.len() < n_win + (hop / sample_spacing).round() as usize {
        return Err(Error::SignalTooShort(format!(
            "signal has {} samples, need at least {} for two windows",
            values.len(),
            n_win + (hop / sample_spacing).round() as usize
        )));
    }
    let hop_n = ((hop / sample_spacing).round() as usize).max(1);
    let n_fft = (4 * n_win).next_power_of_two();
    let sigma = window_width / 6.0;
    let window: Vec<f64> = (0..n_win)
        .map(|i| {
            let x = (i as f64 - 0.5 * (n_win - 1) as f64) * sample_spacing;
            (-0.5 * (x / sigma).powi(2)).exp()
        })
        .collect();

    let starts: Vec<usize> = (0..)
        .map(|w| w * hop_n)
        .take_while(|s| s + n_win <= values.len())
        .collect();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_fft);

    let n_bins = n_fft / 2 + 1;
    let df = 1.0 / (n_fft as f64 * sample_spacing);

    let rows: Vec<(f64, Vec<f64>, f64)> = starts
        .par_iter()
        .map(|&s0| {
            let chunk = &values[s0..s0 + n_win];
            let mean = chunk.iter().sum::<f64>() / n_win as f64;
            let mut buf: Vec<Complex64> = (0..n_fft)
                .map(|i| {
                    if i < n_win {
                        Complex64::new((chunk[i] - mean) * window[i], 0.0)
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect();
            let energy: f64 = buf.iter().map(|c| c.re * c.re).sum::<f64>() * sample_spacing;
            fft.process(&mut buf);
            // one-sided psd, Parseval-normalized:
            // sum_k c_k |X_k|^2 ds^2 * df = sum_n x_n^2 ds
            let mut psd: Vec<f64> = (0..n_bins)
                .map(|k| {
                    let c = if k == 0 || (n_fft % 2 == 0 && k == n_fft / 2) {
                        1.0
                    } else {
                        2.0
                    };
                    c * buf[k].norm_sqr() * sample_spacing * sample_spacing
                })
                .collect();
            // guard against negative zeros
            for p in psd.iter_mut() {
                if *p < 0.0 {
                    *p = 0.0;
                }
            }
            let center = start + (s0 as f64 + 0.5 * (n_win - 1) as f64) * sample_spacing;
            (center, psd, energy)
        })
        .collect();

    let mut centers = Vec::with_capacity(rows.len());
    let mut psd = Vec::with_capacity(rows.len());
    let mut energy = Vec::with_capacity(rows.len());
    for (c, p, e) in rows {
        centers.push(c);
        psd.push(p);
        energy.push(e);
    }
    Ok(Spectrogram {
        window_centers: centers,
        frequency_bins: (0..n_bins).map(|k| k as f64 * df).collect(),
        psd,
        window_energy: energy,
    })
}

/// Per-window spectral peaks above the noise floor (median x 5), at most
/// `count` per window, with parabolic sub-bin interpolation.
fn window_peaks(spec: &Spectrogram, w: usize, count: usize) -> Vec<(f64, f64)> {
    let row = &spec.psd[w];
    let mut sorted: Vec<f64> = row.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let floor = 5.0 * median;
    let df = spec.bin_width();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for k in 1..row.len() - 1 {
        if row[k] > floor && row[k] >= row[k - 1] && row[k] > row[k + 1] {
            let off = parabolic_peak_offset(row[k - 1], row[k], row[k + 1]);
            peaks.push(((k as f64 + off) * df, row[k]));
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    peaks.truncate(count);
    peaks
}

/// Minimum number of windows a track must persist to count as a ridge
/// (suppresses spurious noise peaks, which do not line up across windows).
const MIN_TRACK_LEN: usize = 5;

/// Extract up to `count` beat ridges: per-window dominant peaks linked
/// across windows by nearest-frequency continuation with a linear slope
/// prediction. A new track may grab a peak anywhere nearby (chirps can
/// move many bins per hop), but continuing an established track demands
/// consistency with its extrapolated slope; incoherent noise peaks fail
/// that and never build up the minimum track length.
pub fn extract_ridges(spec: &Spectrogram, count: usize) -> Result<Vec<BeatRidge>> {
    if count == 0 {
        return Err(Error::InvalidInput("ridge count must be at least 1".into()));
    }
    let n_w = spec.window_centers.len();
    let df = spec.bin_width();

    #[derive(Debug)]
    struct Track {
        points: Vec<(f64, f64, f64)>,
        last_w: usize,
    }
    let mut open: Vec<Track> = Vec::new();
    let mut done: Vec<Track> = Vec::new();

    for w in 0..n_w {
        let peaks = window_peaks(spec, w, count + 2);
        let center = spec.window_centers[w];
        let mut used = vec![false; peaks.len()];
        for track in open.iter_mut() {
            if track.last_w + 1 != w {
                continue;
            }
            let n = track.points.len();
            let last_f = track.points[n - 1].1;
            // linear prediction once a slope exists
            let (predicted, tol) = if n >= 2 {
                let prev_f = track.points[n - 2].1;
                (
                    2.0 * last_f - prev_f,
                    (4.0 * df).max(0.01 * last_f),
                )
            } else {
                (last_f, (3.0 * df).max(0.12 * last_f))
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, &(f, _)) in peaks.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (f - predicted).abs();
                if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            if let Some((i, _)) = best {
                used[i] = true;
                track.points.push((center, peaks[i].0, peaks[i].1));
                track.last_w = w;
            }
        }
        // retire stalled tracks
        let mut still_open = Vec::new();
        for t in open.drain(..) {
            if t.last_w + 1 < w {
                done.push(t);
            } else {
                still_open.push(t);
            }
        }
        open = still_open;
        // open new tracks on unused peaks
        for (i, &(f, a)) in peaks.iter().enumerate() {
            if !used[i] {
                open.push(Track {
                    points: vec![(center, f, a)],
                    last_w: w,
                });
            }
        }
    }
    done.extend(open);

    let mut ridges: Vec<BeatRidge> = done
        .into_iter()
        .filter(|t| t.points.len() >= MIN_TRACK_LEN.min(n_w))
        .map(|t| BeatRidge {
            points: t.points,
            label: None,
        })
        .collect();
    // strongest and longest first, stable order
    ridges.sort_by(|a, b| {
        (b.points.len() as f64 * b.mean_amplitude())
            .partial_cmp(&(a.points.len() as f64 * a.mean_amplitude()))
            .unwrap()
    });
    ridges.truncate(count);
    Ok(ridges)
}

/// Beat length 2 pi / |beta_1 - beta_2| of two guided modes [m].
/// Identical modes beat at infinite length (returned as `inf`).
pub fn beat_length(fiber: &FiberSpec, pair: (&ModeId, &ModeId)) -> Result<f64> {
    let n0 = solve_neff(fiber, pair.0)?;
    let n1 = solve_neff(fiber, pair.1)?;
    let dbeta = (n0 - n1).abs() * fiber.k();
    if dbeta == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * std::f64::consts::PI / dbeta)
}

/// Spatial beat frequency |beta_1 - beta_2| / 2 pi of a pair [cycles/m].
pub fn beat_frequency(fiber: &FiberSpec, pair: (&ModeId, &ModeId)) -> Result<f64> {
    let n0 = solve_neff(fiber, pair.0)?;
    let n1 = solve_neff(fiber, pair.1)?;
    Ok((n0 - n1).abs() * fiber.k() / (2.0 * std::f64::consts::PI))
}

/// Invert a measured beat frequency to the fiber radius by bisection.
///
/// The forward map radius -> beat frequency is sampled first; it must be
/// strictly monotone over `search_range` and bracket the measurement,
/// otherwise the inversion refuses (no extrapolation).
pub fn radius_from_beat(
    measured_frequency: f64,
    pair: (&ModeId, &ModeId),
    fiber_template: &FiberSpec,
    search_range: (f64, f64),
) -> Result<f64> {
    let (r_lo, r_hi) = search_range;
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(Error::InvalidInput(format!(
            "bad search range [{r_lo}, {r_hi}]"
        )));
    }
    let freq_at = |r: f64| -> Result<f64> {
        beat_frequency(&fiber_template.at_radius(r)?, pair)
    };
    // monotonicity check on a coarse sample
    let n_check = 24;
    let mut samples = Vec::with_capacity(n_check + 1);
    for i in 0..=n_check {
        let r = r_lo + (r_hi - r_lo) * i as f64 / n_check as f64;
        samples.push((r, freq_at(r)?));
    }
    let increasing = samples[n_check].1 > samples[0].1;
    for w in samples.windows(2) {
        let ok = if increasing {
            w[1].1 > w[0].1
        } else {
            w[1].1 < w[0].1
        };
        if !ok {
            return Err(Error::NonMonotone(format!(
                "beat frequency not strictly monotone over [{r_lo:.3e}, {r_hi:.3e}] m \
                 (between r = {:.4e} and {:.4e})",
                w[0].0, w[1].0
            )));
        }
    }
    let (f_min, f_max) = if increasing {
        (samples[0].1, samples[n_check].1)
    } else {
        (samples[n_check].1, samples[0].1)
    };
    if measured_frequency < f_min || measured_frequency > f_max {
        return Err(Error::OutOfBand(format!(
            "measured frequency {measured_frequency:.6e} cycles/m outside the attainable \
             band [{f_min:.6e}, {f_max:.6e}] on this range; refusing to extrapolate"
        )));
    }
    // bisection on the monotone map to 1e-13 m
    let mut lo = r_lo;
    let mut hi = r_hi;
    for _ in 0..80 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = freq_at(mid)?;
        let go_up = (f_mid < measured_frequency) == increasing;
        if go_up {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
