//! Beat extraction from a sampled population.
//!
//! Frequencies are angular (rad per unit time). A beat
//! cos(ω₁t) + cos(ω₂t) = 2cos(½(ω₁−ω₂)t)·cos(½(ω₁+ω₂)t) has envelope
//! frequency ½|ω₁−ω₂|; its magnitude |cos| shows up at twice that.

use std::f64::consts::PI;
use std::vec::Vec;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::propagator::TrajectoryRecord;

/// Minimum relative modulation depth of the envelope.
pub const DEPTH_THRESHOLD: f64 = 0.1;
const MIN_SAMPLES: usize = 64;
// Fraction of the analysed span dropped at each end of the envelope.
const EDGE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatReport {
    /// Frequency of the envelope cosine.
    pub envelope_frequency: f64,
    /// d/dt of the instantaneous carrier frequency (linear trend).
    pub carrier_slope: f64,
    /// Carrier frequency at the start of the analysed span.
    pub carrier_start: f64,
    /// Peak-to-trough modulation of the normalized envelope, in [0, 1].
    pub depth: f64,
    pub present: bool,
}

/// Beat analysis of diabatic channel `channel` of a trajectory, using
/// samples with t ≥ `from`.
pub fn beat_analysis_trajectory(traj: &TrajectoryRecord, channel: usize, from: f64) -> Result<BeatReport> {
    if channel >= traj.dim {
        return Err(Error::invalid("channel", "exceeds the system dimension"));
    }
    let y: Vec<f64> = traj.diabatic.iter().map(|p| p[channel]).collect();
    beat_analysis(&traj.times, &y, from)
}

/// Beat analysis of a uniformly sampled signal, using samples with t ≥ `from`.
///
/// The signal is detrended, its analytic-signal magnitude is normalized by
/// a smooth trend, and the dominant spectral line of that envelope gives
/// the beat. Fails with [`Error::NoBeat`] when the envelope depth is below
/// [`DEPTH_THRESHOLD`].
pub fn beat_analysis(times: &[f64], signal: &[f64], from: f64) -> Result<BeatReport> {
    if times.len() != signal.len() {
        return Err(Error::invalid("signal", "times and values differ in length"));
    }
    let first = times.iter().position(|&t| t >= from).unwrap_or(times.len());
    let t = &times[first..];
    let y = &signal[first..];
    let n = t.len();
    if n < MIN_SAMPLES {
        return Err(Error::invalid("signal", "needs at least 64 samples in the analysed span"));
    }
    let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
    if !(dt > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::invalid("signal", "samples must be uniform in time"));
    }

    let trend = fit_quadratic(t, y);
    let x: Vec<f64> = t.iter().zip(y).map(|(&ti, &yi)| yi - eval(&trend, ti)).collect();
    let z = analytic_signal(&x);
    let env: Vec<f64> = z.iter().map(|c| c.norm()).collect();

    let a = (EDGE * n as f64) as usize;
    let b = n - a;
    let (ti, ei) = (&t[a..b], &env[a..b]);
    let env_trend = fit_quadratic(ti, ei);
    let r: Vec<f64> = ti.iter().zip(ei).map(|(&tk, &e)| e / eval(&env_trend, tk)).collect();
    let (lo, hi) = r.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let depth = if hi + lo > 0.0 { (hi - lo) / (hi + lo) } else { 0.0 };
    if !(depth >= DEPTH_THRESHOLD) {
        return Err(Error::NoBeat { depth, threshold: DEPTH_THRESHOLD });
    }

    let span = ti[ti.len() - 1] - ti[0];
    let line = dominant_line(&r, dt, 4.0 * PI / span);

    let mut phase: Vec<f64> = z[a..b].iter().map(|c| c.arg()).collect();
    unwrap(&mut phase);
    let pc = fit_quadratic(ti, &phase);
    let (t0, s) = (pc[3], pc[4]);
    let carrier_slope = 2.0 * pc[2] / (s * s);
    let carrier_start = (pc[1] + 2.0 * pc[2] * (ti[0] - t0) / s) / s;

    Ok(BeatReport { envelope_frequency: 0.5 * line, carrier_slope, carrier_start, depth, present: true })
}

// Least-squares c0 + c1·u + c2·u² with u = (t − t0)/s; returns
// [c0, c1, c2, t0, s].
fn fit_quadratic(t: &[f64], y: &[f64]) -> [f64; 5] {
    let n = t.len();
    let t0 = 0.5 * (t[0] + t[n - 1]);
    let s = (0.5 * (t[n - 1] - t[0])).max(f64::MIN_POSITIVE);
    let mut m = [[0.0; 4]; 3];
    for (&ti, &yi) in t.iter().zip(y) {
        let u = (ti - t0) / s;
        let p = [1.0, u, u * u];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += p[i] * p[j];
            }
            m[i][3] += p[i] * yi;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, &y) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * y;
            }
        }
    }
    let mut c = [0.0; 3];
    for i in (0..3).rev() {
        let acc: f64 = (i + 1..3).map(|k| m[i][k] * c[k]).sum();
        c[i] = (m[i][3] - acc) / m[i][i];
    }
    [c[0], c[1], c[2], t0, s]
}

fn eval(c: &[f64; 5], t: f64) -> f64 {
    let u = (t - c[3]) / c[4];
    c[0] + u * (c[1] + u * c[2])
}

fn analytic_signal(x: &[f64]) -> Vec<Complex<f64>> {
    let n = x.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    for (k, c) in buf.iter_mut().enumerate() {
        let h = if k == 0 || (n.is_multiple_of(2) && k == half) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *c *= h / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

// Strongest angular frequency above `min_freq` of a Hann-windowed,
// zero-padded spectrum, refined by a parabola through log-magnitudes.
fn dominant_line(r: &[f64], dt: f64, min_freq: f64) -> f64 {
    let n = r.len();
    let mean = r.iter().sum::<f64>() / n as f64;
    let size = 8 * n.next_power_of_two();
    let mut buf = std::vec![Complex::new(0.0, 0.0); size];
    for (k, &v) in r.iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
        buf[k] = Complex::new((v - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    let df = 2.0 * PI / (size as f64 * dt);
    let mag: Vec<f64> = buf[..size / 2].iter().map(|c| c.norm()).collect();
    let start = ((min_freq / df).ceil() as usize).max(1);
    let i = (start..mag.len() - 1).max_by(|&a, &b| mag[a].total_cmp(&mag[b])).unwrap_or(start);
    let (l0, l1, l2): (f64, f64, f64) = (mag[i - 1].ln(), mag[i].ln(), mag[i + 1].ln());
    let denom = l0 - 2.0 * l1 + l2;
    let shift = if denom < 0.0 { (0.5 * (l0 - l2) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    (i as f64 + shift) * df
}

fn unwrap(phase: &mut [f64]) {
    let mut offset = 0.0;
    for k in 1..phase.len() {
        let raw = phase[k] + offset;
        let d = raw - phase[k - 1];
        if d > PI {
            offset -= 2.0 * PI * (d / (2.0 * PI)).round();
        } else if d < -PI {
            offset += 2.0 * PI * (-d / (2.0 * PI)).round();
        }
        phase[k] += offset;
    }
}
