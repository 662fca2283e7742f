//! Multiphoton resonance conditions and feature detection in 1-D sweeps.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Resonance condition of a family, with the diabatic pair it couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// nω = |Δ0|: |gg⟩ ↔ |s⟩.
    GgS,
    /// nω = |Δ0 − V0|: |s⟩ ↔ |rr⟩.
    SRr,
    /// nω = |2Δ0 − V0|: |gg⟩ ↔ |rr⟩.
    GgRr,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::GgS, Family::SRr, Family::GgRr];

    /// Detuning mismatch bridged by n photons.
    pub fn mismatch(self, bias: f64, interaction: f64) -> f64 {
        match self {
            Family::GgS => bias.abs(),
            Family::SRr => (bias - interaction).abs(),
            Family::GgRr => (2.0 * bias - interaction).abs(),
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            Family::GgS => "n*omega=|Delta0|",
            Family::SRr => "n*omega=|Delta0-V0|",
            Family::GgRr => "n*omega=|2*Delta0-V0|",
        }
    }

    pub fn transition(self) -> (&'static str, &'static str) {
        match self {
            Family::GgS => ("gg", "s"),
            Family::SRr => ("s", "rr"),
            Family::GgRr => ("gg", "rr"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub family: Family,
    pub order: u32,
    pub frequency: f64,
}

/// All resonances with ω in `[lo, hi]`, sorted by ω descending.
pub fn resonance_catalog(bias: f64, interaction: f64, lo: f64, hi: f64) -> Result<Vec<Resonance>> {
    resonance_catalog_for(&Family::ALL, bias, interaction, lo, hi)
}

pub fn resonance_catalog_for(
    families: &[Family],
    bias: f64,
    interaction: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<Resonance>> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::invalid("frequency range", "need 0 < lo ≤ hi < ∞"));
    }
    let mut out = Vec::new();
    for &family in families {
        let m = family.mismatch(bias, interaction);
        if m == 0.0 {
            continue;
        }
        let first = (m / hi).ceil().max(1.0) as u32;
        let last = (m / lo).floor() as u32;
        for n in first..=last {
            let w = m / f64::from(n);
            if w >= lo && w <= hi {
                out.push(Resonance { family, order: n, frequency: w });
            }
        }
    }
    out.sort_by(|a, b| b.frequency.partial_cmp(&a.frequency).unwrap_or(core::cmp::Ordering::Equal));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Peak,
    Dip,
}

/// A detected extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    /// Parabolically refined position on the axis.
    pub location: f64,
    /// Smoothed value at the extremum.
    pub value: f64,
    pub prominence: f64,
    /// Full width at half prominence.
    pub width: f64,
}

pub const MIN_POINTS: usize = 50;
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// Width-5 quadratic Savitzky-Golay smoothing; the two points at each end
/// are kept as they are.
pub fn smooth(values: &[f64]) -> Vec<f64> {
    const C: [f64; 5] = [-3.0, 12.0, 17.0, 12.0, -3.0];
    let n = values.len();
    let mut out = values.to_vec();
    if n >= 5 {
        for i in 2..n - 2 {
            out[i] = (0..5).map(|k| C[k] * values[i + k - 2]).sum::<f64>() / 35.0;
        }
    }
    out
}

/// Extrema of `values` over the monotone `axis` with prominence at least
/// `min_prominence`, after smoothing.
///
/// `tolerance` is the location accuracy the caller needs; a grid coarser
/// than that is rejected.
pub fn detect_resonances(
    axis: &[f64],
    values: &[f64],
    kind: Extremum,
    min_prominence: f64,
    tolerance: f64,
) -> Result<Vec<Feature>> {
    let n = axis.len();
    if n != values.len() {
        return Err(Error::invalid("sweep", "axis and values differ in length"));
    }
    if n < MIN_POINTS {
        return Err(Error::invalid("sweep", "needs at least 50 points"));
    }
    let spacing = axis.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    if spacing > tolerance {
        return Err(Error::InsufficientResolution { spacing, tolerance });
    }
    let sign = match kind {
        Extremum::Peak => 1.0,
        Extremum::Dip => -1.0,
    };
    // Work with peaks of y = sign·smoothed.
    let y: Vec<f64> = smooth(values).into_iter().map(|v| sign * v).collect();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if !(y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            i += 1;
            continue;
        }
        // Extend across a flat top.
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        if j + 1 >= n || y[j + 1] > y[i] {
            i = j + 1;
            continue;
        }
        let top = y[i];
        let left_base = base(y[..i].iter().rev(), top);
        let right_base = base(y[j + 1..].iter(), top);
        let prominence = top - left_base.max(right_base);
        if prominence >= min_prominence {
            let c = (i + j) / 2;
            let location = if i == j { refine(axis, &y, c) } else { 0.5 * (axis[i] + axis[j]) };
            let half = top - 0.5 * prominence;
            let width = crossing(axis, &y, c, half, false) - crossing(axis, &y, c, half, true);
            out.push(Feature { location, value: sign * top, prominence, width: width.abs() });
        }
        i = j + 1;
    }
    Ok(out)
}

// Lowest value met walking away from a peak before climbing above it.
fn base<'a>(walk: impl Iterator<Item = &'a f64>, top: f64) -> f64 {
    let mut low = top;
    for &v in walk {
        if v > top {
            break;
        }
        low = low.min(v);
    }
    low
}

fn refine(axis: &[f64], y: &[f64], i: usize) -> f64 {
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 {
        return axis[i];
    }
    let shift = (0.5 * (y0 - y2) / denom).clamp(-1.0, 1.0);
    if shift >= 0.0 {
        axis[i] + shift * (axis[i + 1] - axis[i])
    } else {
        axis[i] + shift * (axis[i] - axis[i - 1])
    }
}

// Axis position where y falls to `level` walking left (or right) from i.
fn crossing(axis: &[f64], y: &[f64], i: usize, level: f64, left: bool) -> f64 {
    let mut k = i;
    loop {
        let next = if left {
            if k == 0 {
                return axis[0];
            }
            k - 1
        } else {
            if k + 1 == axis.len() {
                return axis[k];
            }
            k + 1
        };
        if y[next] <= level {
            let f = (y[k] - level) / (y[k] - y[next]);
            return axis[k] + f * (axis[next] - axis[k]);
        }
        k = next;
    }
}

/// Pairs each expected frequency with the nearest feature within `window`.
pub fn match_features(expected: &[f64], found: &[Feature], window: f64) -> Vec<Option<Feature>> {
    expected
        .iter()
        .map(|&w| {
            found
                .iter()
                .filter(|f| (f.location - w).abs() <= window)
                .min_by(|a, b| {
                    (a.location - w).abs().partial_cmp(&(b.location - w).abs()).unwrap_or(core::cmp::Ordering::Equal)
                })
                .copied()
        })
        .collect()
}
