//! The k-slit grating curve and the k-cycle interference factor of the AIA.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// sin²(kφ/2)/sin²(φ/2), equal to k² where sin(φ/2) = 0.
pub fn slit_intensity(k: u32, phi: f64) -> f64 {
    interference_ratio(k, 0.5 * phi)
}

/// sin²(kx)/sin²(x), with the limit k² where sin x = 0.
pub fn interference_ratio(k: u32, x: f64) -> f64 {
    let kf = f64::from(k);
    let s = x.sin();
    if s.abs() < 1e-9 {
        // sin(kx)/sin(x) → ±k with a relative correction O(x'²).
        let r = x - (x / PI).round() * PI;
        return kf * kf * (1.0 - (kf * kf - 1.0) * r * r / 3.0);
    }
    ((kf * x).sin() / s).powi(2)
}

/// Intensity curve over `phi`, normalized to the single-slit value.
pub fn multislit_reference(k: u32, phi: &[f64]) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::invalid("slits", "need k ≥ 2"));
    }
    Ok(phi.iter().map(|&p| slit_intensity(k, p)).collect())
}

/// Minima φ/2 = nπ/k, n = 1..k−1, between the principal maxima at 0 and π.
pub fn slit_minima(k: u32) -> Vec<f64> {
    (1..k).map(|n| f64::from(n) * PI / f64::from(k)).collect()
}

/// α = (2n+1)π/2k in (0, π): maxima of sin²kα.
pub fn cycle_maxima(k: u32) -> Vec<f64> {
    (0..k).map(|n| f64::from(2 * n + 1) * PI / (2.0 * f64::from(k))).collect()
}

/// α = nπ/k in [0, π]: zeros of sin²kα, including α = 0.
pub fn cycle_minima(k: u32) -> Vec<f64> {
    (0..=k).map(|n| f64::from(n) * PI / f64::from(k)).collect()
}
