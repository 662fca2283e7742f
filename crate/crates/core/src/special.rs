//! Complex log-gamma and the Landau-Zener Stokes phase.
//!
//! `ln Γ(z)` for Re z > 0 uses the recurrence Γ(z) = Γ(z + N)/∏(z + k) to
//! move the argument to |z + N| ≥ 16 and then the Stirling series with
//! Bernoulli corrections up to B₂₀. The principal logarithms of the shift
//! factors keep the imaginary part on the continuous branch of ln Γ, which
//! is the branch the Stokes phase needs.

use core::f64::consts::{FRAC_PI_4, PI};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::linalg::C64;

/// B₂ₙ / (2n(2n−1)) for n = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT_RADIUS: f64 = 16.0;

/// Above this adiabaticity the Stokes phase is summed from its asymptotic
/// series directly; the closed form would cancel two terms of size γ ln γ.
const ASYMPTOTIC_GAMMA: f64 = 16.0;

/// ln Γ(z) on the branch continuous in the right half plane.
///
/// Panics if `Re z <= 0`.
pub fn ln_gamma(z: C64) -> C64 {
    assert!(z.re > 0.0, "ln_gamma needs Re z > 0, got {z}");
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.norm() < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: C64) -> C64 {
    let half_ln_tau = 0.5 * (2.0 * PI).ln();
    let mut acc = (w - 0.5) * w.ln() - w + half_ln_tau;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING {
        acc += pow * c;
        pow *= inv2;
    }
    acc
}

/// arg Γ(1 − iγ), continuous in γ (it is not reduced to (−π, π]).
pub fn arg_gamma_one_minus_i(gamma: f64) -> f64 {
    ln_gamma(C64::new(1.0, -gamma)).im
}

/// The Stokes phase φ̃ = γ(ln γ − 1) + arg Γ(1 − iγ) + π/4.
///
/// Tends to π/4 in the sudden limit γ → 0 and decays like 1/(12γ) in the
/// adiabatic limit.
pub fn stokes_phase(gamma: f64) -> f64 {
    assert!(gamma >= 0.0, "adiabaticity parameter must be non-negative");
    if gamma == 0.0 {
        return FRAC_PI_4;
    }
    if gamma >= ASYMPTOTIC_GAMMA {
        // Im of the Stirling series for ln Γ(1 − iγ) after the leading terms
        // cancel: Σ (−1)^{n−1} B₂ₙ / (2n(2n−1) γ^{2n−1}).
        let inv2 = 1.0 / (gamma * gamma);
        let mut pow = 1.0 / gamma;
        let mut sign = 1.0;
        let mut acc = 0.0;
        for c in STIRLING {
            acc += sign * c * pow;
            pow *= inv2;
            sign = -sign;
        }
        return acc;
    }
    gamma * (gamma.ln() - 1.0) + arg_gamma_one_minus_i(gamma) + FRAC_PI_4
}
