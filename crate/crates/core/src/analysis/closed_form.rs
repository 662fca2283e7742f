//! Final populations of a linear three-level sweep at small interaction.

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Diabatic basis states of the two-atom system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairState {
    Gg,
    S,
    Rr,
}

impl PairState {
    pub fn index(self) -> usize {
        match self {
            PairState::Gg => 0,
            PairState::S => 1,
            PairState::Rr => 2,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        match k {
            0 => Some(PairState::Gg),
            1 => Some(PairState::S),
            2 => Some(PairState::Rr),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairState::Gg => "gg",
            PairState::S => "s",
            PairState::Rr => "rr",
        }
    }
}

fn check(rate: f64, rabi: f64) -> Result<()> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::invalid("rate", "must be positive and finite"));
    }
    if !(rabi > 0.0 && rabi.is_finite()) {
        return Err(Error::invalid("rabi", "must be positive and finite"));
    }
    Ok(())
}

/// Single-atom P_LZ = exp(−πΩ²/2v).
pub fn single_atom_probability(rate: f64, rabi: f64) -> f64 {
    (-PI * rabi * rabi / (2.0 * rate)).exp()
}

/// Q_LZ = P_LZ·exp(−πΩ²V0 / 4v^{3/2}).
pub fn q_lz(rate: f64, rabi: f64, interaction: f64) -> f64 {
    single_atom_probability(rate, rabi) * (-PI * rabi * rabi * interaction / (4.0 * rate.powf(1.5))).exp()
}

/// R_LZ = P_LZ·exp(−πΩ²V0 / 2^{5/2}v^{3/2}).
pub fn r_lz(rate: f64, rabi: f64, interaction: f64) -> f64 {
    single_atom_probability(rate, rabi) * (-PI * rabi * rabi * interaction / (2f64.powf(2.5) * rate.powf(1.5))).exp()
}

/// (P_gg, P_s, P_rr) after a sweep of two independent atoms.
pub fn noninteracting_final(rate: f64, rabi: f64, initial: PairState) -> Result<[f64; 3]> {
    check(rate, rabi)?;
    let p = single_atom_probability(rate, rabi);
    let mixed = 2.0 * p * (1.0 - p);
    Ok(match initial {
        PairState::Gg => [p * p, mixed, (1.0 - p) * (1.0 - p)],
        PairState::S => [mixed, 1.0 - 2.0 * mixed, mixed],
        PairState::Rr => [(1.0 - p) * (1.0 - p), mixed, p * p],
    })
}

/// (P_gg, P_s, P_rr) with the leading finite-V0 corrections.
///
/// For initial |gg⟩ the third channel is the complement 1 − P_gg − P_s,
/// which equals (1 − Q_LZ)²; see [`printed_rr_from_gg`] for the other form
/// in circulation.
pub fn interacting_correction_final(rate: f64, rabi: f64, interaction: f64, initial: PairState) -> Result<[f64; 3]> {
    check(rate, rabi)?;
    if !(interaction >= 0.0 && interaction.is_finite()) {
        return Err(Error::invalid("interaction", "must be non-negative and finite"));
    }
    let p = single_atom_probability(rate, rabi);
    let q = q_lz(rate, rabi, interaction);
    let r = r_lz(rate, rabi, interaction);
    Ok(match initial {
        PairState::Gg => {
            let gg = p * p;
            let s = 1.0 - p * p - (1.0 - q) * (1.0 - q);
            [gg, s, 1.0 - gg - s]
        }
        PairState::S => {
            let rr = 1.0 - p * p - (1.0 - r) * (1.0 - r);
            let gg = 1.0 - p * p - (1.0 - q) * (1.0 - q);
            [gg, 1.0 - rr - gg, rr]
        }
        PairState::Rr => {
            let gg = (1.0 - r) * (1.0 - r);
            [gg, 1.0 - p * p - gg, p * p]
        }
    })
}

/// The alternative P_rr ≈ 1 − Q_LZ² for initial |gg⟩. It does not close
/// the population sum and is kept only for comparison.
pub fn printed_rr_from_gg(rate: f64, rabi: f64, interaction: f64) -> f64 {
    let q = q_lz(rate, rabi, interaction);
    1.0 - q * q
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [PairState; 3] = [PairState::Gg, PairState::S, PairState::Rr];

    #[test]
    fn limits_of_the_product_rule() {
        let slow = noninteracting_final(1e-3, 1.0, PairState::Gg).unwrap();
        assert!(slow[2] > 1.0 - 1e-12);
        let fast = noninteracting_final(1e9, 1.0, PairState::Gg).unwrap();
        assert!(fast[0] > 1.0 - 1e-8);
    }

    #[test]
    fn sums_close() {
        for v in [0.3, 1.0, 2.0, 7.0, 50.0] {
            for init in ALL {
                let a = noninteracting_final(v, 1.0, init).unwrap();
                let b = interacting_correction_final(v, 1.0, 0.3, init).unwrap();
                assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_interaction_reduces_to_product_rule() {
        for init in ALL {
            let a = noninteracting_final(2.0, 1.0, init).unwrap();
            let b = interacting_correction_final(2.0, 1.0, 0.0, init).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn damping_factors_bounded() {
        for v0 in [0.0, 0.1, 1.0, 10.0] {
            let p = single_atom_probability(2.0, 1.0);
            assert!(q_lz(2.0, 1.0, v0) <= p && r_lz(2.0, 1.0, v0) <= p);
        }
        let rr = interacting_correction_final(2.0, 1.0, 0.1, PairState::Rr).unwrap();
        let p = single_atom_probability(2.0, 1.0);
        assert!((rr[2] - p * p).abs() < 1e-15);
    }
}
