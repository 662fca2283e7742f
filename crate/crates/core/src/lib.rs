//! Landau-Zener dynamics of a driven two-level atom and of a pair of
//! interacting Rydberg atoms (an effective three-level system).
//!
//! The crate provides two independent routes to the same physics:
//!
//! * [`propagator`] integrates the time-dependent Schrödinger equation with an
//!   adaptive embedded Runge-Kutta scheme, and
//! * [`aia`] composes the adiabatic impulse approximation: Landau-Zener
//!   transfer matrices at the avoided crossings, diagonal phase matrices in
//!   between.
//!
//! [`hamiltonian`] supplies the Hamiltonians, instantaneous eigensystems and
//! crossing structure both routes share, and [`analysis`] holds closed-form
//! predictions, resonance bookkeeping and the parameter-sweep engine.
//!
//! Units: ħ = 1, energies in units of the Rabi frequency Ω, times in 1/Ω.
//!
//! The crate is `no_std` (with `alloc`); float functions come from
//! `num_traits::Float`, backed by `std` or `libm`. Beat extraction and
//! parallel sweeps need the default `std` feature.

#![no_std]
// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod aia;
pub mod analysis;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod propagator;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use hamiltonian::{Arity, DriveProtocol, SystemSpec};
pub use linalg::{CMatrix, CVector, C64};
