//! Analysis on top of the exact and AIA engines.

#[cfg(feature = "std")]
pub mod beats;
pub mod closed_form;
pub mod multislit;
pub mod resonance;
pub mod sweep;

#[cfg(feature = "std")]
pub use beats::{beat_analysis, beat_analysis_trajectory, BeatReport};
pub use closed_form::{interacting_correction_final, noninteracting_final, PairState};
pub use multislit::multislit_reference;
pub use resonance::{detect_resonances, resonance_catalog, Extremum, Family, Feature, Resonance};
pub use sweep::{
    run_sweep, Axis, Engine, Horizon, InitialState, Observable, Parameter, PointOutcome, Scenario, SweepGrid, SweepSpec,
};
