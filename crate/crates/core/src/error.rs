use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two instantaneous eigenvalues coincide within the degeneracy tolerance.
    #[error("degenerate spectrum at detuning {detuning}: eigenvalues {lower} and {upper} coincide")]
    DegenerateSpectrum { detuning: f64, lower: f64, upper: f64 },

    /// The adaptive step size fell below the representable minimum.
    #[error("step size underflow at t = {t} (h = {step:e})")]
    StepFailure { t: f64, step: f64 },

    /// No avoided crossing is reachable by the drive.
    #[error("the drive never reaches an avoided crossing")]
    NoCrossing,

    /// An adiabatic segment was requested across an avoided crossing.
    #[error("avoided crossing at t = {crossing} lies inside the segment [{start}, {end}]")]
    CrossingInsideSegment { start: f64, end: f64, crossing: f64 },

    /// A sampled signal does not resolve the features asked of it.
    #[error("grid spacing {spacing} exceeds the requested matching tolerance {tolerance}")]
    InsufficientResolution { spacing: f64, tolerance: f64 },

    /// The beat envelope is too shallow to call a beat.
    #[error("no beat: envelope modulation depth {depth:.3} is below {threshold}")]
    NoBeat { depth: f64, threshold: f64 },

    /// An argument is outside the operation's domain.
    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: &'static str },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidArgument { name, reason }
    }
}
