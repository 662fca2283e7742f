//! Single scenarios and rectangular parameter sweeps over them.

use alloc::vec::Vec;

use crate::aia::{compose_linear, compose_periodic, AiaOptions, AiaOutcome};
use crate::error::{Error, Result};
use crate::hamiltonian::{DriveProtocol, SystemSpec};
use crate::propagator::{
    integrate_with, project_adiabatic, time_average, IntegratorOptions, Scheme, StateVector, SweepWindow,
    TrajectoryRecord, DEFAULT_SAMPLES,
};

/// Default local error tolerance of exact runs.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default number of drive periods for periodic runs.
pub const DEFAULT_CYCLES: u32 = 100;
/// Minimum samples per drive period for time averages.
pub const SAMPLES_PER_CYCLE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Diabatic basis state (|g⟩, |r⟩ or |gg⟩, |s⟩, |rr⟩ by index).
    Diabatic(usize),
    /// Adiabatic state by ascending-energy index at the start time.
    Adiabatic(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Explicit time window.
    Window { t_start: f64, t_end: f64 },
    /// Linear sweep from Δ = −10Ω to Δ = 30Ω + 10v/Ω.
    StandardLinear,
    /// Whole periods of a periodic drive starting at drive phase
    /// ωt_start = `phase`, so the start tracks ω in frequency sweeps.
    Cycles { phase: f64, cycles: u32 },
}

/// Which populations a scenario reports as its primary channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Adiabatic populations at the end of the horizon.
    Final,
    /// Time-averaged adiabatic populations over the horizon.
    Average,
}

/// Everything that determines one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub system: SystemSpec,
    pub drive: DriveProtocol,
    pub initial: InitialState,
    pub horizon: Horizon,
    pub samples: usize,
    pub tolerance: f64,
    pub scheme: Scheme,
    pub observable: Observable,
}

/// Populations reported for one run, ascending-energy adiabatic order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOutcome {
    pub final_diabatic: [f64; 3],
    pub final_adiabatic: [f64; 3],
    pub average_adiabatic: [f64; 3],
    /// Exact runs only.
    pub average_diabatic: Option<[f64; 3]>,
    /// Exact runs only: max |‖ψ‖² − 1| over the samples.
    pub norm_drift: Option<f64>,
}

impl Scenario {
    /// Defaults: final populations for linear sweeps, averages over cycles.
    pub fn new(system: SystemSpec, drive: DriveProtocol, initial: InitialState, horizon: Horizon) -> Self {
        let observable = match horizon {
            Horizon::Cycles { .. } => Observable::Average,
            _ => Observable::Final,
        };
        Self {
            system,
            drive,
            initial,
            horizon,
            samples: DEFAULT_SAMPLES,
            tolerance: DEFAULT_TOLERANCE,
            scheme: Scheme::DormandPrince,
            observable,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.drive.validate()?;
        let dim = self.system.dim();
        match self.initial {
            InitialState::Diabatic(k) | InitialState::Adiabatic(k) if k >= dim => {
                return Err(Error::invalid("initial state", "index exceeds the system dimension"));
            }
            _ => {}
        }
        match (self.horizon, self.drive) {
            (Horizon::StandardLinear, DriveProtocol::Periodic { .. }) => {
                Err(Error::invalid("horizon", "the standard window needs a linear drive"))
            }
            (Horizon::Cycles { .. }, DriveProtocol::Linear { .. }) => {
                Err(Error::invalid("horizon", "cycles need a periodic drive"))
            }
            (Horizon::Cycles { cycles: 0, .. }, _) => Err(Error::invalid("cycles", "must be at least one")),
            (Horizon::Cycles { phase, .. }, _) if !phase.is_finite() => Err(Error::invalid("phase", "must be finite")),
            _ => Ok(()),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.horizon, Horizon::Cycles { .. })
    }

    /// Sampling window of the exact run.
    pub fn window(&self) -> Result<SweepWindow> {
        self.validate()?;
        match self.horizon {
            Horizon::Window { t_start, t_end } => SweepWindow::new(t_start, t_end, self.samples),
            Horizon::StandardLinear => match self.drive {
                DriveProtocol::Linear { rate } => SweepWindow::standard_linear(&self.system, rate, self.samples),
                DriveProtocol::Periodic { .. } => unreachable!("validated"),
            },
            Horizon::Cycles { phase, cycles } => {
                let t_start = match self.drive {
                    DriveProtocol::Periodic { frequency, .. } => phase / frequency,
                    DriveProtocol::Linear { .. } => unreachable!("validated"),
                };
                let samples = self.samples.max(SAMPLES_PER_CYCLE * cycles as usize + 1);
                SweepWindow::cycles(&self.drive, t_start, cycles, samples)
            }
        }
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        let w = self.window()?;
        let dim = self.system.dim();
        Ok(match self.initial {
            InitialState::Diabatic(k) => StateVector::diabatic(dim, k, w.t_start),
            InitialState::Adiabatic(j) => StateVector::adiabatic(&self.system, &self.drive, j, w.t_start)?,
        })
    }

    /// Exact integration with adiabatic projection.
    pub fn run_exact(&self) -> Result<(TrajectoryRecord, PointOutcome)> {
        let w = self.window()?;
        let psi0 = self.initial_state()?;
        let opts = IntegratorOptions::new(self.tolerance).with_scheme(self.scheme);
        let raw = integrate_with(&self.system, &self.drive, &psi0, &w, &opts)?;
        let traj = project_adiabatic(&self.system, &self.drive, &raw)?;
        let avg = time_average(&traj, w.t_start, w.t_end)?;
        let outcome = PointOutcome {
            final_diabatic: traj.final_diabatic(),
            final_adiabatic: traj.final_adiabatic().expect("projected"),
            average_adiabatic: avg.adiabatic.expect("projected"),
            average_diabatic: Some(avg.diabatic),
            norm_drift: Some(traj.stats.norm_drift),
        };
        Ok((traj, outcome))
    }

    pub fn run_aia(&self, opts: &AiaOptions) -> Result<(AiaOutcome, PointOutcome)> {
        let w = self.window()?;
        let psi0 = self.initial_state()?;
        let out = match self.horizon {
            Horizon::Cycles { cycles, .. } => compose_periodic(&self.system, &self.drive, &psi0, cycles, opts)?,
            _ => match self.drive {
                DriveProtocol::Linear { .. } => compose_linear(&self.system, &self.drive, &psi0, &w, opts)?,
                DriveProtocol::Periodic { .. } => {
                    return Err(Error::invalid("horizon", "periodic AIA runs are specified in cycles"));
                }
            },
        };
        let point = PointOutcome {
            final_diabatic: out.final_diabatic.populations(),
            final_adiabatic: out.final_populations,
            average_adiabatic: out.average_populations,
            average_diabatic: None,
            norm_drift: None,
        };
        Ok((out, point))
    }

    /// The adiabatic populations selected by `observable`.
    pub fn primary(&self, o: &PointOutcome) -> [f64; 3] {
        match self.observable {
            Observable::Final => o.final_adiabatic,
            Observable::Average => o.average_adiabatic,
        }
    }
}

/// Parameters a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    Rate,
    Interaction,
    Frequency,
    Amplitude,
    Bias,
    Rabi,
}

impl Parameter {
    pub const ALL: [Parameter; 6] = [
        Parameter::Rate,
        Parameter::Interaction,
        Parameter::Frequency,
        Parameter::Amplitude,
        Parameter::Bias,
        Parameter::Rabi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Rate => "v",
            Parameter::Interaction => "V0",
            Parameter::Frequency => "omega",
            Parameter::Amplitude => "delta",
            Parameter::Bias => "Delta0",
            Parameter::Rabi => "Omega",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Returns `base` with this parameter set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = *base;
        match (self, &mut s.drive) {
            (Parameter::Rate, DriveProtocol::Linear { rate }) => *rate = value,
            (Parameter::Frequency, DriveProtocol::Periodic { frequency, .. }) => *frequency = value,
            (Parameter::Amplitude, DriveProtocol::Periodic { amplitude, .. }) => *amplitude = value,
            (Parameter::Bias, DriveProtocol::Periodic { bias, .. }) => *bias = value,
            (Parameter::Interaction, _) => s.system.interaction = value,
            (Parameter::Rabi, _) => s.system.rabi = value,
            _ => return Err(Error::invalid("sweep axis", "parameter does not belong to this drive")),
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub parameter: Parameter,
    pub values: Vec<f64>,
}

impl Axis {
    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(parameter: Parameter, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || !(lo.is_finite() && hi.is_finite()) || (n == 1 && lo != hi) {
            return Err(Error::invalid("sweep axis", "need finite bounds and n ≥ 1 (n = 1 only for lo = hi)"));
        }
        let values = if n == 1 {
            alloc::vec![lo]
        } else {
            (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
        };
        Ok(Self { parameter, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Aia,
    Both,
}

/// A base scenario and one or two axes varied over a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axes: Vec<Axis>,
}

impl SweepSpec {
    pub fn new(base: Scenario, axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::invalid("sweep", "one or two axes"));
        }
        if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
            return Err(Error::invalid("sweep", "axes must vary different parameters"));
        }
        if axes.iter().any(|a| a.values.is_empty()) {
            return Err(Error::invalid("sweep", "empty axis"));
        }
        Ok(Self { base, axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of point `k`, first axis slowest.
    pub fn coords(&self, k: usize) -> Vec<f64> {
        let mut rest = k;
        let mut out = alloc::vec![0.0; self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let n = axis.values.len();
            *slot = axis.values[rest % n];
            rest /= n;
        }
        out
    }

    pub fn scenario(&self, k: usize) -> Result<Scenario> {
        let mut s = self.base;
        for (axis, value) in self.axes.iter().zip(self.coords(k)) {
            s = axis.parameter.apply(&s, value)?;
        }
        s.validate()?;
        Ok(s)
    }
}

/// Outcome of one grid point; failures are kept, not propagated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub coords: Vec<f64>,
    pub exact: Option<Result<PointOutcome>>,
    pub aia: Option<Result<PointOutcome>>,
    /// Engine `Both`: max over channels of |exact − AIA| on the primary
    /// observable.
    pub dp_max: Option<f64>,
}

impl PointResult {
    pub fn failed(&self) -> bool {
        matches!(self.exact, Some(Err(_))) || matches!(self.aia, Some(Err(_)))
    }

    pub fn error(&self) -> Option<&Error> {
        [&self.exact, &self.aia].into_iter().flatten().find_map(|r| r.as_ref().err())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    pub engine: Engine,
    pub points: Vec<PointResult>,
}

impl SweepGrid {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.failed()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.failures() == 0
    }

    /// Primary-channel values of one engine, NaN where that point failed.
    pub fn primary(&self, exact: bool) -> Vec<[f64; 3]> {
        self.points
            .iter()
            .map(|p| match if exact { &p.exact } else { &p.aia } {
                Some(Ok(o)) => self.spec.base.primary(o),
                _ => [f64::NAN; 3],
            })
            .collect()
    }
}

fn run_point(spec: &SweepSpec, engine: Engine, opts: &AiaOptions, k: usize) -> PointResult {
    let coords = spec.coords(k);
    let scenario = spec.scenario(k);
    let exact = matches!(engine, Engine::Exact | Engine::Both)
        .then(|| scenario.clone().and_then(|s| s.run_exact().map(|(_, o)| o)));
    let aia = matches!(engine, Engine::Aia | Engine::Both)
        .then(|| scenario.clone().and_then(|s| s.run_aia(opts).map(|(_, o)| o)));
    let dp_max = match (&exact, &aia, &scenario) {
        (Some(Ok(e)), Some(Ok(a)), Ok(s)) => {
            let (pe, pa) = (s.primary(e), s.primary(a));
            Some((0..s.system.dim()).map(|c| (pe[c] - pa[c]).abs()).fold(0.0, f64::max))
        }
        _ => None,
    };
    PointResult { coords, exact, aia, dp_max }
}

/// Runs every grid point with the chosen engine(s). Points run in parallel
/// on the rayon pool when the `std` feature is enabled.
pub fn run_sweep(spec: &SweepSpec, engine: Engine, opts: &AiaOptions) -> SweepGrid {
    #[cfg(feature = "std")]
    let points = {
        use rayon::prelude::*;
        (0..spec.len()).into_par_iter().map(|k| run_point(spec, engine, opts, k)).collect()
    };
    #[cfg(not(feature = "std"))]
    let points = (0..spec.len()).map(|k| run_point(spec, engine, opts, k)).collect();
    SweepGrid { spec: spec.clone(), engine, points }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Scenario {
        Scenario::new(
            SystemSpec::three_level(1.0, 2.0),
            DriveProtocol::linear(2.0),
            InitialState::Diabatic(0),
            Horizon::StandardLinear,
        )
    }

    #[test]
    fn single_point_grid_equals_direct_runs() {
        let s = base();
        let spec = SweepSpec::new(s, alloc::vec![Axis::linspace(Parameter::Rate, 2.0, 2.0, 1).unwrap()]).unwrap();
        let grid = run_sweep(&spec, Engine::Both, &AiaOptions::default());
        let (_, exact) = s.run_exact().unwrap();
        let (_, aia) = s.run_aia(&AiaOptions::default()).unwrap();
        assert_eq!(grid.points[0].exact, Some(Ok(exact)));
        assert_eq!(grid.points[0].aia, Some(Ok(aia)));
        assert!(grid.points[0].dp_max.unwrap() >= 0.0);
    }

    #[test]
    fn coordinates_are_row_major() {
        let spec = SweepSpec::new(
            base(),
            alloc::vec![
                Axis::linspace(Parameter::Rate, 1.0, 2.0, 2).unwrap(),
                Axis::linspace(Parameter::Interaction, 0.0, 2.0, 3).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(spec.len(), 6);
        assert_eq!(spec.coords(0), [1.0, 0.0]);
        assert_eq!(spec.coords(2), [1.0, 2.0]);
        assert_eq!(spec.coords(3), [2.0, 0.0]);
    }

    #[test]
    fn failures_are_recorded_per_point() {
        let spec = SweepSpec::new(
            base(),
            alloc::vec![Axis { parameter: Parameter::Frequency, values: alloc::vec![1.0, 2.0] }],
        )
        .unwrap();
        let grid = run_sweep(&spec, Engine::Exact, &AiaOptions::default());
        assert_eq!(grid.failures(), 2);
        assert!(!grid.is_complete());
    }
}
