//! Exact propagation of i∂ψ/∂t = H(t)ψ in the diabatic basis.
//!
//! Integration is by an embedded explicit Runge-Kutta pair with PI step-size
//! control, carried out in the interaction picture of the diagonal of H: the
//! diagonal phases have closed forms for both drives, so the stepper only sees
//! the Ω couplings. Sampled states are rotated back to the diabatic basis. Steps are truncated so that every requested sample time is hit
//! exactly, which keeps sampled populations at the integrator's accuracy
//! without an interpolant. The state is never renormalized: norm drift is
//! reported as the unitarity diagnostic.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use core::f64::consts::SQRT_2;

use crate::hamiltonian::{frame_at, real_hamiltonian, DriveProtocol, SystemSpec};
use crate::linalg::{CVector, C64, MAX_DIM};

type Amps = [C64; MAX_DIM];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub t: f64,
    /// Amplitudes in the diabatic basis.
    pub amplitudes: CVector,
}

impl StateVector {
    pub fn new(t: f64, amplitudes: CVector) -> Self {
        Self { t, amplitudes }
    }

    /// Diabatic basis state `k` at time `t`.
    pub fn diabatic(dim: usize, k: usize, t: f64) -> Self {
        Self { t, amplitudes: CVector::basis(dim, k) }
    }

    /// Adiabatic eigenstate `j` (ascending energy) of `s` at time `t`.
    pub fn adiabatic(s: &SystemSpec, p: &DriveProtocol, j: usize, t: f64) -> Result<Self> {
        let frame = frame_at(s, p, t)?;
        Ok(Self { t, amplitudes: frame.state(j) })
    }
}

/// Integration window with `samples` uniformly spaced output times,
/// including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

/// Default number of output samples per run.
pub const DEFAULT_SAMPLES: usize = 2000;

impl SweepWindow {
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) {
            return Err(Error::invalid("window", "need finite t_start < t_end"));
        }
        if samples < 2 {
            return Err(Error::invalid("samples", "need at least two samples"));
        }
        Ok(Self { t_start, t_end, samples })
    }

    /// Linear-sweep window from Δ = −10Ω to Δ = 30Ω + 10v/Ω, over which the
    /// adiabatic states have converged to diabatic ones at both ends.
    pub fn standard_linear(s: &SystemSpec, rate: f64, samples: usize) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::invalid("rate", "the default window needs a positive rate"));
        }
        let start = -10.0 * s.rabi / rate;
        let end = (30.0 * s.rabi + 10.0 * rate / s.rabi) / rate;
        Self::new(start, end, samples)
    }

    /// `cycles` drive periods starting at `t_start`.
    pub fn cycles(p: &DriveProtocol, t_start: f64, cycles: u32, samples: usize) -> Result<Self> {
        let period = p.period().ok_or(Error::invalid("drive", "cycles need a periodic drive"))?;
        Self::new(t_start, t_start + f64::from(cycles) * period, samples)
    }

    pub fn sample_time(&self, k: usize) -> f64 {
        if k + 1 == self.samples {
            return self.t_end;
        }
        self.t_start + (self.t_end - self.t_start) * (k as f64) / ((self.samples - 1) as f64)
    }
}

/// Runge-Kutta pair used for stepping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Dormand-Prince 5(4), first-same-as-last.
    #[default]
    DormandPrince,
    /// Cash-Karp 5(4).
    CashKarp,
}

impl Scheme {
    fn tableau(self) -> &'static Tableau {
        match self {
            Scheme::DormandPrince => &DORMAND_PRINCE,
            Scheme::CashKarp => &CASH_KARP,
        }
    }

    /// Order of the propagated solution.
    pub fn order(self) -> u32 {
        5
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Absolute and relative local error tolerance per step.
    pub tol: f64,
    pub scheme: Scheme,
    /// Safety cap on accepted plus rejected steps.
    pub max_steps: u64,
}

impl IntegratorOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, scheme: Scheme::DormandPrince, max_steps: 500_000_000 }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegrationStats {
    pub accepted: u64,
    pub rejected: u64,
    /// max over samples of |‖ψ‖² − 1|.
    pub norm_drift: f64,
}

/// Sampled trajectory with populations in the diabatic basis and, after
/// [`project_adiabatic`], in the adiabatic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    /// Per sample: (P_gg, P_s, P_rr) or (P_g, P_r), padded with zero.
    pub diabatic: Vec<[f64; 3]>,
    /// Per sample: (P_1, P_2, P_3) or (P_−, P_+), ascending energy.
    pub adiabatic: Option<Vec<[f64; 3]>>,
    pub final_state: StateVector,
    pub stats: IntegrationStats,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_diabatic(&self) -> [f64; 3] {
        *self.diabatic.last().expect("non-empty trajectory")
    }

    pub fn final_adiabatic(&self) -> Option<[f64; 3]> {
        self.adiabatic.as_ref().and_then(|a| a.last().copied())
    }
}

/// Integrates with the default Dormand-Prince scheme.
pub fn integrate(
    s: &SystemSpec,
    p: &DriveProtocol,
    psi0: &StateVector,
    window: &SweepWindow,
    tol: f64,
) -> Result<TrajectoryRecord> {
    integrate_with(s, p, psi0, window, &IntegratorOptions::new(tol))
}

pub fn integrate_with(
    s: &SystemSpec,
    p: &DriveProtocol,
    psi0: &StateVector,
    window: &SweepWindow,
    opts: &IntegratorOptions,
) -> Result<TrajectoryRecord> {
    if !(s.rabi.is_finite() && s.rabi >= 0.0 && s.interaction.is_finite()) {
        return Err(Error::invalid("system", "couplings must be finite, Ω ≥ 0"));
    }
    p.validate()?;
    if !(1e-12..=1e-6).contains(&opts.tol) {
        return Err(Error::invalid("tolerance", "must lie in [1e-12, 1e-6]"));
    }
    if psi0.amplitudes.dim() != s.dim() {
        return Err(Error::invalid("initial state", "dimension does not match the system"));
    }
    if (psi0.amplitudes.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::invalid("initial state", "must be normalized"));
    }

    let dim = s.dim();
    let tab = opts.scheme.tableau();
    let frame = Interaction::new(s, p, psi0.t);
    let rhs = |t: f64, y: &Amps| frame.generator(t, y);

    let mut times = Vec::with_capacity(window.samples);
    let mut states = Vec::with_capacity(window.samples);
    let mut diabatic = Vec::with_capacity(window.samples);
    let mut stats = IntegrationStats::default();

    let mut record = |t: f64, y: &Amps, stats: &mut IntegrationStats| {
        let v = CVector::from_raw(dim, frame.to_diabatic(t, y));
        let pops = v.populations();
        stats.norm_drift = stats.norm_drift.max((v.norm_sqr() - 1.0).abs());
        times.push(t);
        states.push(v);
        diabatic.push(pops);
    };

    let mut t = window.t_start;
    let mut y: Amps = *psi0.amplitudes.raw();
    record(t, &y, &mut stats);

    let scale_h = 1.0 + real_hamiltonian(s, p.detuning(t)).iter().flatten().fold(0.0, |m: f64, x| m.max(x.abs()));
    let mut h = (0.05 * opts.tol.powf(0.2) / scale_h).min(window.t_end - window.t_start);
    let mut controller = PiController::new();
    let mut k_first = rhs(t, &y);

    for sample in 1..window.samples {
        let target = window.sample_time(sample);
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::StepFailure { t, step: h });
            }
            let remaining = target - t;
            let truncated = h >= remaining;
            let step = if truncated { remaining } else { h };
            if step < 1e-14 * (1.0 + t.abs()) && !truncated {
                return Err(Error::StepFailure { t, step });
            }
            let (y_new, k_last, err) = rk_step(tab, &rhs, t, &y, &k_first, step, dim, opts.tol);
            if err <= 1.0 {
                stats.accepted += 1;
                t = if truncated { target } else { t + step };
                y = y_new;
                k_first = if tab.fsal { k_last } else { rhs(t, &y) };
                let proposed = controller.accept(step, err);
                // A truncated step says little about the natural step size.
                h = if truncated { h.max(proposed) } else { proposed };
            } else {
                stats.rejected += 1;
                h = controller.reject(step, err);
            }
        }
        record(t, &y, &mut stats);
    }

    let final_state = StateVector::new(t, CVector::from_raw(dim, frame.to_diabatic(t, &y)));
    Ok(TrajectoryRecord { dim, times, states, diabatic, adiabatic: None, final_state, stats })
}

/// Fills the adiabatic populations by projecting every sampled state onto the
/// instantaneous eigenbasis at its time.
pub fn project_adiabatic(s: &SystemSpec, p: &DriveProtocol, traj: &TrajectoryRecord) -> Result<TrajectoryRecord> {
    let mut adiabatic = Vec::with_capacity(traj.len());
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let frame = frame_at(s, p, t)?;
        adiabatic.push(frame.to_adiabatic(psi).populations());
    }
    let mut out = traj.clone();
    out.adiabatic = Some(adiabatic);
    Ok(out)
}

/// Time-averaged populations over `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAverage {
    pub diabatic: [f64; 3],
    pub adiabatic: Option<[f64; 3]>,
}

/// Trapezoidal time average of every population channel over the samples
/// inside `[from, to]`.
pub fn time_average(traj: &TrajectoryRecord, from: f64, to: f64) -> Result<TimeAverage> {
    let first = *traj.times.first().ok_or(Error::invalid("trajectory", "empty"))?;
    let last = *traj.times.last().expect("non-empty");
    let slack = 1e-9 * (1.0 + first.abs().max(last.abs()));
    if !(from < to && from >= first - slack && to <= last + slack) {
        return Err(Error::invalid("average window", "must lie inside the trajectory"));
    }
    let idx: Vec<usize> =
        (0..traj.len()).filter(|&k| traj.times[k] >= from - slack && traj.times[k] <= to + slack).collect();
    if idx.len() < 2 {
        return Err(Error::invalid("average window", "needs at least two samples"));
    }
    let average = |series: &[[f64; 3]]| {
        let mut acc = [0.0; 3];
        for pair in idx.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let dt = traj.times[b] - traj.times[a];
            for c in 0..3 {
                acc[c] += 0.5 * dt * (series[a][c] + series[b][c]);
            }
        }
        let span = traj.times[*idx.last().unwrap()] - traj.times[idx[0]];
        acc.map(|x| x / span)
    };
    Ok(TimeAverage { diabatic: average(&traj.diabatic), adiabatic: traj.adiabatic.as_deref().map(average) })
}

/// Advances `psi` from `t0` to `t1` in `steps` equal steps without error
/// control; used to measure the order of a scheme.
pub fn fixed_step(
    s: &SystemSpec,
    p: &DriveProtocol,
    scheme: Scheme,
    psi: &StateVector,
    t1: f64,
    steps: usize,
) -> StateVector {
    let tab = scheme.tableau();
    let dim = s.dim();
    let frame = Interaction::new(s, p, psi.t);
    let rhs = |t: f64, y: &Amps| frame.generator(t, y);
    let h = (t1 - psi.t) / steps as f64;
    let mut y = *psi.amplitudes.raw();
    let mut t = psi.t;
    for _ in 0..steps {
        let k0 = rhs(t, &y);
        y = rk_step(tab, &rhs, t, &y, &k0, h, dim, 1.0).0;
        t += h;
    }
    StateVector::new(t1, CVector::from_raw(dim, frame.to_diabatic(t1, &y)))
}

// Interaction picture of the diagonal part of H, anchored at `t0`:
// ψ_k(t) = e^{−iθ_k(t)} c_k(t) with θ_k = ∫_{t0}^t H_kk.
struct Interaction {
    drive: DriveProtocol,
    t0: f64,
    coupling: f64,
    interaction: f64,
    three: bool,
}

impl Interaction {
    fn new(s: &SystemSpec, p: &DriveProtocol, t0: f64) -> Self {
        let three = s.dim() == 3;
        let coupling = if three { s.rabi / SQRT_2 } else { 0.5 * s.rabi };
        Self { drive: *p, t0, coupling, interaction: s.interaction, three }
    }

    // ∫_{t0}^t Δ.
    fn detuning_integral(&self, t: f64) -> f64 {
        let t0 = self.t0;
        match self.drive {
            DriveProtocol::Linear { rate } => 0.5 * rate * (t - t0) * (t + t0),
            DriveProtocol::Periodic { bias, amplitude, frequency } => {
                bias * (t - t0) - amplitude / frequency * ((frequency * t).cos() - (frequency * t0).cos())
            }
        }
    }

    // e^{i(θ_0 − θ_1)} and e^{i(θ_1 − θ_2)}.
    #[inline]
    fn rotations(&self, t: f64) -> (C64, C64) {
        let phi = self.detuning_integral(t);
        let (s1, c1) = phi.sin_cos();
        if self.three {
            let (s2, c2) = (phi - self.interaction * (t - self.t0)).sin_cos();
            (C64::new(c1, s1), C64::new(c2, s2))
        } else {
            (C64::new(c1, s1), C64::new(1.0, 0.0))
        }
    }

    // −i·H_I(t)·c.
    #[inline]
    fn generator(&self, t: f64, c: &Amps) -> Amps {
        let (a, b) = self.rotations(t);
        let g = self.coupling;
        let mi = C64::new(0.0, -g);
        let mut out = [C64::new(0.0, 0.0); MAX_DIM];
        out[0] = mi * a * c[1];
        out[1] = mi * a.conj() * c[0];
        if self.three {
            out[1] += mi * b * c[2];
            out[2] = mi * b.conj() * c[1];
        }
        out
    }

    fn to_diabatic(&self, t: f64, c: &Amps) -> Amps {
        let phi = self.detuning_integral(t);
        let mut out = *c;
        // θ_1 = −∫Δ, θ_2 = V0·(t − t0) − 2∫Δ.
        let (s1, c1) = phi.sin_cos();
        out[1] *= C64::new(c1, s1);
        if self.three {
            let (s2, c2) = (2.0 * phi - self.interaction * (t - self.t0)).sin_cos();
            out[2] *= C64::new(c2, s2);
        }
        out
    }
}

struct Tableau {
    c: &'static [f64],
    a: &'static [&'static [f64]],
    b: &'static [f64],
    /// b − b̂: weights of the embedded error estimate.
    e: &'static [f64],
    fsal: bool,
}

static DORMAND_PRINCE: Tableau = Tableau {
    c: &[0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0],
    a: &[
        &[],
        &[1.0 / 5.0],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
        &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
        &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
        &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ],
    b: &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0],
    e: &[
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ],
    fsal: true,
};

static CASH_KARP: Tableau = Tableau {
    c: &[0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0],
    a: &[
        &[],
        &[1.0 / 5.0],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0],
        &[-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0],
        &[1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0, 44275.0 / 110592.0, 253.0 / 4096.0],
    ],
    b: &[37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0],
    e: &[
        37.0 / 378.0 - 2825.0 / 27648.0,
        0.0,
        250.0 / 621.0 - 18575.0 / 48384.0,
        125.0 / 594.0 - 13525.0 / 55296.0,
        -277.0 / 14336.0,
        512.0 / 1771.0 - 1.0 / 4.0,
    ],
    fsal: false,
};

const MAX_STAGES: usize = 7;

// One explicit RK step. Returns the new state, the derivative at the last
// stage (the derivative at t + h for first-same-as-last pairs) and the
// scaled error norm.
#[allow(clippy::too_many_arguments)]
#[inline]
fn rk_step<F>(tab: &Tableau, rhs: &F, t: f64, y: &Amps, k0: &Amps, h: f64, dim: usize, tol: f64) -> (Amps, Amps, f64)
where
    F: Fn(f64, &Amps) -> Amps,
{
    let stages = tab.c.len();
    let zero = C64::new(0.0, 0.0);
    let mut k = [[zero; MAX_DIM]; MAX_STAGES];
    k[0] = *k0;
    let mut y_new = *y;
    for s in 1..stages {
        let mut arg = *y;
        for (j, &a) in tab.a[s].iter().enumerate() {
            if a != 0.0 {
                for i in 0..dim {
                    arg[i] += k[j][i] * (h * a);
                }
            }
        }
        if tab.fsal && s == stages - 1 {
            // The last stage argument is the propagated solution.
            y_new = arg;
        }
        k[s] = rhs(t + tab.c[s] * h, &arg);
    }
    if !tab.fsal {
        for (j, &b) in tab.b.iter().enumerate() {
            if b != 0.0 {
                for i in 0..dim {
                    y_new[i] += k[j][i] * (h * b);
                }
            }
        }
    }
    let mut err = 0.0_f64;
    for i in 0..dim {
        let mut e = zero;
        for (j, &w) in tab.e.iter().enumerate() {
            if w != 0.0 {
                e += k[j][i] * w;
            }
        }
        let e = (e * h).norm();
        let sc = tol + tol * y[i].norm().max(y_new[i].norm());
        err = err.max(e / sc);
    }
    (y_new, k[stages - 1], err)
}

struct PiController {
    prev_err: f64,
}

impl PiController {
    const SAFETY: f64 = 0.9;
    const ALPHA: f64 = 0.17;
    const BETA: f64 = 0.04;
    const MIN_FACTOR: f64 = 0.2;
    const MAX_FACTOR: f64 = 5.0;

    fn new() -> Self {
        Self { prev_err: 1e-4 }
    }

    fn accept(&mut self, h: f64, err: f64) -> f64 {
        let err = err.max(1e-10);
        let factor = Self::SAFETY * err.powf(-Self::ALPHA) * self.prev_err.powf(Self::BETA);
        self.prev_err = err;
        h * factor.clamp(Self::MIN_FACTOR, Self::MAX_FACTOR)
    }

    fn reject(&mut self, h: f64, err: f64) -> f64 {
        let factor = Self::SAFETY * err.powf(-0.2);
        h * factor.clamp(Self::MIN_FACTOR, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rabi_run(t_end: f64, samples: usize) -> TrajectoryRecord {
        let s = SystemSpec::two_level(1.0);
        let p = DriveProtocol::linear(0.0);
        let psi0 = StateVector::diabatic(2, 0, 0.0);
        let w = SweepWindow::new(0.0, t_end, samples).unwrap();
        integrate(&s, &p, &psi0, &w, 1e-11).unwrap()
    }

    #[test]
    fn resonant_rabi_oscillation() {
        let traj = rabi_run(PI, 3);
        assert!((traj.diabatic[1][1] - 0.5).abs() < 1e-9);
        assert!((traj.diabatic[2][1] - 1.0).abs() < 1e-9);
        assert!(traj.stats.norm_drift < 1e-9);
    }

    #[test]
    fn rabi_average_is_one_half() {
        let traj = rabi_run(4.0 * PI, 2001);
        let avg = time_average(&traj, 0.0, 4.0 * PI).unwrap();
        assert!((avg.diabatic[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn constant_populations_average_to_themselves() {
        let s = SystemSpec::three_level(0.0, 3.0);
        let p = DriveProtocol::periodic(1.0, 4.0, 2.0);
        let amps = CVector::from_real(&[0.6, 0.0, 0.8]);
        let w = SweepWindow::new(0.0, 10.0, 101).unwrap();
        let traj = integrate(&s, &p, &StateVector::new(0.0, amps), &w, 1e-10).unwrap();
        for pops in &traj.diabatic {
            assert!((pops[0] - 0.36).abs() < 1e-8 && (pops[2] - 0.64).abs() < 1e-8);
        }
        let avg = time_average(&traj, 2.0, 8.0).unwrap();
        assert!((avg.diabatic[0] - 0.36).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_tolerance_and_unnormalized_state() {
        let s = SystemSpec::two_level(1.0);
        let p = DriveProtocol::linear(1.0);
        let w = SweepWindow::new(0.0, 1.0, 2).unwrap();
        let psi = StateVector::diabatic(2, 0, 0.0);
        assert!(integrate(&s, &p, &psi, &w, 1e-3).is_err());
        let bad = StateVector::new(0.0, CVector::from_real(&[1.0, 1.0]));
        assert!(integrate(&s, &p, &bad, &w, 1e-10).is_err());
    }

    #[test]
    fn step_budget_exhaustion_is_step_failure() {
        let s = SystemSpec::two_level(1.0);
        let p = DriveProtocol::linear(1.0);
        let w = SweepWindow::new(0.0, 100.0, 2).unwrap();
        let psi = StateVector::diabatic(2, 0, 0.0);
        let opts = IntegratorOptions { max_steps: 10, ..IntegratorOptions::new(1e-12) };
        assert!(matches!(integrate_with(&s, &p, &psi, &w, &opts), Err(Error::StepFailure { .. })));
    }

    #[test]
    fn window_validation() {
        assert!(SweepWindow::new(1.0, 1.0, 10).is_err());
        assert!(SweepWindow::new(0.0, 1.0, 1).is_err());
        let w = SweepWindow::standard_linear(&SystemSpec::three_level(1.0, 10.0), 2.0, 10).unwrap();
        assert_eq!(w.t_start, -5.0);
        assert_eq!(w.t_end, 25.0);
    }
}
