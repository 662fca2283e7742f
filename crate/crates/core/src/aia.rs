//! Adiabatic impulse approximation.
//!
//! Evolution is split into adiabatic segments, diagonal in the instantaneous
//! eigenbasis, and point-like Landau-Zener impulses at the avoided crossings.
//!
//! Amplitudes are expressed in a gauge in which every adiabatic eigenvector
//! has a positive first (|g⟩ or |gg⟩) component. Both Hamiltonians are
//! tridiagonal with positive couplings, so that component never vanishes
//! and the gauge is continuous in Δ; adiabatic transport is then a pure
//! dynamical phase. Which of G and Gᵀ acts at a crossing follows from the
//! sign of the non-adiabatic coupling ⟨u|∂H/∂Δ|l⟩ times the sweep direction.
//! The rule reproduces G on increasing and Gᵀ on decreasing branches for the
//! two-level system.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    crossing_times, eigensystem, energies, Arity, AvoidedCrossing, CrossingTime, DriveProtocol, SystemSpec,
};
use crate::linalg::{CMatrix, CVector, C64};
use crate::propagator::{StateVector, SweepWindow};
use crate::quadrature;
use crate::special;

/// Relative accuracy of the dynamical-phase integrals.
const PHASE_REL_TOL: f64 = 1e-13;

/// Landau-Zener parameters of one crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LZParams {
    /// Minimal adiabatic gap at the crossing.
    pub gap: f64,
    /// |dΔ/dt| at the crossing.
    pub rate: f64,
    /// Difference of the crossing diabatic slopes in units of dΔ/dt.
    pub slope_factor: f64,
}

impl LZParams {
    pub fn new(gap: f64, rate: f64, slope_factor: f64) -> Result<Self> {
        let p = Self { gap, rate, slope_factor };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::invalid("gap", "must be positive and finite"));
        }
        if !(self.rate > 0.0) {
            return Err(Error::invalid("rate", "must be positive"));
        }
        if !(self.slope_factor > 0.0 && self.slope_factor.is_finite()) {
            return Err(Error::invalid("slope factor", "must be positive and finite"));
        }
        Ok(())
    }

    /// Adiabaticity parameter γ = gap² / (4·slope·rate).
    pub fn gamma(&self) -> f64 {
        self.gap * self.gap / (4.0 * self.slope_factor * self.rate)
    }

    /// Upper bound (√γ/gap)·max(1, γ) on the duration of the transition.
    pub fn transition_time(&self) -> f64 {
        let g = self.gamma();
        g.sqrt() / self.gap * g.max(1.0)
    }
}

/// P = exp(−π·gap² / (2·slope·rate)) = exp(−2πγ).
pub fn lz_probability(p: &LZParams) -> f64 {
    (-2.0 * PI * p.gamma()).exp()
}

pub fn stokes_phase(p: &LZParams) -> f64 {
    special::stokes_phase(p.gamma())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferKind {
    /// Landau-Zener impulse at crossing `crossing`; `transposed` marks Gᵀ.
    Impulse { crossing: u8, transposed: bool },
    /// Adiabatic phase accumulation over `[start, end]`.
    Adiabatic { start: f64, end: f64 },
}

/// A unitary step of an AIA product, in the adiabatic basis (ascending
/// energy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub kind: TransferKind,
    pub entries: CMatrix,
}

/// The impulse matrix of `crossing`, acting on its (upper, lower) pair as
/// [[√(1−P)e^{−iφ̃}, −√P], [√P, √(1−P)e^{iφ̃}]] and as identity elsewhere.
pub fn impulse_matrix(dim: usize, crossing: &AvoidedCrossing, p: &LZParams) -> TransferMatrix {
    impulse_with(dim, crossing, p, stokes_phase(p), false)
}

fn impulse_with(dim: usize, crossing: &AvoidedCrossing, p: &LZParams, stokes: f64, transposed: bool) -> TransferMatrix {
    let prob = lz_probability(p);
    let stay = (1.0 - prob).sqrt();
    let hop = prob.sqrt();
    let (u, l) = (crossing.upper, crossing.lower);
    let mut m = CMatrix::identity(dim);
    m[(u, u)] = C64::from_polar(stay, -stokes);
    m[(l, l)] = C64::from_polar(stay, stokes);
    let sign = if transposed { -1.0 } else { 1.0 };
    m[(u, l)] = C64::new(-sign * hop, 0.0);
    m[(l, u)] = C64::new(sign * hop, 0.0);
    TransferMatrix { kind: TransferKind::Impulse { crossing: crossing.index, transposed }, entries: m }
}

/// Accumulated dynamical phases ζ_j = ∫ E_j dt over `[t1, t2]`.
pub fn dynamical_phases(s: &SystemSpec, p: &DriveProtocol, t1: f64, t2: f64) -> [f64; 3] {
    quadrature::integrate(|t| energies(s, p.detuning(t)), t1, t2, PHASE_REL_TOL, 1e-13)
}

/// diag(e^{−iζ_j}) for a segment free of crossings.
pub fn adiabatic_matrix(s: &SystemSpec, p: &DriveProtocol, t1: f64, t2: f64) -> Result<TransferMatrix> {
    if !(t1 <= t2) {
        return Err(Error::invalid("segment", "need t1 ≤ t2"));
    }
    if t1 < t2 {
        for c in crossing_times(s, p, t1, t2)? {
            if c.time > t1 {
                return Err(Error::CrossingInsideSegment { start: t1, end: t2, crossing: c.time });
            }
        }
    }
    Ok(segment(s, p, t1, t2).0)
}

fn segment(s: &SystemSpec, p: &DriveProtocol, t1: f64, t2: f64) -> (TransferMatrix, [f64; 3]) {
    let dim = s.dim();
    let zeta = dynamical_phases(s, p, t1, t2);
    let diag: Vec<C64> = zeta[..dim].iter().map(|&z| C64::from_polar(1.0, -z)).collect();
    let m = TransferMatrix { kind: TransferKind::Adiabatic { start: t1, end: t2 }, entries: CMatrix::diagonal(&diag) };
    (m, zeta)
}

/// Eigenvectors at `detuning` in the AIA gauge (first component positive).
pub fn gauge_frame(s: &SystemSpec, detuning: f64) -> Result<CMatrix> {
    let frame = eigensystem(s, detuning)?;
    let cols: Vec<CVector> = (0..frame.dim())
        .map(|j| {
            let v = frame.state(j);
            if v[0].re < 0.0 {
                v.scale(C64::new(-1.0, 0.0))
            } else {
                v
            }
        })
        .collect();
    Ok(CMatrix::from_columns(&cols))
}

/// Sign of ⟨upper|∂H/∂Δ|lower⟩ at the crossing, in the AIA gauge.
fn coupling_sign(s: &SystemSpec, c: &AvoidedCrossing) -> Result<f64> {
    let f = gauge_frame(s, c.detuning)?;
    // ∂H/∂Δ = −diag(0, 1, 2) (two-level: −diag(0, 1)).
    let mut acc = 0.0;
    for k in 0..s.dim() {
        acc -= (k as f64) * (f[(k, c.upper)].re * f[(k, c.lower)].re);
    }
    Ok(if acc < 0.0 { -1.0 } else { 1.0 })
}

/// Switches that change the AIA model itself, used for ablations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiaOptions {
    /// Include the Stokes phase in the impulse matrices.
    pub stokes: bool,
}

impl Default for AiaOptions {
    fn default() -> Self {
        Self { stokes: true }
    }
}

/// Phase bookkeeping of one impulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulseRecord {
    pub time: f64,
    pub crossing: u8,
    pub branch: i64,
    pub transposed: bool,
    pub params: LZParams,
    pub probability: f64,
    pub stokes_phase: f64,
}

/// Phase bookkeeping of one adiabatic segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentRecord {
    pub start: f64,
    pub end: f64,
    /// ζ_j, ascending-energy order.
    pub zeta: [f64; 3],
}

/// Time-ordered AIA factors over `[start, end]` and their product.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleDecomposition {
    pub start: f64,
    pub end: f64,
    /// Factors in time order (the product applies them right to left).
    pub steps: Vec<TransferMatrix>,
    pub segments: Vec<SegmentRecord>,
    pub impulses: Vec<ImpulseRecord>,
    pub product: CMatrix,
    /// φ_G = ½∫Δ dt over the window.
    pub global_phase: f64,
    /// Two-level cycles only: cos α = Re(e^{−iφ_G}·tr F)/2.
    pub alpha: Option<f64>,
    /// Two-level cycles only: φ_s = ½∫Ω̄ dt between the two crossings + φ̃.
    pub stuckelberg_phase: Option<f64>,
}

impl CycleDecomposition {
    /// Applies the factors to `a` and returns the amplitudes after each one.
    fn trace(&self, a: &CVector) -> Vec<(f64, CVector)> {
        let mut out = Vec::with_capacity(self.steps.len());
        let mut cur = *a;
        for step in &self.steps {
            cur = step.entries.mul_vec(&cur);
            let t = match step.kind {
                TransferKind::Adiabatic { end, .. } => end,
                TransferKind::Impulse { .. } => f64::NAN,
            };
            out.push((t, cur));
        }
        out
    }
}

/// Builds the AIA factorization of the evolution over `[start, end]`.
pub fn decompose(
    s: &SystemSpec,
    p: &DriveProtocol,
    start: f64,
    end: f64,
    opts: &AiaOptions,
) -> Result<CycleDecomposition> {
    s.validate()?;
    p.validate()?;
    if !(start < end) {
        return Err(Error::invalid("window", "need start < end"));
    }
    let dim = s.dim();
    let crossings = crossing_times(s, p, start, end)?;
    let mut steps = Vec::with_capacity(2 * crossings.len() + 1);
    let mut segments = Vec::with_capacity(crossings.len() + 1);
    let mut impulses = Vec::with_capacity(crossings.len());
    let mut product = CMatrix::identity(dim);
    let mut cursor = start;
    let mut signs: Vec<(u8, f64)> = Vec::new();

    let mut push_segment = |from: f64, to: f64, steps: &mut Vec<TransferMatrix>, product: &mut CMatrix| {
        if to > from {
            let (m, zeta) = segment(s, p, from, to);
            *product = m.entries * *product;
            steps.push(m);
            segments.push(SegmentRecord { start: from, end: to, zeta });
        }
    };

    for ct in &crossings {
        push_segment(cursor, ct.time, &mut steps, &mut product);
        let sign = match signs.iter().find(|(i, _)| *i == ct.crossing.index) {
            Some(&(_, sgn)) => sgn,
            None => {
                let sgn = coupling_sign(s, &ct.crossing)?;
                signs.push((ct.crossing.index, sgn));
                sgn
            }
        };
        let record = impulse_record(ct, sign, opts)?;
        let m = impulse_with(dim, &ct.crossing, &record.params, record.stokes_phase, record.transposed);
        product = m.entries * product;
        steps.push(m);
        impulses.push(record);
        cursor = ct.time;
    }
    push_segment(cursor, end, &mut steps, &mut product);

    let [half_drive] = quadrature::integrate(|t| [0.5 * p.detuning(t)], start, end, PHASE_REL_TOL, 1e-13);
    let (alpha, stuckelberg_phase) = if s.arity == Arity::TwoLevel && impulses.len() == 2 {
        let reduced = (product[(0, 0)] + product[(1, 1)]) * C64::from_polar(1.0, -half_drive) * 0.5;
        let between = quadrature::integrate(
            |t| {
                let e = energies(s, p.detuning(t));
                [e[1] - e[0]]
            },
            impulses[0].time,
            impulses[1].time,
            PHASE_REL_TOL,
            1e-13,
        )[0];
        (Some(reduced.re.clamp(-1.0, 1.0).acos()), Some(0.5 * between + impulses[0].stokes_phase))
    } else {
        (None, None)
    };

    Ok(CycleDecomposition {
        start,
        end,
        steps,
        segments,
        impulses,
        product,
        global_phase: half_drive,
        alpha,
        stuckelberg_phase,
    })
}

// Canonical orientation: the two-level crossing traversed with Δ increasing
// has negative coupling sign in the AIA gauge and takes G.
const G_ORIENTATION: f64 = -1.0;

fn impulse_record(ct: &CrossingTime, coupling: f64, opts: &AiaOptions) -> Result<ImpulseRecord> {
    let params = LZParams::new(ct.crossing.gap, ct.rate, ct.crossing.slope_factor)?;
    let direction = if ct.is_increasing() { 1.0 } else { -1.0 };
    let transposed = coupling * direction != G_ORIENTATION;
    Ok(ImpulseRecord {
        time: ct.time,
        crossing: ct.crossing.index,
        branch: ct.branch,
        transposed,
        params,
        probability: lz_probability(&params),
        stokes_phase: if opts.stokes { stokes_phase(&params) } else { 0.0 },
    })
}

/// Result of an AIA composition.
#[derive(Debug, Clone, PartialEq)]
pub struct AiaOutcome {
    /// Adiabatic amplitudes (AIA gauge) at the end.
    pub final_adiabatic: CVector,
    /// Final diabatic state reconstructed from the eigenbasis at the end.
    pub final_diabatic: CVector,
    /// |final_adiabatic|², ascending energy.
    pub final_populations: [f64; 3],
    /// Duration-weighted average of the piecewise-constant adiabatic
    /// populations (linear sweeps: over the window; periodic: over all
    /// cycles).
    pub average_populations: [f64; 3],
    /// Factorization of the window (linear) or of one cycle (periodic).
    pub decomposition: CycleDecomposition,
}

fn project_initial(s: &SystemSpec, p: &DriveProtocol, psi0: &StateVector) -> Result<CVector> {
    if psi0.amplitudes.dim() != s.dim() {
        return Err(Error::invalid("initial state", "dimension does not match the system"));
    }
    let f = gauge_frame(s, p.detuning(psi0.t))?;
    Ok(f.adjoint().mul_vec(&psi0.amplitudes))
}

fn finish(
    s: &SystemSpec,
    p: &DriveProtocol,
    t_end: f64,
    a: CVector,
    average_populations: [f64; 3],
    decomposition: CycleDecomposition,
) -> Result<AiaOutcome> {
    let f = gauge_frame(s, p.detuning(t_end))?;
    Ok(AiaOutcome {
        final_diabatic: f.mul_vec(&a),
        final_populations: a.populations(),
        final_adiabatic: a,
        average_populations,
        decomposition,
    })
}

// Adds the duration-weighted populations of one pass through `d` starting
// from `a`; returns the amplitudes at the end of the pass.
fn accumulate(d: &CycleDecomposition, a: &CVector, acc: &mut [f64; 3]) -> CVector {
    let mut pops = a.populations();
    let mut cur = *a;
    for (step, (_, after)) in d.steps.iter().zip(d.trace(a)) {
        if let TransferKind::Adiabatic { start, end } = step.kind {
            for (k, p) in pops.iter().enumerate() {
                acc[k] += p * (end - start);
            }
        }
        cur = after;
        pops = cur.populations();
    }
    cur
}

/// AIA over a linear sweep window: F = U_n G_n ⋯ U_2 G_1 U_1.
///
/// `psi0` is a diabatic state at `window.t_start`; it is projected onto the
/// instantaneous eigenbasis there.
pub fn compose_linear(
    s: &SystemSpec,
    p: &DriveProtocol,
    psi0: &StateVector,
    window: &SweepWindow,
    opts: &AiaOptions,
) -> Result<AiaOutcome> {
    if !matches!(p, DriveProtocol::Linear { .. }) {
        return Err(Error::invalid("drive", "compose_linear needs a linear drive"));
    }
    let d = decompose(s, p, window.t_start, window.t_end, opts)?;
    let a0 = project_initial(s, p, &StateVector::new(window.t_start, psi0.amplitudes))?;
    let mut acc = [0.0; 3];
    let a = accumulate(&d, &a0, &mut acc);
    let span = window.t_end - window.t_start;
    finish(s, p, window.t_end, a, acc.map(|x| x / span), d)
}

/// AIA over `cycles` periods of a periodic drive starting at `psi0.t`.
///
/// The one-cycle matrix is built once; the final amplitudes come from its
/// power, the averages from stepping through every cycle.
pub fn compose_periodic(
    s: &SystemSpec,
    p: &DriveProtocol,
    psi0: &StateVector,
    cycles: u32,
    opts: &AiaOptions,
) -> Result<AiaOutcome> {
    let period = p.period().ok_or(Error::invalid("drive", "compose_periodic needs a periodic drive"))?;
    if cycles == 0 {
        return Err(Error::invalid("cycles", "must be at least one"));
    }
    let start = psi0.t;
    let d = decompose(s, p, start, start + period, opts)?;
    if d.impulses.is_empty() {
        return Err(Error::NoCrossing);
    }
    let a0 = project_initial(s, p, psi0)?;
    let mut acc = [0.0; 3];
    let mut a = a0;
    for _ in 0..cycles {
        a = accumulate(&d, &a, &mut acc);
    }
    let total = period * f64::from(cycles);
    let a_final = d.product.pow(u64::from(cycles)).mul_vec(&a0);
    finish(s, p, start + total, a_final, acc.map(|x| x / total), d)
}

/// Closed-form single-atom results for k cycles of a periodic drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelClosedForm {
    pub cycles: u32,
    pub p_lz: f64,
    pub stokes_phase: f64,
    /// φ_s = ½∫_{τ1}^{τ2} Ω̄ dt + φ̃.
    pub stuckelberg_phase: f64,
    /// η0..η3.
    pub eta: [f64; 4],
    /// φ_G = ½∫Δ dt over one cycle.
    pub global_phase: f64,
    pub g11: C64,
    pub g21: C64,
    /// cos α = Re g11.
    pub alpha: f64,
    pub u11: C64,
    pub u21: C64,
    /// P₊ᵏ = 4(1−P)P sin²φ_s · sin²kα / sin²α.
    pub excitation: f64,
    /// Bound sin²kα on P₊ᵏ at fixed α.
    pub excitation_bound: f64,
    /// Long-time average |g21|² / (2(|g21|² + (Im g11)²)).
    pub average_excitation: f64,
}

/// Evaluates the two-level k-cycle formulas for the cycle starting at `t0`.
///
/// The crossings τ1 < τ2 are the two inside `[t0, t0 + T)`; Ω̄ integrals
/// are by adaptive quadrature.
pub fn closed_form_two_level(
    s: &SystemSpec,
    p: &DriveProtocol,
    t0: f64,
    cycles: u32,
    opts: &AiaOptions,
) -> Result<TwoLevelClosedForm> {
    if s.arity != Arity::TwoLevel {
        return Err(Error::invalid("arity", "closed form is for the two-level system"));
    }
    let period = p.period().ok_or(Error::invalid("drive", "closed form needs a periodic drive"))?;
    let ct = crossing_times(s, p, t0, t0 + period)?;
    if ct.is_empty() {
        return Err(Error::NoCrossing);
    }
    if ct.len() != 2 {
        return Err(Error::invalid("drive", "closed form needs two crossings per cycle"));
    }
    let (tau1, tau2) = (ct[0].time, ct[1].time);
    let params = LZParams::new(s.rabi, ct[0].rate, 1.0)?;
    let prob = lz_probability(&params);
    let phi = if opts.stokes { stokes_phase(&params) } else { 0.0 };
    let bar = |a: f64, b: f64| quadrature::integrate(|t| [p.detuning(t).hypot(s.rabi)], a, b, PHASE_REL_TOL, 1e-13)[0];
    let before = bar(t0, tau1);
    let between = bar(tau1, tau2);
    let after = bar(tau2, t0 + period);
    let total = before + between + after;
    let eta = [0.5 * total + 2.0 * phi, 0.5 * total - between, 0.5 * total - after + 2.0 * phi, before - 0.5 * total];
    let [half_drive] = quadrature::integrate(|t| [0.5 * p.detuning(t)], t0, t0 + period, PHASE_REL_TOL, 1e-13);
    let e = |x: f64| C64::from_polar(1.0, -x);
    let g11 = e(eta[0]) * (1.0 - prob) + e(eta[1]) * prob;
    let g21 = (e(eta[3]) - e(eta[2])) * C64::from_polar(1.0, phi) * ((1.0 - prob) * prob).sqrt();
    let alpha = g11.re.clamp(-1.0, 1.0).acos();
    let k = f64::from(cycles);
    let ratio = if alpha.sin().abs() < 1e-300 { k } else { (k * alpha).sin() / alpha.sin() };
    let u11 = C64::new((k * alpha).cos(), g11.im * ratio);
    let u21 = g21 * ratio;
    let phi_s = 0.5 * between + phi;
    let amp = 4.0 * (1.0 - prob) * prob * phi_s.sin().powi(2);
    let denom = g21.norm_sqr() + g11.im * g11.im;
    Ok(TwoLevelClosedForm {
        cycles,
        p_lz: prob,
        stokes_phase: phi,
        stuckelberg_phase: phi_s,
        eta,
        global_phase: half_drive,
        g11,
        g21,
        alpha,
        u11,
        u21,
        excitation: amp * ratio * ratio,
        excitation_bound: (k * alpha).sin().powi(2),
        average_excitation: if denom > 0.0 { 0.5 * g21.norm_sqr() / denom } else { 0.0 },
    })
}

/// One checked inequality `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criterion {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Criterion {
    fn less(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, lhs, rhs, pass: lhs < rhs }
    }

    /// rhs − lhs.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Advisory verdict on the applicability of the AIA.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    /// (crossing index, τ_LZ) per reachable crossing.
    pub transition_times: Vec<(u8, f64)>,
    /// Durations of the adiabatic intervals between consecutive crossings.
    pub adiabatic_durations: Vec<f64>,
    pub criteria: Vec<Criterion>,
    pub verdict: bool,
}

pub fn validity_report(s: &SystemSpec, p: &DriveProtocol) -> Result<ValidityReport> {
    s.validate()?;
    p.validate()?;
    let mut criteria = Vec::new();
    let mut transition_times = Vec::new();
    let mut adiabatic_durations = Vec::new();
    let om = s.rabi;
    match (*p, s.arity) {
        (DriveProtocol::Linear { rate }, Arity::TwoLevel) => {
            let lz = LZParams::new(om, rate.abs(), 1.0)?;
            transition_times.push((1, lz.transition_time()));
        }
        (DriveProtocol::Linear { rate }, Arity::ThreeLevel) => {
            let v = rate.abs();
            if !(v > 0.0) {
                return Err(Error::invalid("rate", "must be nonzero"));
            }
            let tau = 0.5 / v.sqrt() * (om * om / (2.0 * v)).max(1.0);
            let ta = s.interaction / (2.0 * v);
            transition_times.push((1, tau));
            adiabatic_durations.push(ta);
            criteria.push(Criterion::less("tau_LZ < T_a = V0/2v", tau, ta));
            if v > 0.5 * om * om {
                criteria.push(Criterion::less("v < V0^2 (v > Omega^2/2)", v, s.interaction.powi(2)));
            } else {
                criteria.push(Criterion::less(
                    "v < 16 V0^2/Omega^4 (v <= Omega^2/2)",
                    v,
                    16.0 * s.interaction.powi(2) / om.powi(4),
                ));
            }
        }
        (DriveProtocol::Periodic { bias, amplitude, frequency }, arity) => {
            let period = 2.0 * PI / frequency;
            let ct = crossing_times(s, p, 0.0, period)?;
            if ct.is_empty() {
                return Err(Error::NoCrossing);
            }
            let mut seen: Vec<u8> = Vec::new();
            for c in &ct {
                if !seen.contains(&c.crossing.index) {
                    seen.push(c.crossing.index);
                    let lz = LZParams::new(c.crossing.gap, c.rate, c.crossing.slope_factor)?;
                    transition_times.push((c.crossing.index, lz.transition_time()));
                }
            }
            for (k, c) in ct.iter().enumerate() {
                let next = if k + 1 < ct.len() { ct[k + 1].time } else { ct[0].time + period };
                adiabatic_durations.push(next - c.time);
            }
            let shortest = adiabatic_durations.iter().copied().fold(f64::INFINITY, f64::min);
            if arity == Arity::TwoLevel {
                criteria.push(Criterion::less("Omega < delta - |Delta0|", om, amplitude - bias.abs()));
                criteria.push(Criterion::less("Omega^2 < delta*omega", om * om, amplitude * frequency));
            }
            for &(idx, tau) in &transition_times {
                criteria.push(Criterion::less(
                    match idx {
                        1 => "tau_LZ1 < shortest adiabatic interval",
                        2 => "tau_LZ2 < shortest adiabatic interval",
                        _ => "tau_LZ3 < shortest adiabatic interval",
                    },
                    tau,
                    shortest,
                ));
            }
        }
    }
    let verdict = criteria.iter().all(|c| c.pass);
    Ok(ValidityReport { transition_times, adiabatic_durations, criteria, verdict })
}
