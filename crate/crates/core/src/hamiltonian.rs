//! Hamiltonians, detuning schedules, instantaneous eigensystems and the
//! avoided-crossing structure of the one- and two-atom systems.
//!
//! Diabatic bases: `{|g⟩, |r⟩}` for one atom and `{|gg⟩, |s⟩, |rr⟩}` for two,
//! with `|s⟩ = (|gr⟩ + |rg⟩)/√2`. Adiabatic states are stored in ascending
//! energy order. For the two-atom system ascending order coincides with the
//! asymptotic labelling `|1⟩, |2⟩, |3⟩` (|1⟩ → |gg⟩ as Δ → −∞, |1⟩ → |rr⟩ as
//! Δ → +∞, |2⟩ → |s⟩ at both ends), because the three levels never cross.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2, TAU};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

/// Relative tolerance (in units of Ω) below which two eigenvalues are
/// reported as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Below this |E_j|/Ω the closed-form three-level eigenvector divides by a
/// vanishing eigenvalue and inverse iteration takes over.
pub const SMALL_EIGENVALUE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    TwoLevel,
    ThreeLevel,
}

impl Arity {
    pub fn dim(self) -> usize {
        match self {
            Arity::TwoLevel => 2,
            Arity::ThreeLevel => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub arity: Arity,
    /// Rabi frequency Ω.
    pub rabi: f64,
    /// Rydberg-Rydberg interaction V0; ignored for a single atom.
    pub interaction: f64,
}

impl SystemSpec {
    pub fn two_level(rabi: f64) -> Self {
        Self { arity: Arity::TwoLevel, rabi, interaction: 0.0 }
    }

    pub fn three_level(rabi: f64, interaction: f64) -> Self {
        Self { arity: Arity::ThreeLevel, rabi, interaction }
    }

    pub fn dim(&self) -> usize {
        self.arity.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi.is_finite() && self.rabi > 0.0) {
            return Err(Error::invalid("rabi", "must be finite and positive"));
        }
        if !(self.interaction.is_finite() && self.interaction >= 0.0) {
            return Err(Error::invalid("interaction", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// The detuning schedule Δ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveProtocol {
    /// Δ(t) = v·t.
    Linear { rate: f64 },
    /// Δ(t) = Δ0 + δ·sin(ωt).
    Periodic { bias: f64, amplitude: f64, frequency: f64 },
}

impl DriveProtocol {
    pub fn linear(rate: f64) -> Self {
        DriveProtocol::Linear { rate }
    }

    pub fn periodic(bias: f64, amplitude: f64, frequency: f64) -> Self {
        DriveProtocol::Periodic { bias, amplitude, frequency }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DriveProtocol::Linear { rate } if !rate.is_finite() => Err(Error::invalid("rate", "must be finite")),
            DriveProtocol::Periodic { bias, amplitude, frequency } => {
                if !bias.is_finite() {
                    Err(Error::invalid("bias", "must be finite"))
                } else if !(amplitude.is_finite() && amplitude >= 0.0) {
                    Err(Error::invalid("amplitude", "must be finite and non-negative"))
                } else if !(frequency.is_finite() && frequency > 0.0) {
                    Err(Error::invalid("frequency", "must be finite and positive"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn detuning(&self, t: f64) -> f64 {
        match *self {
            DriveProtocol::Linear { rate } => rate * t,
            DriveProtocol::Periodic { bias, amplitude, frequency } => bias + amplitude * (frequency * t).sin(),
        }
    }

    /// dΔ/dt.
    pub fn detuning_rate(&self, t: f64) -> f64 {
        match *self {
            DriveProtocol::Linear { rate } => rate,
            DriveProtocol::Periodic { amplitude, frequency, .. } => amplitude * frequency * (frequency * t).cos(),
        }
    }

    /// Drive period 2π/ω, or `None` for a linear sweep.
    pub fn period(&self) -> Option<f64> {
        match *self {
            DriveProtocol::Linear { .. } => None,
            DriveProtocol::Periodic { frequency, .. } => Some(TAU / frequency),
        }
    }
}

/// Real symmetric Hamiltonian in the diabatic basis, padded to 3 x 3.
#[inline]
pub(crate) fn real_hamiltonian(s: &SystemSpec, detuning: f64) -> [[f64; 3]; 3] {
    match s.arity {
        Arity::TwoLevel => {
            let c = 0.5 * s.rabi;
            [[0.0, c, 0.0], [c, -detuning, 0.0], [0.0, 0.0, 0.0]]
        }
        Arity::ThreeLevel => {
            let c = s.rabi / SQRT_2;
            [[0.0, c, 0.0], [c, -detuning, c], [0.0, c, s.interaction - 2.0 * detuning]]
        }
    }
}

/// H(Δ) in the diabatic basis.
///
/// Two-level: `[[0, Ω/2], [Ω/2, −Δ]]`. Three-level:
/// `[[0, Ω/√2, 0], [Ω/√2, −Δ, Ω/√2], [0, Ω/√2, V0 − 2Δ]]`.
pub fn hamiltonian_matrix(s: &SystemSpec, detuning: f64) -> CMatrix {
    let h = real_hamiltonian(s, detuning);
    let n = s.dim();
    let rows: Vec<&[f64]> = h.iter().take(n).map(|r| &r[..n]).collect();
    CMatrix::from_real_rows(&rows)
}

/// Instantaneous adiabatic energies and eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    /// Time at which the frame was evaluated, when built from a drive.
    pub t: Option<f64>,
    pub detuning: f64,
    /// Ascending energies; only the first `dim` entries are meaningful.
    pub energies: [f64; 3],
    /// Column `j` is the adiabatic state with energy `energies[j]`, written in
    /// the diabatic basis. The largest-magnitude entry of each column is real
    /// and positive.
    pub eigvecs: CMatrix,
}

impl EigenFrame {
    pub fn dim(&self) -> usize {
        self.eigvecs.dim()
    }

    pub fn state(&self, j: usize) -> CVector {
        self.eigvecs.column(j)
    }

    /// Amplitudes of a diabatic-basis state in this adiabatic basis.
    pub fn to_adiabatic(&self, diabatic: &CVector) -> CVector {
        self.eigvecs.adjoint().mul_vec(diabatic)
    }

    pub fn to_diabatic(&self, adiabatic: &CVector) -> CVector {
        self.eigvecs.mul_vec(adiabatic)
    }

    /// max_j ‖H·v_j − E_j·v_j‖.
    pub fn residual(&self, s: &SystemSpec) -> f64 {
        let h = hamiltonian_matrix(s, self.detuning);
        (0..self.dim())
            .map(|j| {
                let v = self.state(j);
                let hv = h.mul_vec(&v);
                let e = self.energies[j];
                (0..self.dim()).map(|i| (hv[i] - v[i] * e).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub fn eigensystem(s: &SystemSpec, detuning: f64) -> Result<EigenFrame> {
    match s.arity {
        Arity::TwoLevel => Ok(eigensystem_two_level(s, detuning)),
        Arity::ThreeLevel => eigensystem_three_level(s, detuning),
    }
}

/// Eigensystem at time `t` of the drive `p`.
pub fn frame_at(s: &SystemSpec, p: &DriveProtocol, t: f64) -> Result<EigenFrame> {
    let mut frame = eigensystem(s, p.detuning(t))?;
    frame.t = Some(t);
    Ok(frame)
}

/// Analytic two-level eigensystem.
///
/// With Ω̄ = √(Δ² + Ω²) and β± = (Ω̄ ± Δ)/Ω, the energies are
/// E± = ±(Ω/2)β∓ and |φ±⟩ = √(Ω/2Ω̄)(±√β± |g⟩ + √β∓ |r⟩).
/// The returned frame orders them `[φ−, φ+]`.
pub fn eigensystem_two_level(s: &SystemSpec, detuning: f64) -> EigenFrame {
    let omega = s.rabi;
    let omega_bar = detuning.hypot(omega);
    // β± computed without cancellation: β+·β− = 1.
    let (beta_plus, beta_minus) = if detuning >= 0.0 {
        let bp = (omega_bar + detuning) / omega;
        (bp, 1.0 / bp)
    } else {
        let bm = (omega_bar - detuning) / omega;
        (1.0 / bm, bm)
    };
    let e_plus = 0.5 * omega * beta_minus;
    let e_minus = -0.5 * omega * beta_plus;
    let norm = (omega / (2.0 * omega_bar)).sqrt();
    let phi_plus = [norm * beta_plus.sqrt(), norm * beta_minus.sqrt()];
    let phi_minus = [-norm * beta_minus.sqrt(), norm * beta_plus.sqrt()];
    let cols = [fix_phase_real(&phi_minus), fix_phase_real(&phi_plus)];
    EigenFrame { t: None, detuning, energies: [e_minus, e_plus, 0.0], eigvecs: CMatrix::from_columns(&cols) }
}

/// Ascending instantaneous energies (padded with zero for two levels).
pub fn energies(s: &SystemSpec, detuning: f64) -> [f64; 3] {
    match s.arity {
        Arity::TwoLevel => {
            let bar = detuning.hypot(s.rabi);
            [-0.5 * (bar + detuning), 0.5 * (bar - detuning), 0.0]
        }
        Arity::ThreeLevel => three_level_energies(s, detuning),
    }
}

/// Roots of the three-level characteristic polynomial
/// f(x) = −x³ + (V0 − 3Δ)x² + (V0Δ − 2Δ² + Ω²)x − V0Ω²/2 + ΔΩ²,
/// in ascending order, from the trigonometric form of Cardano's solution.
///
/// With D0 = V0² − 3V0Δ + 3Δ² + 3Ω² and
/// D1 = 2V0³ − 9V0²Δ + 9V0Δ² − 9V0Ω²/2, each root is
/// E = [V0 − 3Δ + 2√D0·cos(θ/3)]/3 where θ runs over the three branches of
/// 3·arccos(D1 / 2D0^{3/2}) shifted by multiples of 2π. D0 ≥ 3Ω² > 0, so the
/// cube root C of the complex discriminant combination has |C| = √D0 and the
/// real form avoids complex round-off.
pub fn three_level_energies(s: &SystemSpec, detuning: f64) -> [f64; 3] {
    let (v0, d, om2) = (s.interaction, detuning, s.rabi * s.rabi);
    let b = v0 - 3.0 * d;
    let d0 = v0 * v0 - 3.0 * v0 * d + 3.0 * d * d + 3.0 * om2;
    let d1 = 2.0 * v0 * v0 * v0 - 9.0 * v0 * v0 * d + 9.0 * v0 * d * d - 4.5 * v0 * om2;
    let modulus = d0.sqrt();
    let cos_3phi = (d1 / (2.0 * d0 * modulus)).clamp(-1.0, 1.0);
    let phi = cos_3phi.acos() / 3.0;
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let branch = phi + (k as f64) * TAU / 3.0;
        *root = (b + 2.0 * modulus * branch.cos()) / 3.0;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    // Near a degenerate pair the arccos argument approaches ±1 and the
    // trigonometric roots lose about half their digits; Newton steps on the
    // cubic restore them.
    let c1 = -(v0 * d - 2.0 * d * d + om2);
    let c0 = 0.5 * v0 * om2 - d * om2;
    let poly = |x: f64| ((x - b) * x + c1) * x + c0;
    let slope = |x: f64| (3.0 * x - 2.0 * b) * x + c1;
    let polished = roots.map(|mut x| {
        for _ in 0..2 {
            let dp = slope(x);
            if dp != 0.0 {
                x -= poly(x) / dp;
            }
        }
        x
    });
    let raw = roots;
    for k in 0..3 {
        let lo = if k > 0 { 0.5 * (raw[k - 1] + raw[k]) } else { f64::NEG_INFINITY };
        let hi = if k < 2 { 0.5 * (raw[k] + raw[k + 1]) } else { f64::INFINITY };
        if polished[k].is_finite() && polished[k] > lo && polished[k] < hi {
            roots[k] = polished[k];
        }
    }
    roots
}

/// Three-level eigensystem: trigonometric eigenvalues, closed-form
/// eigenvectors `(−(V0−2Δ−E)/E, −√2(V0−2Δ−E)/Ω, 1)` renormalized, with
/// inverse iteration where that form is ill-conditioned.
pub fn eigensystem_three_level(s: &SystemSpec, detuning: f64) -> Result<EigenFrame> {
    let energies = three_level_energies(s, detuning);
    let tol = DEGENERACY_TOLERANCE * s.rabi;
    for k in 0..2 {
        if energies[k + 1] - energies[k] < tol {
            return Err(Error::DegenerateSpectrum { detuning, lower: energies[k], upper: energies[k + 1] });
        }
    }
    let h = real_hamiltonian(s, detuning);
    let scale = 1.0 + h.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut cols = [CVector::zeros(3); 3];
    for (j, col) in cols.iter_mut().enumerate() {
        let e = energies[j];
        let mut v = closed_form_vector(s, detuning, e);
        if v.is_none_or(|v| residual_real(&h, e, &v) > 1e-13 * scale) {
            let gaps = [
                if j > 0 { e - energies[j - 1] } else { f64::INFINITY },
                if j < 2 { energies[j + 1] - e } else { f64::INFINITY },
            ];
            let seed = v.unwrap_or_else(|| cross_product_seed(&h, e));
            v = Some(inverse_iteration(&h, e, gaps[0].min(gaps[1]), seed));
        }
        *col = fix_phase_real(&v.expect("eigenvector computed"));
    }
    Ok(EigenFrame { t: None, detuning, energies, eigvecs: CMatrix::from_columns(&cols) })
}

fn closed_form_vector(s: &SystemSpec, detuning: f64, e: f64) -> Option<[f64; 3]> {
    if e.abs() < SMALL_EIGENVALUE * s.rabi {
        return None;
    }
    let c = s.interaction - 2.0 * detuning - e;
    let v = [-c / e, -SQRT_2 * c / s.rabi, 1.0];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    n.is_finite().then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn residual_real(h: &[[f64; 3]; 3], e: f64, v: &[f64; 3]) -> f64 {
    (0..3)
        .map(|i| {
            let r: f64 = (0..3).map(|k| h[i][k] * v[k]).sum::<f64>() - e * v[i];
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

// Largest cross product of two rows of (H − E): a non-degenerate starting
// vector in the null direction.
fn cross_product_seed(h: &[[f64; 3]; 3], e: f64) -> [f64; 3] {
    let mut rows = *h;
    for (k, row) in rows.iter_mut().enumerate() {
        row[k] -= e;
    }
    let cross =
        |a: &[f64; 3], b: &[f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let candidates = [cross(&rows[0], &rows[1]), cross(&rows[0], &rows[2]), cross(&rows[1], &rows[2])];
    let norm2 = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
    let best = candidates
        .iter()
        .copied()
        .max_by(|a, b| norm2(a).partial_cmp(&norm2(b)).unwrap_or(core::cmp::Ordering::Equal))
        .expect("three candidates");
    let n = norm2(&best).sqrt();
    [best[0] / n, best[1] / n, best[2] / n]
}

fn inverse_iteration(h: &[[f64; 3]; 3], e: f64, gap: f64, seed: [f64; 3]) -> [f64; 3] {
    // A shift slightly off the eigenvalue keeps the solve well defined while
    // amplifying the wanted direction by ~gap/offset per sweep.
    let offset = (1e-3 * gap).max(1e-14 * (1.0 + e.abs()));
    let mut a = *h;
    for (k, row) in a.iter_mut().enumerate() {
        row[k] -= e + offset;
    }
    let mut v = seed;
    for _ in 0..3 {
        let y = solve3(&a, &v);
        let n = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = [y[0] / n, y[1] / n, y[2] / n];
    }
    v
}

// Gaussian elimination with partial pivoting.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> [f64; 3] {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal))
            .expect("non-empty range");
        m.swap(col, pivot);
        if m[col][col] == 0.0 {
            m[col][col] = f64::EPSILON;
        }
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, &y) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * y;
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][3] - tail) / m[i][i];
    }
    x
}

fn fix_phase_real(v: &[f64]) -> CVector {
    // Ties (up to rounding) go to the first entry.
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let largest = v.iter().copied().find(|x| x.abs() >= (1.0 - 1e-9) * max).unwrap_or(1.0);
    let sign = if largest < 0.0 { -1.0 } else { 1.0 };
    let mut out = CVector::zeros(v.len());
    for (k, &x) in v.iter().enumerate() {
        out[k] = C64::new(sign * x, 0.0);
    }
    out
}

/// For each adiabatic index (ascending energy), the diabatic state it
/// overlaps most at the given detuning. At the start of a sweep from large
/// negative detuning this reproduces `|1⟩ ~ |gg⟩, |2⟩ ~ |s⟩, |3⟩ ~ |rr⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelMap {
    pub dim: usize,
    pub diabatic_of: [usize; 3],
}

pub fn label_map(s: &SystemSpec, detuning: f64) -> Result<LabelMap> {
    let frame = eigensystem(s, detuning)?;
    let mut diabatic_of = [0; 3];
    for (j, slot) in diabatic_of.iter_mut().enumerate().take(frame.dim()) {
        let v = frame.state(j);
        *slot = (0..frame.dim())
            .max_by(|&a, &b| v[a].norm_sqr().partial_cmp(&v[b].norm_sqr()).unwrap_or(core::cmp::Ordering::Equal))
            .expect("non-empty");
    }
    Ok(LabelMap { dim: frame.dim(), diabatic_of })
}

/// Energy gaps of the three-level system at its three avoided crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// E₂ − E₁ at Δ = 0.
    pub at_zero: f64,
    /// E₃ − E₂ at Δ = V0/2.
    pub at_half: f64,
    /// E₂ − E₁ at Δ = V0.
    pub at_full: f64,
    pub crossing_detunings: [f64; 3],
}

pub fn gap_report(s: &SystemSpec) -> Result<GapReport> {
    if s.arity != Arity::ThreeLevel {
        return Err(Error::invalid("arity", "gap report needs the three-level system"));
    }
    let v0 = s.interaction;
    let e0 = three_level_energies(s, 0.0);
    let eh = three_level_energies(s, 0.5 * v0);
    let ef = three_level_energies(s, v0);
    Ok(GapReport {
        at_zero: e0[1] - e0[0],
        at_half: eh[2] - eh[1],
        at_full: ef[1] - ef[0],
        crossing_detunings: [0.0, 0.5 * v0, v0],
    })
}

/// One avoided crossing: where it sits and which adiabatic pair it mixes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidedCrossing {
    /// 1, 2 or 3 in order of increasing detuning.
    pub index: u8,
    pub detuning: f64,
    /// Ascending adiabatic indices of the two mixed states.
    pub lower: usize,
    pub upper: usize,
    /// Minimal gap between the pair.
    pub gap: f64,
    /// Difference of the diabatic slopes in units of dΔ/dt: 1 for the
    /// single-excitation crossings, 2 for |gg⟩ ↔ |rr⟩.
    pub slope_factor: f64,
}

/// The avoided crossings of `s`. For V0 = 0 the three coincide and only the
/// first is returned.
pub fn avoided_crossings(s: &SystemSpec) -> Result<Vec<AvoidedCrossing>> {
    match s.arity {
        Arity::TwoLevel => Ok(alloc::vec![AvoidedCrossing {
            index: 1,
            detuning: 0.0,
            lower: 0,
            upper: 1,
            gap: s.rabi,
            slope_factor: 1.0,
        }]),
        Arity::ThreeLevel => {
            let g = gap_report(s)?;
            let v0 = s.interaction;
            let first =
                AvoidedCrossing { index: 1, detuning: 0.0, lower: 0, upper: 1, gap: g.at_zero, slope_factor: 1.0 };
            if v0 == 0.0 {
                return Ok(alloc::vec![first]);
            }
            Ok(alloc::vec![
                first,
                AvoidedCrossing { index: 2, detuning: 0.5 * v0, lower: 1, upper: 2, gap: g.at_half, slope_factor: 2.0 },
                AvoidedCrossing { index: 3, detuning: v0, lower: 0, upper: 1, gap: g.at_full, slope_factor: 1.0 },
            ])
        }
    }
}

/// A time at which the drive passes an avoided crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingTime {
    pub time: f64,
    pub crossing: AvoidedCrossing,
    /// Branch label m of τ_m: even when Δ increases through the crossing,
    /// odd when it decreases.
    pub branch: i64,
    /// |dΔ/dt| at the crossing in the linearized drive.
    pub rate: f64,
}

impl CrossingTime {
    pub fn is_increasing(&self) -> bool {
        self.branch.rem_euclid(2) == 0
    }
}

/// Times in `[t_start, t_end)` at which Δ(t) hits an avoided crossing,
/// sorted ascending.
///
/// Periodic drive: for target Δ_c reachable with |Δ_c − Δ0| < δ,
/// τ_{2n} = [2nπ + asin((Δ_c − Δ0)/δ)]/ω and
/// τ_{2n+1} = [(2n+1)π − asin((Δ_c − Δ0)/δ)]/ω, with linearized rate
/// ω√(δ² − (Δ0 − Δ_c)²). A target touched only tangentially is not a
/// crossing. Linear drive: the single time Δ_c/v.
pub fn crossing_times(s: &SystemSpec, p: &DriveProtocol, t_start: f64, t_end: f64) -> Result<Vec<CrossingTime>> {
    let crossings = avoided_crossings(s)?;
    let mut out = Vec::new();
    match *p {
        DriveProtocol::Linear { rate } => {
            if rate != 0.0 {
                for c in crossings {
                    let t = c.detuning / rate;
                    if t >= t_start && t < t_end {
                        let branch = if rate > 0.0 { 0 } else { 1 };
                        out.push(CrossingTime { time: t, crossing: c, branch, rate: rate.abs() });
                    }
                }
            }
        }
        DriveProtocol::Periodic { bias, amplitude, frequency } => {
            for c in crossings {
                let offset = c.detuning - bias;
                if !(offset.abs() < amplitude) {
                    continue;
                }
                let phase = (offset / amplitude).asin();
                let rate = frequency * (amplitude * amplitude - offset * offset).sqrt();
                // Branch m sits at [mπ + (−1)^m·phase]/ω.
                let m_lo = ((t_start * frequency - phase.abs()) / PI).floor() as i64 - 1;
                let m_hi = ((t_end * frequency + phase.abs()) / PI).ceil() as i64 + 1;
                for m in m_lo..=m_hi {
                    let signed = if m.rem_euclid(2) == 0 { phase } else { -phase };
                    let t = ((m as f64) * PI + signed) / frequency;
                    if t >= t_start && t < t_end {
                        out.push(CrossingTime { time: t, crossing: c, branch: m, rate });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap_or(core::cmp::Ordering::Equal));
    Ok(out)
}
