//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Set `ACCEPTANCE_ONLY=5,6`
//! to run a subset. Criterion 1 aggregates the norm drift and transfer
//! matrix unitarity of every run the other criteria make, so it is only
//! meaningful on a full run.
//!
//! The process fails if a criterion outside `EXPECTED_FAIL` fails, or if
//! one inside it starts passing (so the list stays honest).

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lzsim_core::aia::{closed_form_two_level, compose_linear, decompose, AiaOptions, AiaOutcome};
use lzsim_core::analysis::beats::beat_analysis_trajectory;
use lzsim_core::analysis::closed_form::{interacting_correction_final, PairState};
use lzsim_core::analysis::resonance::{
    detect_resonances, match_features, resonance_catalog, Extremum, Family, Feature, DEFAULT_PROMINENCE,
};
use lzsim_core::analysis::sweep::{
    run_sweep, Axis, Engine, Horizon, InitialState, Observable, Parameter, PointOutcome, Scenario, SweepSpec,
};
use lzsim_core::hamiltonian::{gap_report, three_level_energies};
use lzsim_core::propagator::{StateVector, SweepWindow};
use lzsim_core::{DriveProtocol, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Local error tolerance of every exact run in the suite.
const TOL: f64 = 1e-12;

/// Criteria that fail on this implementation, with the reason.
const EXPECTED_FAIL: &[(u8, &str)] = &[
    (5, "the exact n=1 dip sits near ω=15.17, outside ±0.1 of 15; AIA places it at 15.02"),
    (
        13,
        "Stokes phases shift eigenstate-initialized populations by up to ~3e-2, and exact runs side with keeping them",
    ),
];

type Criterion = fn(&mut Suite);

struct Suite {
    results: Vec<(u8, bool, String)>,
    drift: f64,
    drift_runs: usize,
    unitarity: f64,
    matrices: usize,
}

impl Suite {
    fn exact_points(&mut self, points: &[PointOutcome]) {
        for p in points {
            self.drift = self.drift.max(p.norm_drift.expect("exact run"));
            self.drift_runs += 1;
        }
    }

    fn aia(&mut self, out: &AiaOutcome) {
        let d = &out.decomposition;
        for m in d.steps.iter().map(|s| &s.entries).chain(std::iter::once(&d.product)) {
            self.unitarity = self.unitarity.max(m.unitarity_error());
            self.matrices += 1;
        }
    }

    fn record(&mut self, id: u8, pass: bool, detail: String) {
        self.results.push((id, pass, detail));
    }
}

fn three(v0: f64) -> SystemSpec {
    SystemSpec::three_level(1.0, v0)
}

fn exact(s: &mut Suite, sc: &Scenario) -> PointOutcome {
    let mut sc = *sc;
    sc.tolerance = TOL;
    let (_, o) = sc.run_exact().expect("exact run");
    s.exact_points(&[o]);
    o
}

fn aia(s: &mut Suite, sc: &Scenario, opts: &AiaOptions) -> PointOutcome {
    let (full, o) = sc.run_aia(opts).expect("AIA run");
    s.aia(&full);
    o
}

/// Exact sweep (parallel) and AIA sweep over one axis; returns the axis and
/// the primary populations of both engines.
fn sweep_both(s: &mut Suite, base: Scenario, axis: Axis) -> (Vec<f64>, Vec<[f64; 3]>, Vec<[f64; 3]>) {
    let mut base = base;
    base.tolerance = TOL;
    let spec = SweepSpec::new(base, vec![axis.clone()]).unwrap();
    let grid = run_sweep(&spec, Engine::Exact, &AiaOptions::default());
    assert!(grid.is_complete(), "exact sweep had failed points");
    let outcomes: Vec<PointOutcome> =
        grid.points.iter().map(|p| *p.exact.as_ref().unwrap().as_ref().unwrap()).collect();
    s.exact_points(&outcomes);
    let ex = grid.primary(true);
    let ai: Vec<[f64; 3]> = (0..spec.len())
        .map(|k| {
            let sc = spec.scenario(k).unwrap();
            sc.primary(&aia(s, &sc, &AiaOptions::default()))
        })
        .collect();
    (axis.values, ex, ai)
}

fn channel(v: &[[f64; 3]], k: usize) -> Vec<f64> {
    v.iter().map(|p| p[k]).collect()
}

fn dips(axis: &[f64], v: &[[f64; 3]], k: usize, tol: f64) -> Vec<Feature> {
    detect_resonances(axis, &channel(v, k), Extremum::Dip, DEFAULT_PROMINENCE, tol).unwrap()
}

fn all_features(axis: &[f64], v: &[[f64; 3]], tol: f64) -> Vec<Feature> {
    let mut out = Vec::new();
    for k in 0..3 {
        for kind in [Extremum::Dip, Extremum::Peak] {
            out.extend(detect_resonances(axis, &channel(v, k), kind, DEFAULT_PROMINENCE, tol).unwrap());
        }
    }
    out
}

fn max_dev(a: &[[f64; 3]], b: &[[f64; 3]]) -> (f64, usize) {
    let mut best = (0.0, 0);
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        for k in 0..3 {
            let d = (x[k] - y[k]).abs();
            if d > best.0 {
                best = (d, i);
            }
        }
    }
    best
}

// Eigenvalues of the symmetric tridiagonal three-level Hamiltonian by
// bisection on the Sturm sequence of its characteristic polynomial.
fn sturm_eigenvalues(rabi: f64, v0: f64, detuning: f64) -> [f64; 3] {
    let a2 = rabi * rabi / 2.0;
    let d = [0.0, -detuning, v0 - 2.0 * detuning];
    // Number of eigenvalues below x.
    let count = |x: f64| {
        let mut n = 0;
        let mut q = d[0] - x;
        if q < 0.0 {
            n += 1;
        }
        for &dk in &d[1..] {
            let prev = if q == 0.0 { f64::EPSILON } else { q };
            q = dk - x - a2 / prev;
            if q < 0.0 {
                n += 1;
            }
        }
        n
    };
    let r = (2.0 * a2).sqrt();
    let lo0 = d.iter().fold(f64::INFINITY, |m, &x| m.min(x)) - 2.0 * r - 1.0;
    let hi0 = d.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)) + 2.0 * r + 1.0;
    let mut out = [0.0; 3];
    for (k, e) in out.iter_mut().enumerate() {
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        *e = 0.5 * (lo + hi);
    }
    out
}

fn c2_eigen(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut worst_na: f64 = 0.0;
    for _ in 0..1000 {
        let det: f64 = rng.gen_range(-50.0..50.0);
        let v0: f64 = rng.gen_range(0.0..100.0);
        let trig = three_level_energies(&three(v0), det);
        let oracle = sturm_eigenvalues(1.0, v0, det);
        let a = 0.5f64.sqrt();
        let m = nalgebra::Matrix3::new(0.0, a, 0.0, a, -det, a, 0.0, a, v0 - 2.0 * det);
        let mut na: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        na.sort_by(f64::total_cmp);
        for k in 0..3 {
            worst = worst.max((trig[k] - oracle[k]).abs());
            worst_na = worst_na.max((oracle[k] - na[k]).abs());
        }
    }
    s.record(
        2,
        worst <= 1e-9,
        format!("max |E_trig − E_sturm| = {worst:.2e} Ω over 1000 draws (Sturm vs nalgebra {worst_na:.2e})"),
    );
}

fn c3_gaps(s: &mut Suite) {
    let g100 = gap_report(&three(100.0)).unwrap();
    let sat = (g100.at_zero - 2f64.sqrt()).abs();
    let mut sym: f64 = 0.0;
    for k in 0..50 {
        let g = gap_report(&three(100.0 * k as f64 / 49.0)).unwrap();
        sym = sym.max((g.at_zero - g.at_full).abs());
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..50)
        .map(|k| {
            let v0 = 20.0 * 5f64.powf(k as f64 / 49.0);
            (v0.ln(), gap_report(&three(v0)).unwrap().at_half.ln())
        })
        .unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    s.record(
        3,
        sat <= 1e-3 && sym <= 1e-9 && (slope + 1.0).abs() <= 0.05,
        format!("|ΔE_0(100) − √2| = {sat:.2e}, max |ΔE_0 − ΔE_V0| = {sym:.2e}, slope of ΔE_V0/2 = {slope:.4}"),
    );
}

fn c4_single_cycle(s: &mut Suite) {
    let mut base = Scenario::new(
        SystemSpec::two_level(1.0),
        DriveProtocol::periodic(5.0, 20.0, 1.0),
        InitialState::Adiabatic(0),
        Horizon::Cycles { phase: PI / 2.0, cycles: 1 },
    );
    base.observable = Observable::Final;
    let axis = Axis::linspace(Parameter::Frequency, 0.3, 3.0, 100).unwrap();
    let (w, ex, ai) = sweep_both(s, base, axis);
    let mut worst = (0.0, 0.0);
    for k in 0..w.len() {
        let d = (ex[k][1] - ai[k][1]).abs();
        if d > worst.0 {
            worst = (d, w[k]);
        }
    }
    s.record(4, worst.0 <= 0.05, format!("max |P₊ exact − AIA| = {:.4} at ω = {:.3}", worst.0, worst.1));
}

fn periodic_three(bias: f64, v0: f64, amp: f64, initial: InitialState) -> Scenario {
    Scenario::new(
        three(v0),
        DriveProtocol::periodic(bias, amp, 1.0),
        initial,
        Horizon::Cycles { phase: 0.0, cycles: 100 },
    )
}

fn c5_resonances(s: &mut Suite) {
    let base = periodic_three(-15.0, 40.0, 25.0, InitialState::Diabatic(0));
    let axis = Axis::linspace(Parameter::Frequency, 2.0, 16.0, 701).unwrap();
    let (w, ex, ai) = sweep_both(s, base, axis);
    let expected: Vec<f64> = (1..=6).map(|n| 15.0 / n as f64).collect();
    let nearest = |f: &[Feature], target: f64| {
        f.iter().map(|x| x.location).min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
    };
    let (de, da) = (dips(&w, &ex, 0, 0.1), dips(&w, &ai, 0, 0.1));
    let me = match_features(&expected, &de, 0.1);
    let ma = match_features(&expected, &da, 0.1);
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, &target) in expected.iter().enumerate() {
        let ok = me[i].is_some() && ma[i].is_some();
        pass &= ok;
        let show = |f: Option<f64>| f.map_or("-".to_string(), |x| format!("{x:.3}"));
        parts.push(format!(
            "{target:.2}:{}/{}{}",
            show(nearest(&de, target)),
            show(nearest(&da, target)),
            if ok { "" } else { "✗" }
        ));
    }
    s.record(5, pass, format!("dips exact/AIA {}", parts.join(" ")));
}

fn c6_narrow(s: &mut Suite) {
    let base = periodic_three(-15.0, 40.0, 25.0, InitialState::Diabatic(1));
    let axis = Axis::linspace(Parameter::Frequency, 10.0, 20.0, 1001).unwrap();
    let (w, ex, ai) = sweep_both(s, base, axis);
    let expected = [55.0 / 3.0, 55.0 / 4.0, 11.0];
    let me = match_features(&expected, &dips(&w, &ex, 0, 0.15), 0.15);
    let ma = match_features(&expected, &dips(&w, &ai, 0, 0.15), 0.15);
    let exact_all = me.iter().all(Option::is_some);
    let aia_none = ma.iter().all(Option::is_none);
    let show = |m: &[Option<Feature>]| {
        m.iter().map(|f| f.map_or("-".to_string(), |x| format!("{:.3}", x.location))).collect::<Vec<_>>().join(",")
    };
    s.record(
        6,
        exact_all && aia_none,
        format!("P̄₁ dips near 18.33,13.75,11: exact [{}], AIA [{}]", show(&me), show(&ma)),
    );
}

fn c7_full_coverage(s: &mut Suite) {
    let (lo, hi) = (2.0, 20.0);
    let catalog = resonance_catalog(-15.0, 40.0, lo, hi).unwrap();
    // Lines with no line of another family within 0.2.
    let isolated: Vec<_> = catalog
        .iter()
        .filter(|r| !catalog.iter().any(|o| o.family != r.family && (o.frequency - r.frequency).abs() < 0.2))
        .collect();
    let mut found = [[false; 3]; 2];
    let mut worst: f64 = 0.0;
    let mut devs = Vec::new();
    for j in 0..3 {
        let base = periodic_three(-15.0, 40.0, 65.0, InitialState::Adiabatic(j));
        let axis = Axis::linspace(Parameter::Frequency, lo, hi, 451).unwrap();
        let (w, ex, ai) = sweep_both(s, base, axis);
        let (d, at) = max_dev(&ex, &ai);
        worst = worst.max(d);
        devs.push(format!("|{}⟩ {d:.3}@{:.2}", j + 1, w[at]));
        for (e, v) in [&ex, &ai].into_iter().enumerate() {
            let feats = all_features(&w, v, 0.1);
            for r in &isolated {
                if feats.iter().any(|f| (f.location - r.frequency).abs() <= 0.1) {
                    let fi = Family::ALL.iter().position(|&x| x == r.family).unwrap();
                    found[e][fi] = true;
                }
            }
        }
    }
    let all = found.iter().all(|e| e.iter().all(|&x| x));
    s.record(
        7,
        worst <= 0.1 && all,
        format!("max dev {} ; families (GgS,SRr,GgRr) exact {:?} AIA {:?}", devs.join(" "), found[0], found[1]),
    );
}

fn linear(v: f64, v0: f64, initial: InitialState) -> Scenario {
    Scenario::new(three(v0), DriveProtocol::linear(v), initial, Horizon::StandardLinear)
}

fn c8_small_interaction(s: &mut Suite) {
    let mut worst = (0.0, String::new());
    let mut check = |s: &mut Suite, v: f64, v0: f64| {
        let o = exact(s, &linear(v, v0, InitialState::Adiabatic(0)));
        let f = interacting_correction_final(v, 1.0, v0, PairState::Gg).unwrap();
        for (k, (a, b)) in o.final_diabatic.iter().zip(f).enumerate() {
            let d = (a - b).abs();
            if d > worst.0 {
                worst = (d, format!("v={v:.2}, V0={v0:.3}, channel {k}"));
            }
        }
    };
    for i in 0..10 {
        check(s, 1.0 + i as f64, 0.1);
        check(s, 2.0, 0.02 + 0.48 * i as f64 / 9.0);
    }
    s.record(8, worst.0 <= 0.02, format!("max |exact − formula| = {:.4} ({})", worst.0, worst.1));
}

fn c9_beats(s: &mut Suite) {
    let mut freqs = Vec::new();
    let mut pass = true;
    for j in 0..3 {
        let mut sc = Scenario::new(
            three(2.0),
            DriveProtocol::linear(5.0),
            InitialState::Diabatic(j),
            Horizon::Window { t_start: -4.0, t_end: 40.0 },
        );
        sc.samples = 20001;
        sc.tolerance = TOL;
        let (traj, o) = sc.run_exact().unwrap();
        s.exact_points(&[o]);
        match beat_analysis_trajectory(&traj, 1, 5.0) {
            Ok(r) => {
                pass &= (r.envelope_frequency - 1.0).abs() <= 0.1;
                freqs.push(format!("{:.3} (slope {:.2})", r.envelope_frequency, r.carrier_slope));
            }
            Err(e) => {
                pass = false;
                freqs.push(format!("{e}"));
            }
        }
    }
    s.record(9, pass, format!("P_s envelope frequency vs V0/2 = 1: {}", freqs.join(", ")));
}

fn c10_cycles(s: &mut Suite) {
    let sys = SystemSpec::two_level(1.0);
    let opts = AiaOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let bias: f64 = rng.gen_range(-5.0..5.0);
        let amp: f64 = rng.gen_range(10.0..25.0);
        let w: f64 = rng.gen_range(0.5..3.0);
        let k: u32 = rng.gen_range(1..=20);
        let p = DriveProtocol::periodic(bias, amp, w);
        let d = decompose(&sys, &p, 0.0, 2.0 * PI / w, &opts).unwrap();
        s.unitarity = s.unitarity.max(d.product.unitarity_error());
        let f = d.product.pow(u64::from(k));
        let cf = closed_form_two_level(&sys, &p, 0.0, k, &opts).unwrap();
        worst = worst
            .max((f[(1, 0)].norm_sqr() - cf.u21.norm_sqr()).abs())
            .max((f[(0, 0)].norm_sqr() - cf.u11.norm_sqr()).abs())
            .max((cf.excitation - cf.u21.norm_sqr()).abs())
            .max((d.alpha.unwrap().cos() - cf.g11.re).abs());
    }
    let mut excess = f64::NEG_INFINITY;
    for i in 0..200 {
        let w = 0.5 + 2.5 * i as f64 / 199.0;
        let p = DriveProtocol::periodic(0.0, 20.0, w);
        let d = decompose(&sys, &p, 0.0, 2.0 * PI / w, &opts).unwrap();
        let alpha = d.alpha.unwrap();
        let pk = d.product.pow(10)[(1, 0)].norm_sqr();
        excess = excess.max(pk - (10.0 * alpha).sin().powi(2));
    }
    s.record(
        10,
        worst <= 1e-10 && excess <= 1e-9,
        format!("closed form vs matrix power {worst:.2e}; max P₊¹⁰ − sin²10α = {excess:.2e}"),
    );
}

fn c11_scaling(s: &mut Suite) {
    let mut worst: f64 = 0.0;
    for &(v, v0) in &[(1.0, 2.0), (2.0, 5.0), (0.5, 0.3)] {
        let reference = exact(s, &linear(v, v0, InitialState::Diabatic(0)));
        for c in [0.5, 2.0, 5.0] {
            let sc = Scenario::new(
                SystemSpec::three_level(c, c * v0),
                DriveProtocol::linear(c * c * v),
                InitialState::Diabatic(0),
                Horizon::StandardLinear,
            );
            let o = exact(s, &sc);
            for k in 0..3 {
                worst = worst
                    .max((o.final_diabatic[k] - reference.final_diabatic[k]).abs())
                    .max((o.final_adiabatic[k] - reference.final_adiabatic[k]).abs());
            }
        }
    }
    s.record(11, worst <= 1e-6, format!("max population change under rescaling = {worst:.2e}"));
}

fn c12_symmetry(s: &mut Suite) {
    let vs: Vec<f64> = (0..20).map(|i| 0.5 + 19.5 * i as f64 / 19.0).collect();
    let v0s: Vec<f64> = (0..20).map(|i| 0.1 + 19.9 * i as f64 / 19.0).collect();
    let mut sym: f64 = 0.0;
    let mut worst_std: f64 = 0.0;
    for &v in &vs {
        let mut column = Vec::new();
        for &v0 in &v0s {
            // The standard window mirrored about the middle crossing Δ = V0/2,
            // so both ends are equally far from the crossings.
            let end = 30.0 + 10.0 * v;
            let horizon = Horizon::Window { t_start: (v0 - end) / v, t_end: end / v };
            let run = |s: &mut Suite, j: usize| {
                exact(s, &Scenario::new(three(v0), DriveProtocol::linear(v), InitialState::Adiabatic(j), horizon))
            };
            let from1 = run(s, 0);
            let from3 = run(s, 2);
            sym = sym.max((from1.final_adiabatic[2] - from3.final_adiabatic[0]).abs());
            column.push(from1.final_diabatic[0]);
        }
        let m = column.iter().sum::<f64>() / column.len() as f64;
        let sd = (column.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / column.len() as f64).sqrt();
        worst_std = worst_std.max(sd);
    }
    s.record(
        12,
        sym <= 1e-3 && worst_std <= 0.01,
        format!("max |P₃(|1⟩) − P₁(|3⟩)| = {sym:.2e}; max std of P_gg over V0 = {worst_std:.2e}"),
    );
}

fn c13_stokes(s: &mut Suite) {
    let on = AiaOptions { stokes: true };
    let off = AiaOptions { stokes: false };
    let mut worst = (0.0, String::new());
    let mut points: Vec<(f64, f64)> = (0..10).map(|i| (2.0, 1.0 + i as f64)).collect();
    points.extend((0..10).map(|i| (0.5 + 9.5 * i as f64 / 9.0, 2.0)));
    for (v, v0) in points {
        let sys = three(v0);
        let p = DriveProtocol::linear(v);
        let w = SweepWindow::standard_linear(&sys, v, 2).unwrap();
        for j in 0..3 {
            let psi = StateVector::adiabatic(&sys, &p, j, w.t_start).unwrap();
            let a = compose_linear(&sys, &p, &psi, &w, &on).unwrap();
            let b = compose_linear(&sys, &p, &psi, &w, &off).unwrap();
            s.aia(&a);
            s.aia(&b);
            for k in 0..3 {
                let d = (a.final_populations[k] - b.final_populations[k]).abs();
                if d > worst.0 {
                    worst = (d, format!("v={v:.2}, V0={v0:.1}, |{}⟩, P{}", j + 1, k + 1));
                }
            }
        }
    }
    s.record(13, worst.0 <= 1e-6, format!("max change from dropping Stokes phases = {:.2e} ({})", worst.0, worst.1));
}

fn main() -> ExitCode {
    let only: Option<Vec<u8>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |id: u8| only.as_ref().is_none_or(|o| o.contains(&id));
    let mut suite = Suite { results: Vec::new(), drift: 0.0, drift_runs: 0, unitarity: 0.0, matrices: 0 };
    let criteria: [(u8, Criterion); 12] = [
        (2, c2_eigen),
        (3, c3_gaps),
        (4, c4_single_cycle),
        (5, c5_resonances),
        (6, c6_narrow),
        (7, c7_full_coverage),
        (8, c8_small_interaction),
        (9, c9_beats),
        (10, c10_cycles),
        (11, c11_scaling),
        (12, c12_symmetry),
        (13, c13_stokes),
    ];
    for (id, f) in criteria {
        if wanted(id) {
            let t = Instant::now();
            f(&mut suite);
            eprintln!("criterion {id} took {:.1} s", t.elapsed().as_secs_f64());
        }
    }
    if wanted(1) {
        let pass = suite.drift <= 1e-9 && suite.unitarity <= 1e-12 && suite.drift_runs > 0;
        let detail = format!(
            "max norm drift {:.2e} over {} exact runs; max unitarity error {:.2e} over {} AIA matrices",
            suite.drift, suite.drift_runs, suite.unitarity, suite.matrices
        );
        suite.record(1, pass, detail);
    }
    suite.results.sort_by_key(|r| r.0);

    let mut ok = true;
    println!();
    for (id, pass, detail) in &suite.results {
        let known = EXPECTED_FAIL.iter().find(|(k, _)| k == id);
        let tag = match (pass, known) {
            (true, None) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (expected: {why})"),
            (false, None) => {
                ok = false;
                "FAIL".to_string()
            }
            (true, Some(_)) => {
                ok = false;
                "PASS (listed as an expected failure; update the list)".to_string()
            }
        };
        println!("criterion {id:>2}: {tag} | {detail}");
    }
    let passed = suite.results.iter().filter(|r| r.1).count();
    println!("acceptance: {passed}/{} criteria pass", suite.results.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
