//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use lzsim_core::aia::{validity_report, AiaOutcome, ValidityReport};
use lzsim_core::analysis::beats::beat_analysis;
use lzsim_core::analysis::resonance::resonance_catalog;
use lzsim_core::analysis::sweep::{run_sweep, Engine, Observable, PointOutcome, PointResult};
use lzsim_core::hamiltonian::gap_report;
use lzsim_core::propagator::TrajectoryRecord;
use lzsim_core::{Arity, SystemSpec};

use crate::config::{RawConfig, ScenarioConfig};
use crate::error::CliError;
use crate::output::{fmt12, read_csv, Csv, OutputDir};

/// Picks one engine's result out of a sweep point.
type EngineField = fn(&PointResult) -> &Option<lzsim_core::Result<PointOutcome>>;

pub const MANIFEST: &str = "manifest.json";

/// Reads a config file, or the `config` field of a manifest, and applies
/// `key=value` overrides.
pub fn load_config(path: &Path, overrides: &[(String, String)]) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let text = if path.extension().is_some_and(|e| e == "json") {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::parse(e.line(), e.to_string()))?;
        v.get("config")
            .and_then(|c| c.as_str())
            .ok_or_else(|| CliError::validation("config", "manifest has no config text"))?
            .to_string()
    } else {
        text
    };
    let mut raw = RawConfig::parse(&text)?;
    for (k, v) in overrides {
        raw.set(k, v)?;
    }
    raw.resolve()
}

fn labels(arity: Arity) -> (Vec<&'static str>, Vec<&'static str>) {
    match arity {
        Arity::TwoLevel => (vec!["P_g", "P_r"], vec!["P_minus", "P_plus"]),
        Arity::ThreeLevel => (vec!["P_gg", "P_s", "P_rr"], vec!["P_1", "P_2", "P_3"]),
    }
}

#[derive(Serialize)]
struct ValiditySummary {
    verdict: bool,
    criteria: Vec<CriterionSummary>,
}

#[derive(Serialize)]
struct CriterionSummary {
    name: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    pass: bool,
}

fn summarize(r: &ValidityReport) -> ValiditySummary {
    ValiditySummary {
        verdict: r.verdict,
        criteria: r
            .criteria
            .iter()
            .map(|c| CriterionSummary {
                name: c.name.to_string(),
                lhs: c.lhs,
                rhs: c.rhs,
                margin: c.margin(),
                pass: c.pass,
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    /// Normalized configuration; rerunning it reproduces the data files.
    config: String,
    engine_version: String,
    integrator: String,
    started_unix: f64,
    finished_unix: f64,
    validity: Option<ValiditySummary>,
    validity_error: Option<String>,
    outputs: Vec<String>,
    complete: bool,
    failed_points: usize,
    failures: Vec<String>,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn write_manifest(out: &mut OutputDir, mut m: Manifest) -> Result<(), CliError> {
    m.outputs = out.files.clone();
    m.finished_unix = now();
    let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Runtime(e.to_string()))? + "\n";
    crate::output::write_atomic(&out.root.join(MANIFEST), &text)
}

fn manifest(command: &str, cfg: &ScenarioConfig) -> Manifest {
    let (validity, validity_error) = match validity_report(&cfg.system, &cfg.drive) {
        Ok(r) => (Some(summarize(&r)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Manifest {
        command: command.to_string(),
        config: cfg.serialize(),
        engine_version: format!("lzsim-core {}", env!("CARGO_PKG_VERSION")),
        integrator: format!("{:?}, tol {:e}", cfg.scheme, cfg.tolerance),
        started_unix: now(),
        finished_unix: 0.0,
        validity,
        validity_error,
        outputs: Vec::new(),
        complete: true,
        failed_points: 0,
        failures: Vec::new(),
    }
}

fn trajectory_csv(traj: &TrajectoryRecord, arity: Arity) -> Csv {
    let (dia, adi) = labels(arity);
    let d = dia.len();
    let mut header = vec!["t"];
    header.extend(&dia);
    header.extend(&adi);
    let mut csv = Csv::new(&header);
    let adiabatic = traj.adiabatic.as_ref();
    for (k, t) in traj.times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend(&traj.diabatic[k][..d]);
        match adiabatic {
            Some(a) => row.extend(&a[k][..d]),
            None => row.extend(std::iter::repeat_n(f64::NAN, d)),
        }
        csv.numbers(&row);
    }
    csv
}

fn phase_ledger(out: &AiaOutcome) -> Csv {
    let d = &out.decomposition;
    let mut csv = Csv::new(&["kind", "index", "t_start", "t_end", "quantity", "value"]);
    let mut push = |kind: &str, idx: usize, t0: f64, t1: f64, q: String, v: f64| {
        csv.row(&[kind.to_string(), idx.to_string(), fmt12(t0), fmt12(t1), q, fmt12(v)]);
    };
    for (i, s) in d.segments.iter().enumerate() {
        for (j, z) in s.zeta.iter().enumerate() {
            push("segment", i, s.start, s.end, format!("zeta_{}", j + 1), *z);
        }
    }
    for (i, imp) in d.impulses.iter().enumerate() {
        push("impulse", i, imp.time, imp.time, format!("stokes_phase_c{}", imp.crossing), imp.stokes_phase);
        push("impulse", i, imp.time, imp.time, format!("P_LZ_c{}", imp.crossing), imp.probability);
    }
    if let Some(a) = d.alpha {
        push("cycle", 0, d.start, d.end, "alpha".to_string(), a);
    }
    if let Some(p) = d.stuckelberg_phase {
        push("cycle", 0, d.start, d.end, "stuckelberg_phase".to_string(), p);
    }
    push("cycle", 0, d.start, d.end, "global_phase".to_string(), d.global_phase);
    csv
}

fn outcome_cells(o: &PointOutcome, cfg: &ScenarioConfig) -> Vec<f64> {
    let d = cfg.system.dim();
    let primary = match cfg.observable {
        Observable::Final => o.final_adiabatic,
        Observable::Average => o.average_adiabatic,
    };
    primary[..d].iter().chain(&o.final_diabatic[..d]).copied().collect()
}

fn outcome_header(prefix: &str, cfg: &ScenarioConfig) -> Vec<String> {
    let (dia, adi) = labels(cfg.system.arity);
    let obs = match cfg.observable {
        Observable::Final => "final",
        Observable::Average => "avg",
    };
    adi.iter().map(|a| format!("{prefix}_{obs}_{a}")).chain(dia.iter().map(|a| format!("{prefix}_final_{a}"))).collect()
}

fn dp_max(a: &PointOutcome, b: &PointOutcome, cfg: &ScenarioConfig) -> f64 {
    let s = cfg.scenario();
    let (pa, pb) = (s.primary(a), s.primary(b));
    (0..cfg.system.dim()).map(|k| (pa[k] - pb[k]).abs()).fold(0.0, f64::max)
}

/// `run`: one scenario; trajectory, summary, phase ledger and manifest.
pub fn run(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let mut out = OutputDir::create(&cfg.output)?;
    let m = manifest("run", cfg);
    let scenario = cfg.scenario();
    let mut header: Vec<String> = Vec::new();
    let mut cells: Vec<f64> = Vec::new();
    let mut exact = None;
    let mut aia = None;
    if matches!(cfg.engine, Engine::Exact | Engine::Both) {
        let (traj, o) = scenario.run_exact()?;
        out.write("trajectory.csv", trajectory_csv(&traj, cfg.system.arity).as_str())?;
        header.extend(outcome_header("exact", cfg));
        header.push("norm_drift".to_string());
        cells.extend(outcome_cells(&o, cfg));
        cells.push(o.norm_drift.unwrap_or(f64::NAN));
        exact = Some(o);
    }
    if matches!(cfg.engine, Engine::Aia | Engine::Both) {
        let (full, o) = scenario.run_aia(&cfg.aia_options())?;
        out.write("phases.csv", phase_ledger(&full).as_str())?;
        header.extend(outcome_header("aia", cfg));
        cells.extend(outcome_cells(&o, cfg));
        aia = Some(o);
    }
    if let (Some(e), Some(a)) = (&exact, &aia) {
        header.push("dP_max".to_string());
        cells.push(dp_max(e, a, cfg));
    }
    let mut summary = Csv::new(&header);
    summary.numbers(&cells);
    out.write("summary.csv", summary.as_str())?;
    write_manifest(&mut out, m)
}

/// `sweep`: one row per grid point, axes first. Returns the number of
/// failed points.
pub fn sweep(cfg: &ScenarioConfig) -> Result<usize, CliError> {
    if cfg.axes.is_empty() {
        return Err(CliError::validation("axis1", "a sweep needs at least one axis"));
    }
    let spec = cfg.sweep_spec()?;
    let mut out = OutputDir::create(&cfg.output)?;
    let mut m = manifest("sweep", cfg);
    let grid = run_sweep(&spec, cfg.engine, &cfg.aia_options());
    let d = cfg.system.dim();

    let mut header: Vec<String> = spec.axes.iter().map(|a| a.parameter.name().to_string()).collect();
    let engines: Vec<(&str, EngineField)> = match cfg.engine {
        Engine::Exact => vec![("exact", |p| &p.exact)],
        Engine::Aia => vec![("aia", |p| &p.aia)],
        Engine::Both => vec![("exact", |p| &p.exact), ("aia", |p| &p.aia)],
    };
    for (name, _) in &engines {
        header.extend(outcome_header(name, cfg));
    }
    if cfg.engine == Engine::Both {
        header.push("dP_max".to_string());
    }
    header.push("status".to_string());
    let mut csv = Csv::new(&header);
    let width = 2 * d;
    for (k, p) in grid.points.iter().enumerate() {
        let mut row: Vec<String> = p.coords.iter().map(|&c| fmt12(c)).collect();
        for (_, get) in &engines {
            match get(p) {
                Some(Ok(o)) => row.extend(outcome_cells(o, cfg).into_iter().map(fmt12)),
                _ => row.extend(std::iter::repeat_n(fmt12(f64::NAN), width)),
            }
        }
        if cfg.engine == Engine::Both {
            row.push(fmt12(p.dp_max.unwrap_or(f64::NAN)));
        }
        match p.error() {
            None => row.push("ok".to_string()),
            Some(e) => {
                row.push("failed".to_string());
                m.failures.push(format!("point {k}: {e}"));
            }
        }
        csv.row(&row);
    }
    out.write("sweep.csv", csv.as_str())?;

    if spec.axes.len() == 1 {
        let (_, adi) = labels(cfg.system.arity);
        let axis = spec.axes[0].parameter.name();
        for (name, get) in &engines {
            for (ch, label) in adi.iter().enumerate() {
                let mut two = Csv::new(&[axis, *label]);
                for p in &grid.points {
                    let v = match get(p) {
                        Some(Ok(o)) => cfg.scenario().primary(o)[ch],
                        _ => f64::NAN,
                    };
                    two.numbers(&[p.coords[0], v]);
                }
                out.write(&format!("{name}_{label}.csv"), two.as_str())?;
            }
        }
    }
    let failed = grid.failures();
    m.failed_points = failed;
    m.complete = failed == 0;
    write_manifest(&mut out, m)?;
    Ok(failed)
}

/// `validate`: the validity report as text.
pub fn validate(cfg: &ScenarioConfig) -> Result<String, CliError> {
    let r = validity_report(&cfg.system, &cfg.drive)?;
    let mut s = String::new();
    for (c, tau) in &r.transition_times {
        let _ = writeln!(s, "transition time (crossing {c}): {}", fmt12(*tau));
    }
    for (k, ta) in r.adiabatic_durations.iter().enumerate() {
        let _ = writeln!(s, "adiabatic duration {k}: {}", fmt12(*ta));
    }
    for c in &r.criteria {
        let _ = writeln!(
            s,
            "{} {}: {} vs {} (margin {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            fmt12(c.lhs),
            fmt12(c.rhs),
            fmt12(c.margin())
        );
    }
    let _ = writeln!(s, "verdict: {}", if r.verdict { "valid" } else { "outside validity" });
    Ok(s)
}

/// Parses `lo:hi` or `lo:hi:n`.
pub fn parse_range(s: &str, want_points: bool) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("bad range `{s}`"));
    let n = match (parts.len(), want_points) {
        (2, false) => 0,
        (3, true) => parts[2].parse().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || (want_points && n == 0) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

/// `gaps`: (V0, ΔE_0, ΔE_{V0/2}, ΔE_{V0}) on an evenly spaced V0 grid.
pub fn gaps(rabi: f64, lo: f64, hi: f64, n: usize) -> Result<String, CliError> {
    let mut csv = Csv::new(&["V0", "dE_0", "dE_half", "dE_V0"]);
    for k in 0..n {
        let v0 = if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
        let g = gap_report(&SystemSpec::three_level(rabi, v0))?;
        csv.numbers(&[v0, g.at_zero, g.at_half, g.at_full]);
    }
    Ok(csv.as_str().to_string())
}

/// `resonances`: catalog rows sorted by ω descending.
pub fn resonances(bias: f64, v0: f64, lo: f64, hi: f64) -> Result<String, CliError> {
    let mut csv = Csv::new(&["family", "n", "omega", "from", "to"]);
    for r in resonance_catalog(bias, v0, lo, hi)? {
        let (a, b) = r.family.transition();
        csv.row(&[r.family.condition().to_string(), r.order.to_string(), fmt12(r.frequency), a.into(), b.into()]);
    }
    Ok(csv.as_str().to_string())
}

/// `beats`: beat analysis of one column of a trajectory CSV.
pub fn beats(path: &Path, channel: &str, from: Option<f64>) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let (header, rows) = read_csv(&text)?;
    if header.first().map(String::as_str) != Some("t") {
        return Err(CliError::validation("trajectory", "first column must be `t`"));
    }
    let col = header
        .iter()
        .position(|h| h == channel)
        .ok_or_else(|| CliError::validation("channel", format!("no column `{channel}`")))?;
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let y: Vec<f64> = rows.iter().map(|r| r[col]).collect();
    let (first, last) = match (t.first(), t.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(CliError::validation("trajectory", "no samples")),
    };
    let from = from.unwrap_or(first + 0.25 * (last - first));
    let r = beat_analysis(&t, &y, from)?;
    let mut csv = Csv::new(&["envelope_frequency", "carrier_slope", "carrier_start", "depth", "present"]);
    csv.row(&[
        fmt12(r.envelope_frequency),
        fmt12(r.carrier_slope),
        fmt12(r.carrier_start),
        fmt12(r.depth),
        r.present.to_string(),
    ]);
    Ok(csv.as_str().to_string())
}
