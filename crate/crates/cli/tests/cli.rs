use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lzsim::output::{fmt12, read_csv};

fn lz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lz-sim")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const LINEAR: &str = "[system]\narity = three\nV0 = 2\n[drive]\nkind = linear\nv = 2\n[run]\nsamples = 400\n";

#[test]
fn run_writes_trajectory_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "a.cfg", LINEAR);
    let o = lz(&["run", &cfg, "--output", out.to_str().unwrap(), "--engine", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let traj = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,P_gg,P_s,P_rr,P_1,P_2,P_3\n"));
    let (_, rows) = read_csv(&traj).unwrap();
    assert_eq!(rows.len(), 400);
    for r in &rows {
        assert!((r[1] + r[2] + r[3] - 1.0).abs() < 1e-8);
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.lines().next().unwrap().ends_with(",dP_max"));
    let phases = fs::read_to_string(out.join("phases.csv")).unwrap();
    assert!(phases.contains("stokes_phase_c1"));

    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["complete"], true);
    let files: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(files, ["trajectory.csv", "phases.csv", "summary.csv"]);
}

#[test]
fn reruns_are_byte_identical_and_manifest_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", LINEAR);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(lz(&["run", &cfg, "--output", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(lz(&["run", &cfg, "--output", b.to_str().unwrap()]).status.code(), Some(0));
    let read = |p: &Path| fs::read(p.join("trajectory.csv")).unwrap();
    assert_eq!(read(&a), read(&b));

    let c = dir.path().join("c");
    let manifest = a.join("manifest.json");
    let o = lz(&["run", manifest.to_str().unwrap(), "--output", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&a), read(&c));
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", LINEAR);
    let out = dir.path().join("o");
    lz(&["run", &cfg, "--output", out.to_str().unwrap()]);
    let text = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    for line in text.lines().skip(1).take(50) {
        for cell in line.split(',') {
            let x: f64 = cell.parse().unwrap();
            assert_eq!(fmt12(x), cell);
        }
    }
}

#[test]
fn sweep_emits_grid_and_overlay_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "single_cycle.cfg",
        "[system]\narity = two\n[drive]\nkind = periodic\nDelta0 = 5\ndelta = 20\nomega = 1\n\
         [run]\ninitial_state = adiabatic_minus\ncycles = 1\nphase = 1.5707963267948966\nobservable = final\n\
         engine = both\n[sweep]\naxis1 = omega:0.3:3:10\n",
    );
    let out = dir.path().join("s");
    let o = lz(&["sweep", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = {
        let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
        let mut lines = text.lines();
        let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
        (header, lines.map(String::from).collect::<Vec<_>>())
    };
    assert_eq!(header[0], "omega");
    assert!(header.contains(&"dP_max".to_string()));
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    let (h, two) = read_csv(&fs::read_to_string(out.join("exact_P_plus.csv")).unwrap()).unwrap();
    assert_eq!(h, ["omega", "P_plus"]);
    assert_eq!(two.len(), 10);
    let (_, aia) = read_csv(&fs::read_to_string(out.join("aia_P_plus.csv")).unwrap()).unwrap();
    for (e, a) in two.iter().zip(&aia) {
        assert!((e[1] - a[1]).abs() < 0.05);
    }
}

#[test]
fn failed_points_give_exit_3_and_partial_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.cfg",
        "[system]\narity = two\n[drive]\nkind = periodic\nDelta0 = 5\ndelta = 20\nomega = 1\n\
         [run]\ncycles = 1\nengine = aia\n[sweep]\naxis1 = delta:1:20:3\n",
    );
    let out = dir.path().join("f");
    let o = lz(&["sweep", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["complete"], false);
    assert_eq!(m["failed_points"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lz(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lz(&["run"]).status.code(), Some(1));
    let cfg = write_config(dir.path(), "a.cfg", LINEAR);
    assert_eq!(lz(&["run", &cfg, "--no-such-flag", "1"]).status.code(), Some(1));
    let bad = write_config(
        dir.path(),
        "b.cfg",
        "[system]\narity = two\n[drive]\nkind = linear\nv = 2\n[run]\ninitial_state = rr\n",
    );
    let o = lz(&["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"));
    assert_eq!(lz(&["run", &cfg, "--tolerance", "1e-3"]).status.code(), Some(2));
    let missing = dir.path().join("missing.cfg");
    assert_eq!(lz(&["run", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn validate_prints_margins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "single_cycle.cfg",
        "[system]\narity = two\n[drive]\nkind = periodic\nDelta0 = 5\ndelta = 20\nomega = 1\n",
    );
    let o = lz(&["validate", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 2, "{text}");
    assert!(text.contains("margin"));
}

#[test]
fn gaps_table() {
    let o = lz(&["gaps", "--V0-range", "0:100:50"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = read_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(h, ["V0", "dE_0", "dE_half", "dE_V0"]);
    assert_eq!(rows.len(), 50);
    let last = rows.last().unwrap();
    assert!((last[1] - 2f64.sqrt()).abs() < 1e-3);
    assert!((last[1] - last[3]).abs() < 1e-9);
}

#[test]
fn resonance_table() {
    let o = lz(&["resonances", "--Delta0", "-15", "--V0", "40", "--omega-range", "2:20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("family,n,omega,from,to\n"));
    for w in ["15,", "7.5,", "18.3333333333,", "13.75,", "11,"] {
        assert!(text.contains(&format!(",{w}")), "{w} missing");
    }
    let o = lz(&["resonances", "--Δ0", "-15", "--V0", "40", "--ω-range", "2:20"]);
    assert_eq!(o.stdout, text.into_bytes());
}

#[test]
fn beats_from_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "beats.cfg",
        "[system]\narity = three\nV0 = 2\n[drive]\nkind = linear\nv = 5\n[run]\nt_start = -4\nt_end = 40\n\
         samples = 20001\n",
    );
    let out = dir.path().join("b");
    assert_eq!(lz(&["run", &cfg, "--output", out.to_str().unwrap()]).status.code(), Some(0));
    let o = lz(&["beats", out.join("trajectory.csv").to_str().unwrap(), "--from", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let envelope: f64 = row[0].parse().unwrap();
    assert!((envelope - 1.0).abs() < 0.1, "{text}");
    assert_eq!(row[4], "true");
}
