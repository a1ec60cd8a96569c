//! The binary end to end: exit codes and output files.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = "sim.ue_per_cell = 1\nsim.duration = 3\n";

fn uavsim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavsim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup(config: &str) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.conf"), config).unwrap();
    dir
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn presets_validate() {
    let dir = setup(SMALL);
    for preset in ["uma-fullbuffer", "rma-ftp", "rma-ftp-lowq"] {
        let out = uavsim(dir.path(), &["validate", "--preset", preset]);
        assert_eq!(out.status.code(), Some(0), "{preset}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn dump_is_a_loadable_config() {
    let dir = setup(SMALL);
    let out = uavsim(dir.path(), &["validate", "--dump", "--preset", "rma-ftp", "--config", "small.conf"]);
    assert_eq!(out.status.code(), Some(0));
    let dump = String::from_utf8(out.stdout).unwrap();
    assert!(dump.contains("sim.ue_per_cell = 1"));
    fs::write(dir.path().join("dump.conf"), &dump).unwrap();
    let again = uavsim(dir.path(), &["validate", "--dump", "--config", "dump.conf"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(String::from_utf8(again.stdout).unwrap(), dump);
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = setup("mobility.q_in = -10\nmobility.q_out = -8\n");
    let out = uavsim(dir.path(), &["validate", "--config", "small.conf"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q_in"));

    fs::write(dir.path().join("typo.conf"), "sim.ue_hieght = 100\n").unwrap();
    let out = uavsim(dir.path(), &["validate", "--config", "typo.conf"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sim.ue_height"));

    assert_eq!(uavsim(dir.path(), &["validate", "--preset", "urban"]).status.code(), Some(1));
    assert_eq!(uavsim(dir.path(), &["run", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(uavsim(dir.path(), &["validate", "--config", "missing.conf"]).status.code(), Some(1));

    fs::write(dir.path().join("preset.conf"), "preset = rma-ftp\n").unwrap();
    let out = uavsim(dir.path(), &["validate", "--preset", "uma-fullbuffer", "--config", "preset.conf"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_events_and_trace() {
    let dir = setup(SMALL);
    let out = uavsim(dir.path(), &["run", "--config", "small.conf", "--trace", "2", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ho_rate="));
    let o = dir.path().join("o");
    assert!(read(&o, "events.csv").starts_with("time_s,"));
    let trace = read(&o, "trace_2.csv");
    assert!(trace.starts_with("time_s,ue_id,serving_cell,sinr_db"));
    assert!(trace.lines().count() > 100);
    assert!(read(&o, "trace_2.svg").starts_with("<svg"));
}

#[test]
fn run_is_reproducible_for_a_seed() {
    let dir = setup(SMALL);
    for out in ["a", "b"] {
        let r = uavsim(dir.path(), &["run", "--config", "small.conf", "--seed", "7", "--out", out, "--format", "csv"]);
        assert_eq!(r.status.code(), Some(0));
    }
    assert_eq!(read(&dir.path().join("a"), "events.csv"), read(&dir.path().join("b"), "events.csv"));
}

#[test]
fn sweep_writes_one_row_per_point() {
    let dir = setup(SMALL);
    let out = uavsim(
        dir.path(),
        &["sweep", "--config", "small.conf", "--heights", "0,300", "--speeds", "3,30,160", "--drops", "1", "--out", "s"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = dir.path().join("s");
    assert_eq!(read(&s, "sweep.csv").lines().count(), 7);
    assert!(read(&s, "sweep_ho_rate.svg").starts_with("<svg"));
    assert!(read(&s, "sweep_sir_percentiles.svg").starts_with("<svg"));
    assert!(s.join("events.csv").exists());
}

#[test]
fn svg_only_format_skips_csv() {
    let dir = setup(SMALL);
    let out = uavsim(dir.path(), &["sweep", "--config", "small.conf", "--heights", "0", "--speeds", "3", "--drops", "1", "--format", "svg", "--out", "s"]);
    assert_eq!(out.status.code(), Some(0));
    let s = dir.path().join("s");
    assert!(!s.join("sweep.csv").exists());
    assert!(s.join("sweep_sir_percentiles.svg").exists());
}

#[test]
fn sirmap_and_pattern_outputs() {
    let dir = setup(SMALL);
    let out = uavsim(dir.path(), &["sirmap", "--preset", "rma-ftp", "--height", "50,300", "--resolution", "250", "--out", "m"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = dir.path().join("m");
    for h in ["50", "300"] {
        let csv = read(&m, &format!("sirmap_{h}.csv"));
        assert!(csv.starts_with("x_m,y_m,serving_cell,sir_db\n"));
        assert!(csv.lines().count() > 10);
    }
    assert!(read(&m, "sirmap_percentiles.svg").starts_with("<svg"));

    let out = uavsim(dir.path(), &["pattern", "--zenith-step", "10", "--azimuth-step", "30", "--out", "p"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read(&dir.path().join("p"), "pattern.csv").lines().count();
    assert_eq!(rows, 1 + 19 * 12);

    let bad = uavsim(dir.path(), &["pattern", "--zenith-step", "0", "--out", "p"]);
    assert_eq!(bad.status.code(), Some(1));
}
