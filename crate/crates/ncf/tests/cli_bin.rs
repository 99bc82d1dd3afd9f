//! Black-box tests of the `ncf` binary: command wiring, config/flag
//! precedence, exit codes, and on-disk CSV artifacts.

use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str = "sweep_var,sweep_value,scheme,n,m,pt,mode,w,trials,seed,\
                      mean_packets,ci95_halfwidth,savings,decode_success_rate";

fn ncf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncf"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn ncf_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncf"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn selftest_passes_and_exits_zero() {
    let out = ncf(&["selftest"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("all 9 checks passed"));
}

#[test]
fn help_exits_zero() {
    let out = ncf(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for cmd in ["simulate", "sweep", "preset", "selftest"] {
        assert!(text.contains(cmd), "help should mention {cmd}");
    }
}

#[test]
fn simulate_prints_both_schemes() {
    let out = ncf(&[
        "simulate", "--n", "30", "--m", "3", "--pt", "0.5", "--trials", "40", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("lorawan:"));
    assert!(text.contains("ncf:"));
    assert!(text.contains("savings:"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "n = 20\nm = 2\npt = 0.5\ntrials = 40\n").unwrap();

    let out = ncf(&[
        "simulate",
        "--config",
        path.to_str().unwrap(),
        "--pt",
        "0.7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("p_t 0.700000"), "flag must win: {text}");
    assert!(text.contains("nodes 20, gateways 2"));
}

#[test]
fn validation_failures_exit_one() {
    // Out-of-range probability.
    let out = ncf(&["simulate", "--n", "10", "--pt", "1.5", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("p_t"));

    // Both gateway keys at once.
    let out = ncf(&[
        "simulate", "--n", "10", "--m", "2", "--gateways-ratio", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("gateways_ratio"));

    // equal mode without a connectivity factor.
    let out = ncf(&["simulate", "--n", "10", "--mode", "equal"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("w"));

    // sweep command without a sweep.
    let out = ncf(&["sweep", "--n", "10", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sweep"));

    // Config-file errors carry their line number.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "n = 10\nbogus = 1\n").unwrap();
    let out = ncf(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"));

    // Unknown preset name.
    let out = ncf(&["preset", "fig9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("fig9"));
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let args = |path: &Path| {
        vec![
            "sweep".to_string(),
            "--n".into(),
            "20".into(),
            "--m".into(),
            "2".into(),
            "--sweep".into(),
            "pt".into(),
            "--sweep-values".into(),
            "0.2,0.8".into(),
            "--trials".into(),
            "30".into(),
            "--seed".into(),
            "4".into(),
            "--output".into(),
            path.display().to_string(),
        ]
    };
    for path in [&csv_a, &csv_b] {
        let out = ncf(&args(path).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }

    let a = std::fs::read(&csv_a).unwrap();
    let b = std::fs::read(&csv_b).unwrap();
    assert_eq!(a, b, "same seed must reproduce the same bytes");

    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 5, "two points x two schemes plus header");
    assert!(lines[1].starts_with("pt,0.200000,lorawan,"));
    assert!(lines[2].starts_with("pt,0.200000,ncf,"));
}

#[test]
fn sweep_without_output_streams_csv_to_stdout() {
    let out = ncf(&[
        "sweep",
        "--n",
        "12",
        "--m",
        "2",
        "--sweep",
        "w",
        "--mode",
        "equal",
        "--sweep-values",
        "1,2",
        "--trials",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with(HEADER));
    // The count axis prints integers, and equal mode fills the w column.
    assert!(text.contains("w,1,lorawan,12,2,"));
    assert!(text.contains(",equal,2,"));
}

#[test]
fn preset_writes_named_csv_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("duty.csv");
    let plot = dir.path().join("duty.gp");
    let out = ncf(&[
        "preset",
        "fig5",
        "--trials",
        "20",
        "--seed",
        "3",
        "--output",
        csv.to_str().unwrap(),
        "--gnuplot-script",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(HEADER));
    assert_eq!(text.lines().count(), 1 + 20, "ten duty points, two schemes");

    let script = std::fs::read_to_string(&plot).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(script.contains("yerrorlines"));
}

#[test]
fn preset_defaults_to_figname_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = ncf_in(dir.path(), &["preset", "fig6", "--trials", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("fig6.csv")).unwrap();
    assert!(text.starts_with(HEADER));
    assert_eq!(text.lines().count(), 1 + 10, "five w points, two schemes");
}

#[test]
fn simulate_rejects_sweep_and_output_keys() {
    let out = ncf(&[
        "simulate", "--n", "10", "--sweep", "pt", "--sweep-values", "0.1,0.2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sweep"));

    let out = ncf(&["simulate", "--n", "10", "--output", "x.csv", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("output"));
}
