use std::path::Path;
use std::process::{Command, Output};

use vcell::cli::{cmd_dendrogram, cmd_oracle, load_config, PLOT_FILE, RESULTS_FILE, SUMMARY_FILE};

fn vcell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcell")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    vcell(&args)
}

#[test]
fn row_count_matches_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &["--set", "trials=2", "--set", "n_users=12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let results = std::fs::read_to_string(dir.path().join(RESULTS_FILE)).unwrap();
    assert_eq!(results.lines().count(), 1 + 2 * 2 * 3 * 6);
    assert!(results.starts_with("trial,seed,method,scheme,v,sum_rate_bps,converged_cells,total_cells,warnings\n"));
    let summary = std::fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 3 * 6);
    let svg = std::fs::read_to_string(dir.path().join(PLOT_FILE)).unwrap();
    assert_eq!(svg.matches(r#"class="series""#).count(), 6);
    assert_eq!(svg.matches("<circle").count(), 2 * 3 * 6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--set", "trials=1", "--set", "seed=7", "--set", "n_users=15"];
    assert!(run_to(a.path(), &[&args[..], &["--jobs", "1"]].concat()).status.success());
    assert!(run_to(b.path(), &[&args[..], &["--jobs", "4"]].concat()).status.success());
    for f in [RESULTS_FILE, SUMMARY_FILE, PLOT_FILE] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn hierarchical_only_enumerates_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &["--set", "trials=1", "--set", "methods=hierarchical"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains(" 0 partitions evaluated"), "{stdout}");
}

#[test]
fn precision_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to(dir.path(), &["--set", "trials=1", "--set", "n_bs=2", "--set", "n_users=3", "--precision", "0"]);
    assert!(out.status.success());
    let results = std::fs::read_to_string(dir.path().join(RESULTS_FILE)).unwrap();
    let rate = results.lines().nth(1).unwrap().split(',').nth(5).unwrap();
    assert!(rate.len() > 8, "{rate}");
    let parsed: f64 = rate.parse().unwrap();
    assert_eq!(format!("{parsed:?}"), rate);
}

#[test]
fn config_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(&cfg, "# tiny\nn_bs = 2\nn_users = 4\ntrials = 1\nschemes = joint\n").unwrap();
    let out = run_to(&dir.path().join("o"), &["--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let results = std::fs::read_to_string(dir.path().join("o").join(RESULTS_FILE)).unwrap();
    assert_eq!(results.lines().count(), 1 + 2 * 2);

    std::fs::write(&cfg, "n_bs = 2\nfrobnicate = 3\n").unwrap();
    let out = run_to(&dir.path().join("o"), &["--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));

    let out = vcell(&["run", "--set", "n_users=many"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_users"));
}

#[test]
fn dendrogram_lines() {
    let six = vcell(&["dendrogram", "--set", "seed=3"]);
    assert!(six.status.success());
    let text = String::from_utf8(six.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("merge ") && l.contains(" -> ") && l.contains(" linkage=")));
    assert_eq!(vcell(&["dendrogram", "--set", "seed=3"]).stdout, six.stdout);

    let one = load_config("n_bs = 1", &[]).unwrap();
    assert_eq!(cmd_dendrogram(&one).unwrap(), "");
}

#[test]
fn oracle_command() {
    let big = vcell(&["oracle"]);
    assert!(!big.status.success());
    assert!(String::from_utf8_lossy(&big.stderr).contains("too large"));

    let out = vcell(&["oracle", "--set", "n_bs=2", "--set", "n_users=3", "--levels", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("oracle rate_bps="));

    let single = load_config("n_bs = 1\nn_users = 1", &[]).unwrap();
    let report = cmd_oracle(&single, 50, 0).unwrap();
    for line in report.lines().skip(1) {
        let ratio: f64 = line.rsplit("ratio=").next().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-6, "{line}");
    }
}
