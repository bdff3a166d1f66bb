//! Process-level behavior of `eraser-sim`: exit codes, output schemas,
//! seed resolution, and layout-dependent CSV shape.

use std::path::Path;
use std::process::{Command, Output};

use eraser_cli::commands::{exit_code, CliError};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eraser-sim"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn verify_default_config_exits_zero() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "default.exp", "layout eraser\n");
    let out = run(bin().args(["verify", "--config"]).arg(&config));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 12);
    // Every measured entry carries a numeric deviation, not only a flag.
    for check in report["checks"].as_array().unwrap() {
        let status = check["status"].as_str().unwrap();
        if status == "pass" || status == "fail" || status == "info" {
            assert!(check["deviation"].is_f64(), "{check}");
        }
    }
}

#[test]
fn verify_removed_layout_reports_not_applicable_and_exits_zero() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "removed.exp", "layout removed\n");
    let out = run(bin().args(["verify", "--config"]).arg(&config));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let statuses: Vec<(&str, &str)> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap(), c["status"].as_str().unwrap()))
        .collect();
    assert!(statuses.contains(&("second_basis", "not_applicable")));
    assert!(statuses.contains(&("schmidt_coefficients", "not_applicable")));
    assert!(!statuses.iter().any(|&(_, s)| s == "fail"));
}

#[test]
fn malformed_config_exits_two_with_location_on_stderr() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "bad.exp", "layout eraser\nbins zero\n");
    let out = run(bin().args(["analytic", "--config"]).arg(&config));
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains("bins"), "stderr: {stderr}");
}

#[test]
fn missing_config_exits_two() {
    let out = run(bin().args(["analytic", "--config", "/nonexistent/x.exp"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_trials_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "t.exp", "layout eraser\n");
    let csv = dir.path().join("out.csv");
    let out = run(bin()
        .args(["sample", "--trials", "0", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&csv));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analytic_csv_shape_per_layout() {
    let dir = TempDir::new().unwrap();
    let full = write_config(dir.path(), "full.exp", "layout eraser\nbins 16\n");
    let out = run(bin().args(["analytic", "--config"]).arg(&full));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 4 * 16);
    assert_eq!(
        lines[0],
        "detector,bin,probability,conditional_probability,visibility_of_row"
    );

    // Column of joint probabilities sums to 1.
    let total: f64 = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);

    // Mirrors layout: the which-path rows are absent.
    let mirrors = write_config(dir.path(), "m.exp", "layout mirrors\nbins 16\n");
    let out = run(bin().args(["analytic", "--config"]).arg(&mirrors));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 16);
    assert!(lines[1..].iter().all(|l| {
        let det = l.split(',').next().unwrap();
        det == "b" || det == "c"
    }));
}

#[test]
fn sample_writes_counts_and_summary() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "s.exp", "layout eraser\nbins 32\n");
    let csv = dir.path().join("counts.csv");
    let out = run(bin()
        .args(["sample", "--trials", "20000", "--seed", "9", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&csv));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let counts = std::fs::read_to_string(&csv).unwrap();
    let total: u64 = counts
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 20000);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("counts.json")).unwrap())
            .unwrap();
    assert_eq!(summary["seed"], 9);
    assert_eq!(summary["trials"], 20000);
    assert!(summary["chi_square"]["p_value"].is_f64());
    assert_eq!(summary["config"]["bins"], 32);
    assert_eq!(summary["detectors"].as_array().unwrap().len(), 4);
}

#[test]
fn seed_resolution_order() {
    let dir = TempDir::new().unwrap();
    let plain = write_config(dir.path(), "plain.exp", "layout eraser\nbins 8\n");
    let seeded = write_config(dir.path(), "seeded.exp", "layout eraser\nbins 8\nseed 5\n");

    let run_with = |config: &Path, seed_flag: Option<&str>, env: Option<&str>, tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let mut cmd = bin();
        cmd.args(["sample", "--trials", "5000", "--config"])
            .arg(config)
            .arg("--out")
            .arg(&csv);
        if let Some(seed) = seed_flag {
            cmd.args(["--seed", seed]);
        }
        match env {
            Some(value) => cmd.env("ERASER_SIM_SEED", value),
            None => cmd.env_remove("ERASER_SIM_SEED"),
        };
        let out = run(&mut cmd);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(&csv).unwrap()
    };

    // Env var is the fallback…
    let via_env = run_with(&plain, None, Some("11"), "env");
    let via_flag = run_with(&plain, Some("11"), None, "flag");
    assert_eq!(via_env, via_flag);

    // …the config key beats the env…
    let via_config = run_with(&seeded, None, Some("11"), "config");
    let explicit_5 = run_with(&plain, Some("5"), None, "explicit5");
    assert_eq!(via_config, explicit_5);

    // …and the flag beats both.
    let flag_wins = run_with(&seeded, Some("13"), Some("11"), "flagwins");
    let explicit_13 = run_with(&plain, Some("13"), None, "explicit13");
    assert_eq!(flag_wins, explicit_13);

    // A malformed env seed is a usage error.
    let csv = dir.path().join("bad-env.csv");
    let out = run(bin()
        .args(["sample", "--trials", "100", "--config"])
        .arg(&plain)
        .arg("--out")
        .arg(&csv)
        .env("ERASER_SIM_SEED", "not-a-seed"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_bin_configs_are_fully_supported() {
    // One bin is the degenerate bare-pair case: no fringe to resolve, but
    // every command must still succeed.
    let dir = TempDir::new().unwrap();
    for layout in ["eraser", "mirrors", "removed"] {
        let config = write_config(
            dir.path(),
            &format!("one-{layout}.exp"),
            &format!("layout {layout}\nbins 1\ncycles 0\n"),
        );
        let out = run(bin().args(["analytic", "--config"]).arg(&config));
        assert!(out.status.success(), "analytic {layout}");
        let out = run(bin().args(["verify", "--config"]).arg(&config));
        assert!(
            out.status.success(),
            "verify {layout}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let csv = dir.path().join(format!("one-{layout}.csv"));
        let out = run(bin()
            .args(["sample", "--trials", "1000", "--seed", "1", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&csv));
        assert!(out.status.success(), "sample {layout}");
    }
}

#[test]
fn verify_merged_paths_reports_overlap_and_adjusts() {
    let dir = TempDir::new().unwrap();
    // Non-integer cycles with path-blind bins: the dressed states overlap.
    let config = write_config(
        dir.path(),
        "merged.exp",
        "layout eraser\nbins 64\ncycles 2.5\nphi0 0.3\nmerge_paths true\n",
    );
    let out = run(bin().args(["verify", "--config"]).arg(&config));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);

    let check = |name: &str| -> &serde_json::Value {
        report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()
    };
    let overlap = check("pointer_overlap");
    assert_eq!(overlap["status"], "info");
    assert!(overlap["deviation"].as_f64().unwrap() > 0.05);
    // Expectations adjust: marginals and Schmidt coefficients still pass
    // at the exact tolerances, against the overlap-corrected values.
    assert_eq!(check("branch_probabilities")["status"], "pass");
    assert_eq!(check("schmidt_coefficients")["status"], "pass");
    // The circular-basis claim genuinely needs orthogonal dressed states.
    assert_eq!(check("second_basis")["status"], "not_applicable");
    assert_eq!(check("pointer_cross_block")["status"], "not_applicable");
}

#[test]
fn ordering_is_a_label_only() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "o.exp", "layout eraser\nbins 8\n");

    let csv_after = dir.path().join("after.csv");
    let csv_before = dir.path().join("before.csv");
    for (csv, ordering) in [
        (&csv_after, "after-detection"),
        (&csv_before, "before-detection"),
    ] {
        let out = run(bin()
            .args([
                "sample",
                "--trials",
                "2000",
                "--seed",
                "3",
                "--ordering",
                ordering,
            ])
            .args(["--config"])
            .arg(&config)
            .arg("--out")
            .arg(csv));
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    // Counts are ordering-independent; only the summary label changes.
    assert_eq!(
        std::fs::read(&csv_after).unwrap(),
        std::fs::read(&csv_before).unwrap()
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("before.json")).unwrap())
            .unwrap();
    assert_eq!(summary["ordering"], "before-detection");

    let out = run(bin().args(["verify", "--config"]).arg(&config));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ordering"], "after-detection");
    assert_eq!(report["table"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_code_mapping_covers_verification_failure() {
    assert_eq!(exit_code(&Ok(true)), 0);
    assert_eq!(exit_code(&Ok(false)), 1);
    assert_eq!(exit_code(&Err(CliError::InvalidEnvSeed("x".into()))), 2);
}

#[test]
fn verify_report_can_be_written_to_a_file() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "v.exp", "layout eraser\nbins 8\n");
    let report_path = dir.path().join("report.json");
    let out = run(bin()
        .args(["verify", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&report_path));
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}
