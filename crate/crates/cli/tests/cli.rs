use std::process::Command;

use rpq_core::suite::VerificationReport;

fn rpqw(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rpqw")).args(args).output().expect("binary runs")
}

#[test]
fn list_checks_prints_every_catalog_id() {
    let out = rpqw(&["list-checks"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), rpq_core::suite::list_checks().len());
    assert!(text.lines().any(|l| l.starts_with("forced.fock") && l.contains("forced")));
}

#[test]
fn misordered_parameters_are_a_config_error() {
    let out = rpqw(&["verify", "--p", "1/5", "--q", "2/3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn bad_flags_are_config_errors() {
    for args in [
        vec!["verify", "--window", "99"],
        vec!["verify", "--suite", "everything"],
        vec!["verify", "--modes", "3..-3"],
        vec!["verify", "--toy", "1-0"],
        vec!["verify", "--family", "custom:/nonexistent.json"],
    ] {
        let out = rpqw(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn forced_run_reports_the_recursion_mismatch() {
    let out = rpqw(&["verify", "--suite", "forced", "--window", "6", "--modes=-2..2"]);
    assert_eq!(out.status.code(), Some(1));
    let report: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.checks.iter().all(|c| c.id.starts_with("forced.")));
    let failing: Vec<_> = report.checks.iter().filter(|c| c.status == rpq_core::check::Status::Fail).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c.id == "forced.calw_recursive_closed"));
    assert_eq!(report.config.window, 6);
}

#[test]
fn markdown_report_goes_to_file() {
    let path = std::env::temp_dir().join(format!("rpqw-report-{}.md", std::process::id()));
    let out = rpqw(&[
        "verify",
        "--suite",
        "forced",
        "--window",
        "6",
        "--modes=-2..2",
        "--format",
        "markdown",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("# Verification report"));
    assert!(text.contains("| forced.fock |"));
}
