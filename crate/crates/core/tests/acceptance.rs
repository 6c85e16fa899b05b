//! Runs criteria 1–12 once and prints one pass/fail line per criterion.
//! Wall-time budgets are checked alongside the numerical verdicts.

use robin_clusters::cli::{run, EXIT_OK};
use robin_clusters::verify::{run_timed, VerifyOptions};

fn budget_seconds(criterion: u32) -> f64 {
    match criterion {
        1 => 5.0,
        2 => 10.0,
        3 => 10.0,
        4 => 120.0,
        5 => 1.0,
        6 => 5.0,
        7 => 180.0,
        8 => 300.0,
        9 => 60.0,
        10 => 5.0,
        11 => 120.0,
        _ => f64::INFINITY,
    }
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let report = run_timed(&VerifyOptions::default(), |v, secs| {
        let in_time = secs <= budget_seconds(v.criterion);
        let ok = v.pass && in_time;
        let line = format!(
            "criterion {:>2} {}: {} ({secs:.2} s{})",
            v.criterion,
            if ok { "PASS" } else { "FAIL" },
            v.name,
            if in_time { "" } else { ", over budget" }
        );
        println!("{line}");
        println!("    {}", v.line());
        if !ok {
            failures.push(v.criterion);
        }
        lines.push(line);
    });
    assert_eq!(report.verdicts.len(), 12);

    // criterion 12 also requires the verify command itself to exit 0
    let dir = tempfile::tempdir().unwrap();
    let code = run([
        "robin-clusters",
        "verify",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    println!(
        "criterion 12 {}: verify command exit code {code}",
        if code == EXIT_OK { "PASS" } else { "FAIL" }
    );
    if code != EXIT_OK && !failures.contains(&12) {
        failures.push(12);
    }
    assert!(dir.path().join("verdict.json").exists());

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
