use std::process::{Command, Output};

use logpart::report::read_csv;
use logpart::Verdict;

fn logpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logpart"))
        .args(args)
        .env_remove("LOGPART_MAX_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn partition_values() {
    let out = logpart(&["partition", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1");
    assert_eq!(stdout(&logpart(&["partition", "5"])).trim(), "7");
    assert_eq!(stdout(&logpart(&["partition", "100"])).trim(), "190569292");
}

#[test]
fn partition_rejects_negative() {
    assert_eq!(logpart(&["partition", "-1"]).status.code(), Some(2));
    assert_eq!(logpart(&["partition", "x"]).status.code(), Some(2));
}

#[test]
fn ratio_conjecture_holds_from_45() {
    let out = logpart(&["verify", "conj1.3", "--from", "45", "--to", "8000"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 7956);
    assert!(rows.iter().all(|r| r.verdict == Verdict::Holds));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fails=0"));
}

#[test]
fn ratio_conjecture_fails_below_45() {
    let out = logpart(&["verify", "conj1.3", "--from", "2", "--to", "44"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert!(rows.iter().any(|r| r.verdict == Verdict::Fails));
}

#[test]
fn exact_ratio_holds() {
    let out = logpart(&["verify", "thm1.1", "--from", "2", "--to", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.first().unwrap().n, 2);
    assert_eq!(rows.last().unwrap().n, 5000);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        logpart(&["verify", "thm9.9", "--from", "2", "--to", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        logpart(&["verify", "thm1.1", "--from", "9", "--to", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        logpart(&["verify", "thm1.1", "--from", "1", "--to", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        logpart(&["verify", "thm1.1", "--from", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        logpart(&["thresholds", "--r", "1", "--family", "thm31"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        logpart(&["thresholds", "--r", "2", "--family", "thm99"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_report_and_out_file() {
    let dir = std::env::temp_dir().join(format!("logpart-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("thm31.json");
    let out = logpart(&[
        "verify",
        "thm3.1",
        "--from",
        "12",
        "--to",
        "40",
        "--r",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["statement"], "thm3.1");
    assert_eq!(v["range"]["from"], "12");
    assert_eq!(v["rows"][0]["r"], "1");
    assert_eq!(v["summary"]["total"], "29");
    assert_eq!(v["summary"]["holds"], "29");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn upper_bound_fails_at_11() {
    let out = logpart(&["verify", "thm3.1", "--from", "1", "--to", "11", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = read_csv(out.stdout.as_slice()).unwrap();
    let failing: Vec<u64> = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Fails)
        .map(|r| r.n)
        .collect();
    assert_eq!(failing, vec![1, 3, 5, 7, 11]);
}

#[test]
fn lemma_and_product_sweeps() {
    assert_eq!(
        logpart(&["verify", "lemma:L4", "--from", "1", "--to", "200"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        logpart(&["verify", "bo", "--from", "10", "--to", "200"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        logpart(&["verify", "bo", "--from", "4", "--to", "9"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn thresholds_json() {
    let out = logpart(&["thresholds", "--r", "2", "--family", "thm31"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n_of_r"], 147);
    for key in ["c1", "c2", "c3", "u_or_m_1", "u_or_m_2", "lambert_argument"] {
        assert!(v[key]["midpoint"].is_string(), "{key}");
        assert!(v[key]["radius"].is_string(), "{key}");
    }

    let v: serde_json::Value = serde_json::from_str(&stdout(&logpart(&[
        "thresholds",
        "--r",
        "3",
        "--family",
        "thm41",
    ])))
    .unwrap();
    assert_eq!(v["n_of_r"], 201);
    let m2: f64 = v["u_or_m_2"]["midpoint"].as_str().unwrap().parse().unwrap();
    assert!((m2 - 199.48).abs() < 0.01);

    let v: serde_json::Value = serde_json::from_str(&stdout(&logpart(&[
        "thresholds",
        "--r",
        "1",
        "--family",
        "thm41",
    ])))
    .unwrap();
    assert!(v["direct"].is_string());
    assert!(v.get("c1").is_none());
}

#[test]
fn g_roots_output() {
    let out = logpart(&["roots-g"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mid = |prefix: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(prefix)).unwrap();
        line[prefix.len()..]
            .split_whitespace()
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((mid("x1 = ") - 0.64).abs() < 0.01);
    assert!((mid("x2 = ") - 4996.47).abs() < 0.5);
    assert_eq!(text.matches("Holds").count(), 3);
}

#[test]
fn precision_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_logpart"))
        .args(["verify", "thm1.2", "--from", "7", "--to", "20"])
        .env("LOGPART_MAX_PRECISION_BITS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_logpart"))
        .args(["verify", "thm1.2", "--from", "7", "--to", "20"])
        .env("LOGPART_MAX_PRECISION_BITS", "128")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
