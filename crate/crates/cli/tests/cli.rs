use std::fs;
use std::process::{Command, Output};

fn rlpw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlpw"))
        .args(args)
        .env_remove("RLPW_JOBS")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    rlpw(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(rlpw(args).stdout).unwrap()
}

#[test]
fn gram_passes_for_the_new_flavor() {
    let args = [
        "gram",
        "--p",
        "5",
        "--q",
        "3",
        "--flavor",
        "new",
        "--j-range",
        "-1:1",
        "--n-range",
        "-3:3",
        "--tol",
        "1e-10",
    ];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    for key in [
        "flavor",
        "expected_diag",
        "max_offdiag",
        "max_diag_dev",
        "pass",
        "tol",
        "size",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["size"], 42);
}

#[test]
fn gram_fails_when_auscher_is_held_to_one() {
    assert_eq!(code(&["gram", "--flavor", "auscher", "--expected-diag", "1"]), 1);
    assert_eq!(code(&["gram", "--flavor", "auscher"]), 0);
}

#[test]
fn auscher_reports_one_over_q() {
    let out = rlpw(&["auscher", "--p", "5", "--q", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("diag = 1/3 (0.333"), "{text}");
    assert!(text.contains("FAIL"));
    let out = rlpw(&["auscher", "--p", "2", "--q", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["atoms", "--p", "4", "--q", "2", "--m", "1"]), 2);
    assert_eq!(code(&["atoms", "--fig", "3"]), 2);
    assert_eq!(code(&["atoms", "--fig", "1", "--q", "2"]), 2);
    assert_eq!(code(&["atoms", "--p", "5", "--q", "3", "--m", "3"]), 2);
    assert_eq!(code(&["gram", "--j-range", "2:1"]), 2);
    assert_eq!(code(&["roundtrip"]), 2);
    assert_eq!(code(&["oracle"]), 2);
    assert_eq!(
        code(&["bandpass", "--m", "2", "--spectrum", "/nonexistent.json"]),
        2
    );
    assert_eq!(code(&["nosuchcommand"]), 2);
}

#[test]
fn jobs_variable_is_validated() {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_rlpw"))
            .args(["tiling"])
            .env("RLPW_JOBS", jobs)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("x").status.code(), Some(2));
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("3").status.code(), Some(0));
    assert_eq!(run("1").stdout, run("3").stdout);
}

#[test]
fn oracle_convergence_failure_exits_three() {
    assert_eq!(
        code(&["oracle", "--seed", "1", "--pairs", "1", "--tol", "1e-30"]),
        3
    );
}

#[test]
fn oracle_reports_have_the_documented_shape() {
    let args = ["oracle", "--seed", "4", "--pairs", "6"];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 6);
    for r in arr {
        assert_eq!(r["closed_form"].as_array().unwrap().len(), 2);
        assert_eq!(r["oracle"].as_array().unwrap().len(), 2);
        assert!(r["oracle_err"].is_number() && r["pass"].as_bool().unwrap() && r["op"].is_string());
    }
}

#[test]
fn tiling_json_uses_exact_strings() {
    let args = ["tiling", "--p", "7", "--q", "4", "--j-range", "-8:8"];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"disjoint": true, "cover": true, "gaps": [], "overlaps": []})
    );
}

#[test]
fn parseval_default_example_and_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let args = [
        "parseval",
        "--N-list",
        "1,4096",
        "--coeffs-out",
        csv.to_str().unwrap(),
        "--prune",
        "1e-6",
    ];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    let partials = v["partials"].as_array().unwrap();
    assert_eq!(partials[0][0], 1);
    assert!((partials[0][1].as_f64().unwrap() - 0.15088).abs() < 1e-5);
    assert!((v["norm_sq"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert!(v["deficit"].as_f64().unwrap() > 0.0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# rlpw-coeffs v1"));
    assert_eq!(lines.next(), Some("j,n,m,re,im"));
    assert!(lines.count() > 10);
    // a tight tolerance at small N is a check failure, not an error
    assert_eq!(code(&["parseval", "--N-list", "4", "--tol", "0.001"]), 1);
}

#[test]
fn parseval_reads_spectrum_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    fs::write(
        &path,
        r#"{"pieces":[{"lo":"-4/3","hi":"-1","re":1.0,"im":0.0},{"lo":"1","hi":"4/3","re":1.0,"im":0.0}],"hermitian":true}"#,
    )
    .unwrap();
    let args = [
        "parseval",
        "--spectrum",
        path.to_str().unwrap(),
        "--j-range",
        "0:0",
        "--N-list",
        "4096",
    ];
    assert_eq!(code(&args[..3]), 2);
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    assert!((v["norm_sq"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    // touches zero frequency, which no band covers
    fs::write(
        &path,
        r#"{"pieces":[{"lo":"0","hi":"1/2","re":1.0,"im":0.0}],"hermitian":false}"#,
    )
    .unwrap();
    assert_eq!(
        code(&[
            "parseval",
            "--spectrum",
            path.to_str().unwrap(),
            "--j-range",
            "-2:2"
        ]),
        2
    );
}

#[test]
fn bandpass_csv_and_pass_rule() {
    let args = ["bandpass", "--n-max", "256,512,1024"];
    assert_eq!(code(&args), 0);
    let text = stdout(&args);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# rlpw-bandpass v1");
    assert_eq!(lines[1], "n_max,rel_l2_error");
    assert_eq!(lines.len(), 5);
    assert_eq!(code(&["bandpass", "--n-max", "256,512", "--tol", "1e-9"]), 1);
    assert_eq!(
        code(&["bandpass", "--p", "7", "--q", "4", "--j", "1", "--m", "3", "--n-max", "128,256"]),
        0
    );
}

#[test]
fn roundtrip_is_seeded() {
    let args = ["roundtrip", "--seed", "11", "--sets", "20"];
    assert_eq!(code(&args), 0);
    assert_eq!(stdout(&args), stdout(&args));
    assert_eq!(
        code(&[
            "roundtrip",
            "--seed",
            "11",
            "--sets",
            "5",
            "--flavor",
            "auscher",
            "--p",
            "7",
            "--q",
            "4"
        ]),
        0
    );
}

#[test]
fn atoms_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let args = [
            "atoms",
            "--p",
            "5",
            "--q",
            "3",
            "--m",
            "1",
            "--domain",
            "time",
            "--grid",
            "-10:10:0.01",
            "--out",
            p.to_str().unwrap(),
        ];
        assert_eq!(code(&args), 0);
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert_eq!(text.lines().count(), 2 + 2001);
    assert!(text.starts_with("# rlpw-kernel v1\narg,value\n"));
    let at0 = text.lines().find(|l| l.starts_with("0.0")).unwrap();
    let v: f64 = at0.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn atoms_frequency_domains() {
    let text = stdout(&[
        "atoms",
        "--p",
        "7",
        "--q",
        "4",
        "--m",
        "2",
        "--domain",
        "freq",
        "--grid",
        "5/4:3/2:1/8",
        "--flavor",
        "auscher",
    ]);
    let vals: Vec<f64> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // band [5/4, 3/2): amplitude 1 for the Auscher flavor
    assert_eq!(vals, vec![1.0, 1.0, 0.0]);
    let text = stdout(&[
        "atoms",
        "--p",
        "5",
        "--q",
        "3",
        "--m",
        "2",
        "--domain",
        "freq-scaled",
        "--j",
        "-1",
        "--grid",
        "-5/3:5/3:1/3",
    ]);
    let vals: Vec<f64> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // band [4/3 * 5/3, 5/3 * 5/3) lies beyond the grid
    assert!(vals.iter().all(|&v| v == 0.0));
}
