//! CLI acceptance: deterministic reports and the exit-code contract,
//! exercised against the checked-in family fixtures.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ingham"))
}

fn family(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../families")
        .join(name)
}

#[test]
fn criterion_10_cli_contract() {
    let dir = tempfile::tempdir().unwrap();

    // identical invocations must produce byte-identical reports
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let status = bin()
            .arg("verify")
            .arg("--family")
            .arg(family("integers.json"))
            .args(["--R-grid", "6"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(
            status.success(),
            "verify on the integers fixture must exit 0"
        );
    }
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reruns produced different reports");

    let report: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(report["all_certified"], serde_json::Value::Bool(true));
    assert_eq!(report["records"].as_array().unwrap().len(), 6);

    // the m = 2 partition and the 2-D fixture must certify as well
    for (fixture, extra) in [
        ("integers.json", Some(("--m", "2"))),
        ("lattice5.json", None),
    ] {
        let mut cmd = bin();
        cmd.arg("verify")
            .arg("--family")
            .arg(family(fixture))
            .args(["--R-grid", "4"]);
        if let Some((flag, value)) = extra {
            cmd.args([flag, value]);
        }
        let status = cmd
            .arg("--out")
            .arg(dir.path().join("v.json"))
            .status()
            .unwrap();
        assert!(status.success(), "verify on {fixture} must exit 0");
    }

    // constants: exits 0 and reports a positive lower constant
    let out_c = dir.path().join("c.json");
    let status = bin()
        .arg("constants")
        .arg("--family")
        .arg(family("lattice5.json"))
        .args(["--R", "6.0"])
        .arg("--out")
        .arg(&out_c)
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out_c).unwrap()).unwrap();
    assert!(report["chain"]["L"].as_f64().unwrap() > 0.0);

    // sweep: header, one row per radius, trailing slope comment
    let out_s = dir.path().join("sweep.csv");
    let status = bin()
        .arg("sweep")
        .arg("--family")
        .arg(family("integers.json"))
        .args(["--R-grid", "6"])
        .arg("--out")
        .arg(&out_s)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out_s).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("R,r,L,lambda_min,lambda_max"));
    assert_eq!(lines.len(), 8, "6 rows plus header plus slope line");
    assert!(lines[7].starts_with('#') && lines[7].contains("slope"));

    // radius at the critical value violates the hypothesis: exit 1
    let status = bin()
        .arg("verify")
        .arg("--family")
        .arg(family("integers.json"))
        .args(["--R", "3.141592653589793"])
        .arg("--out")
        .arg(dir.path().join("h.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "hypothesis failure must exit 1");

    // malformed family: exit 1
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dimension": 1, "points": []}"#).unwrap();
    let status = bin()
        .arg("verify")
        .arg("--family")
        .arg(&bad)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "empty family must exit 1");

    // a negative guard band fails every certificate: exit 1
    let status = bin()
        .arg("verify")
        .arg("--family")
        .arg(family("integers.json"))
        .args(["--R-grid", "4"])
        .env("INGHAM_TOL", "-1")
        .arg("--out")
        .arg(dir.path().join("t.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "negative tolerance must exit 1");

    // usage errors surface as clap's exit 2
    let status = bin()
        .arg("verify")
        .arg("--family")
        .arg(family("integers.json"))
        .args(["--R", "4.0", "--R-grid", "5"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2), "conflicting flags must exit 2");

    println!(
        "criterion 10: PASS (byte-identical reruns; exit 0 on certified fixtures, \
         1 on hypothesis/parse/tolerance failures, 2 on usage errors)"
    );
}
