//! End-to-end checks of the binary: exit codes, output formats and the
//! capacity refusal path.

use std::process::Command;

fn maclab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maclab"))
}

#[test]
fn pass_exits_zero_with_json() {
    let out = maclab()
        .args(["verify-delta1", "--m", "1", "--n", "2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["config"]["command"], "verify-delta1");
}

#[test]
fn unknown_flags_exit_two() {
    let out = maclab()
        .args(["verify-trunc", "--frobnicate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = maclab().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_type_exits_two() {
    let out = maclab()
        .args(["verify-trunc", "--type", "E8", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_refusal_exits_two_and_mentions_the_override() {
    let out = maclab()
        .env("MACLAB_CAP", "5")
        .args([
            "verify-sym",
            "--type",
            "A1",
            "--weight-bound",
            "-3",
            "--p-bound",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("MACLAB_CAP"), "{text}");
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join("maclab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = maclab()
        .args([
            "verify-ortho",
            "--type",
            "A1",
            "--nq",
            "4",
            "--nt",
            "4",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["status"], "PASS");
}

#[test]
fn bailey_preset_forces_half_exponents() {
    let out = maclab()
        .args(["bailey-sl2", "--nq", "3", "--nt", "3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["qden"], 2);
    assert_eq!(v["config"]["root_system"], "A1");
}

#[test]
fn dump_matrix_produces_triplets() {
    let out = maclab()
        .args([
            "dump-matrix",
            "--type",
            "A1",
            "--operator",
            "delta",
            "--n",
            "2",
            "--degree",
            "2",
            "--z-weight",
            "-1",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dump = v["dump"].as_array().unwrap();
    assert!(dump[0].as_str().unwrap().starts_with("rows "));
    // Triplet lines parse as "row col value".
    for line in &dump[1..] {
        let parts: Vec<&str> = line.as_str().unwrap().split(' ').collect();
        assert_eq!(parts.len(), 3);
        let _: u32 = parts[0].parse().unwrap();
        let _: u32 = parts[1].parse().unwrap();
    }
}

#[test]
fn dump_identity_heads_with_dump_order() {
    let out = maclab()
        .args([
            "verify-macdonald-ct",
            "--type",
            "A1",
            "--nq",
            "4",
            "--nt",
            "4",
            "--dump-order",
            "2",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dump = v["dump"].as_array().unwrap();
    assert_eq!(dump.len(), 2);
    assert!(dump[0].as_str().unwrap().starts_with("lhs: "));
    assert!(dump[1].as_str().unwrap().starts_with("rhs: "));
}

#[test]
fn mismatch_reports_would_exit_one() {
    // The exit-code contract for FAIL is pinned at the report level: no
    // honest CLI invocation can fail while the suite is green.
    use maclab::report::Status;
    let mut r: maclab::Report = serde_json::from_str(
        &std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/v1/trunc_a1_n2.json"),
        )
        .unwrap(),
    )
    .unwrap();
    r.status = Status::Fail;
    assert_eq!(r.exit_code(), 1);
    r.status = Status::Capacity;
    assert_eq!(r.exit_code(), 2);
    r.status = Status::Pass;
    assert_eq!(r.exit_code(), 0);
}
