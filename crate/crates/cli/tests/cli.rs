use std::process::{Command, Output};

use serde_json::Value;

fn gmajor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmajor")).args(args).env_remove("GMAJOR_GROUP_GUARD").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = gmajor(&full);
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["schema"], "gmajor/1");
    (code(&out), value)
}

#[test]
fn check_holds_fails_and_rejects() {
    let (c, v) = json(&["check", "--group", "B3", "--x", "2,0,0", "--y", "1,-1,0", "--oracle"]);
    assert_eq!(c, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["oracle"]["agrees"], true);

    let (c, v) = json(&["check", "--group", "B3", "--x", "3,0,0", "--y", "2,2,0"]);
    assert_eq!(c, 1);
    assert_eq!(v["certificate"]["kind"], "violated_inequality");
    assert_eq!(v["certificate"]["index"], 2);

    let out = gmajor(&["check", "--group", "B3", "--x", "1,0", "--y", "1,0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        &["check", "--group", "B3", "--x", "1/0,0,0", "--y", "1,0,0"][..],
        &["check", "--group", "B3", "--x", "0.5,0,0", "--y", "1,0,0"],
        &["check", "--group", "Q3", "--x", "1,0,0", "--y", "1,0,0"],
        &["rep", "--group", "D1", "--x", "1"],
        &["opf", "--fn", "nope", "--group", "B3", "--suite", "gradient"],
        &["opf", "--fn", "gk:5", "--group", "B3", "--suite", "gradient"],
        &["verify", "union-gap", "--triple", "B3:S3:D3"],
    ] {
        assert_eq!(code(&gmajor(args)), 2, "{args:?}");
    }
}

#[test]
fn oracle_agrees_across_families() {
    for (group, x, y) in [
        ("S3", "3,0,0", "1,1,1"),
        ("S3", "3,0,0", "1,1,0"),
        ("S3", "1,1,1", "3,0,0"),
        ("D3", "1,1,1", "1,1,-1"),
        ("D3", "3,2,-1", "2,2,1/2"),
        ("Z2^3", "1,-2,3", "0,2,-3"),
        ("Z2coord3", "1,2,-3", "5,5,2"),
        ("Z2sum3", "1,2,-3", "1,1,1"),
        ("trivial3", "1,2,3", "1,2,3"),
        ("B4", "4,-1,1/2,0", "1,1,1,1"),
    ] {
        let out = gmajor(&["check", "--group", group, "--x", x, "--y", y, "--oracle"]);
        assert!(code(&out) == 0 || code(&out) == 1, "{group} {x} {y}: {}", stdout(&out));
        assert!(stdout(&out).contains("(agrees)"), "{group} {x} {y}");
    }
}

#[test]
fn representatives() {
    for (group, x, expected) in
        [("D3", "1,-2,3", "(3,2,-1)"), ("Z2^3", "-1,0,5", "(1,0,5)"), ("S3", "2,2,2", "(2,2,2)")]
    {
        let out = gmajor(&["rep", "--group", group, "--x", x]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains(&format!("-> {expected}")), "{}", stdout(&out));
    }
    let (_, v) = json(&["rep", "--group", "S3", "--x", "2,2,2"]);
    assert_eq!(v["witness"], "[1,2,3]/[+,+,+]");
}

#[test]
fn orbit_sizes() {
    let (_, v) = json(&["orbit", "--group", "B3", "--x", "1,2,3"]);
    assert_eq!(v["size"], 48);
    let (_, v) = json(&["orbit", "--group", "S3", "--x", "1,1,2"]);
    assert_eq!(v["size"], 3);
}

#[test]
fn verify_subjects() {
    let (c, v) =
        json(&["verify", "region-intersection", "--triple", "B3:D3:Z2coord", "--samples", "1000", "--seed", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["violations"].as_array().unwrap().len(), 0);

    let (c, v) = json(&["verify", "union-gap", "--triple", "B3:D3:Z2coord"]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["witnesses"][0]["v"], serde_json::json!(["1", "0", "2"]));

    let (c, _) = json(&["verify", "refinement", "--triple", "B3:Z2^3:S3", "--samples", "500", "--seed", "7"]);
    assert_eq!(c, 0);
    let (c, _) = json(&["verify", "dual-sum", "--triple", "B3:Z2^3:S3", "--samples", "200"]);
    assert_eq!(c, 0);
    // The sum-hyperplane quotient is not a subgroup of B_n, so the regions differ.
    let (c, _) = json(&["verify", "region-intersection", "--triple", "B3:D3:Z2sum", "--samples", "200"]);
    assert_eq!(c, 1);
}

#[test]
fn opf_suites() {
    let (c, _) = json(&["opf", "--fn", "g1", "--group", "B4", "--suite", "gradient"]);
    assert_eq!(c, 0);

    let out = gmajor(&["opf", "--fn", "paper-counterexample-n4", "--group", "B4", "--suite", "gradient"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("violation at (1,1,1,1/4): root 4 (0,0,0,1) gives -15/64"), "{}", stdout(&out));

    let (c, _) = json(&[
        "opf",
        "--fn",
        "family:a=1,b=1",
        "--group",
        "D4",
        "--suite",
        "monotonic",
        "--trials",
        "500",
        "--seed",
        "7",
    ]);
    assert_eq!(c, 0);

    let (c, v) = json(&["opf", "--fn", "h", "--group", "D3", "--suite", "invariance", "--samples", "20"]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["mode"], "exact");
    let (c, _) = json(&["opf", "--fn", "h", "--group", "B3", "--suite", "invariance", "--samples", "20"]);
    assert_eq!(c, 1);
}

#[test]
fn group_guard_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gmajor"))
        .args(["orbit", "--group", "B4", "--x", "1,2,3,4"])
        .env("GMAJOR_GROUP_GUARD", "100")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the enumeration guard"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "refinement", "--triple", "B3:D3:Z2coord", "--samples", "50", "--seed", "3", "--format", "json"][..],
        &[
            "opf",
            "--fn",
            "g1",
            "--group",
            "D4",
            "--suite",
            "monotonic",
            "--trials",
            "30",
            "--seed",
            "3",
            "--format",
            "json",
        ],
        &["check", "--group", "D3", "--x", "3,2,-1", "--y", "2,2,1/2", "--oracle", "--format", "json"],
    ] {
        let (a, b) = (gmajor(args), gmajor(args));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
