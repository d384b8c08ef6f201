use std::path::Path;
use std::process::{Command, Output};

fn crfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crfactor"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn export_import_export_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, extra) in [
        ("gammaL1", vec!["--p", "3", "--q", "3"]),
        ("gu32", vec![]),
        ("extraspecial", vec!["--p", "5", "--q", "5"]),
    ] {
        let first = dir.path().join(format!("{name}.json"));
        let mut args = vec!["example", name, "-o", path(&first)];
        args.extend(&extra);
        assert!(crfactor(&args).status.success(), "{name}");
        let text = std::fs::read_to_string(&first).unwrap();
        assert!(text.ends_with("}\n") && text.lines().count() == 1);

        let parsed = crfactor::cli::GroupFile::parse(&text).unwrap();
        let again = crfactor::cli::GroupFile::from_group(
            parsed.name.clone(),
            &parsed.to_group(1 << 20).unwrap(),
        );
        assert_eq!(again.to_json(), text, "{name}");
    }
}

#[test]
fn verify_reports_sharp_binary_tower() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    assert!(
        crfactor(&["example", "gammaL1", "--level", "3", "-o", path(&file)])
            .status
            .success()
    );
    let out = crfactor(&["verify", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["c_p"], 7);
    assert_eq!(v["d"], 8);
    assert_eq!(v["slack"], "0");
    assert_eq!(v["sharp"], true);

    let out = crfactor(&["--table", "verify", path(&file)]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("name\tp\tf\td\tr\ts\tc_p\tepsilon\tbound\tslack\tsharp")
    );
    assert_eq!(
        lines.next(),
        Some("gammaL1-p2-q2-L3\t2\t1\t8\t1\t1\t7\t1\t7\t0\ttrue")
    );
}

#[test]
fn non_completely_reducible_input_exits_two_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("u.json");
    std::fs::write(
        &file,
        r#"{"p":3,"f":1,"d":2,"generators":[[[1,1],[0,1]],[[2,0],[0,1]]]}"#,
    )
    .unwrap();
    let out = crfactor(&["verify", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotCompletelyReducible");
    assert!(err["hint"].as_str().unwrap().contains("--corollary"));

    let out = crfactor(&["verify", "--corollary", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["r"], 2);
    assert_eq!(v["p_core_order"], 3);
    assert_eq!(v["c_p"], 0);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"p":2,"f":1,"d":2,"generators":[[[1,1],[1,1]]]}"#).unwrap();
    let out = crfactor(&["order", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotInvertible");

    std::fs::write(&file, "not json").unwrap();
    assert_eq!(crfactor(&["tally", path(&file)]).status.code(), Some(2));
    assert_eq!(
        crfactor(&["order", "/nonexistent/group.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn degree_limit_exits_three() {
    let out = crfactor(&["--degree-limit", "100", "example", "gl-counterexample"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "DegreeTooLarge");
}

#[test]
fn counterexample_tally_and_cp() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gl.json");
    assert!(crfactor(&[
        "example",
        "gl-counterexample",
        "--p",
        "3",
        "--q",
        "343",
        "--d",
        "1",
        "-o",
        path(&file)
    ])
    .status
    .success());
    let out = crfactor(&["cp", path(&file), "--p", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["c_p"], 2);
    let out = crfactor(&["tally", path(&file)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cyclic"], serde_json::json!({"2": 1, "3": 2, "19": 1}));
    let out = crfactor(&["order", path(&file)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 342);
}

#[test]
fn decompose_reports_summands() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sum.json");
    std::fs::write(&file, r#"{"p":2,"f":1,"d":4,"generators":[[[0,1,0,0],[1,1,0,0],[0,0,1,0],[0,0,0,1]],[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,1]]]}"#).unwrap();
    let out = crfactor(&["decompose", path(&file)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["r"], 2);
    assert_eq!(v["cr"], "CompletelyReducible");
    assert_eq!(v["summands"].as_array().unwrap().len(), 2);
}

#[test]
fn suite_and_fuzz_run_clean() {
    let out = crfactor(&["--table", "suite", "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("gammaL1-p2-q2-L2\t")));

    let out = Command::new(env!("CARGO_BIN_EXE_crfactor"))
        .args(["fuzz", "--d", "2", "--q", "2,3", "--trials", "20"])
        .env("CRFACTOR_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tested"], 80);
    assert_eq!(v["violations"], serde_json::json!([]));
}
