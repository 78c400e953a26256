use std::io::Write as _;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conductor-lab"));
    c.env_remove("CONDUCTOR_LAB_TRUNCATION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn semigroup_json() {
    let v = json(&["semigroup", "4", "6", "9", "--format", "json"]);
    assert_eq!(v["gaps"], serde_json::json!([1, 2, 3, 5, 7, 11]));
    assert_eq!(v["conductor"], 12);
    assert_eq!(v["frobenius"], 11);
    assert_eq!(v["type"], 1);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn descent_flagship() {
    let o = run(&["descent", "--semigroup", "3", "4", "5", "--eta", "-1:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("conductor_level: pass"), "{text}");
    assert!(text.contains("descent: fail"), "{text}");

    let v = json(&["descent", "3,4,5", "--eta", "-1:1", "--format", "json"]);
    assert_eq!(v["conductor_level"], true);
    assert_eq!(v["descends"], false);
    let v = json(&["descent", "3,4,5", "--eta", "-2:1", "--format", "json"]);
    assert_eq!(v["descends"], true);
}

#[test]
fn gorenstein_trio_has_no_defect() {
    let v = json(&["defect", "node", "cusp", "tacnode", "--format", "json"]);
    assert_eq!(v["total_defect"], 0);
    assert_eq!(v["codim_delta"], 0);
    assert_eq!(v["locals"].as_array().unwrap().len(), 3);
}

#[test]
fn defect_mixed_tokens() {
    let v = json(&["defect", "3,4,5", "triple_point", "--format", "json"]);
    assert_eq!(v["total_defect"], 2);
    assert_eq!(v["locals"][0]["cm_type"], 2);
    assert_eq!(v["locals"][0]["paper_claim"], Value::Null);
}

#[test]
fn germ_and_dualizing() {
    let v = json(&["germ", "tacnode", "--format", "json"]);
    assert_eq!(v["delta"], 2);
    assert_eq!(v["conductor"], serde_json::json!([2, 2]));
    assert_eq!(v["gorenstein"], true);

    let v = json(&[
        "dualizing",
        "--semigroup",
        "3",
        "4",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(v["cm_type"], 2);
    assert_eq!(v["generator_exponents"], serde_json::json!([-2, -3]));
    // rationals are "num/den" strings
    assert_eq!(v["polar_basis"][0][0][0][1], "1/1");
}

#[test]
fn nodal_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"components": [{{"label": "A", "points": ["0", "1/2"]}}, {{"label": "B", "points": ["0", "-3/4"]}}],
            "nodes": [[["A", 0], ["B", 0]], [["A", 1], ["B", 1]]]}}"#
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&["nodal", path, "--select", "0:0,1:1", "--format", "json"]);
    assert_eq!(v["h0_omega"], 1);
    assert_eq!(v["dual_graph"]["cycle_rank"], 1);
    assert_eq!(v["selected_residue_rank"], 1);
    assert_eq!(v["basis"][0]["components"][0]["residues"][1][0], "1/2");

    let text = stdout(&run(&["nodal", path]));
    assert!(text.contains("h0(omega): 1"));
}

#[test]
fn nodal_point_at_infinity_is_rejected() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"components": [{{"label": "A", "points": ["0", "inf"]}}], "nodes": [[["A", 0], ["A", 1]]]}}"#
    )
    .unwrap();
    let o = run(&["nodal", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("malformed_curve") && err.contains("coordinate change"),
        "{err}"
    );
}

#[test]
fn formulas() {
    let v = json(&[
        "formulas",
        "rr",
        "--genus",
        "3",
        "--bundle",
        "bicanonical",
        "--format",
        "json",
    ]);
    assert_eq!(v["h0"], 6);
    let v = json(&[
        "formulas", "rr", "--genus", "1", "--degree", "0", "--format", "json",
    ]);
    assert_eq!(v["h0"], "undetermined");
    let v = json(&["formulas", "ribbon", "--genus", "2", "--format", "json"]);
    assert_eq!(v["ext_dim"], 3);
    let v = json(&["formulas", "quotient", "3", "1", "2", "--format", "json"]);
    assert_eq!(v["gorenstein"], false);
    assert_eq!(v["claimed_defect"], 2);
}

#[test]
fn exit_codes() {
    // usage errors: one line naming the problem
    for args in [
        &["bogus"][..],
        &["semigroup"],
        &["germ", "nonsense"],
        &["germ", "cusp", "--truncation", "0"],
        &["descent", "cusp", "--eta", "garbage"],
        &["formulas", "rr", "--genus", "2"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
    // engine errors carry a stable code
    let o = run(&["germ", "5,7,9", "--truncation", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("truncation_too_small"));
    let o = run(&["semigroup", "2", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["semigroup", "-3", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["formulas", "quotient", "0", "1", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn truncation_from_environment() {
    let o = bin()
        .args(["germ", "5,7,9"])
        .env("CONDUCTOR_LAB_TRUNCATION", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .args(["germ", "cusp", "--format", "json"])
        .env("CONDUCTOR_LAB_TRUNCATION", "9")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["truncation"], 9);
}

#[test]
fn catalog_report_is_deterministic_and_round_trips() {
    let a = run(&["catalog", "report", "--format", "json"]);
    let b = run(&["catalog", "report", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    let rows = v.as_array().unwrap();
    assert!(rows.iter().all(|r| r.as_object().unwrap().len() == 6));

    let table = stdout(&run(&["catalog", "report"]));
    assert!(table.contains("DISAGREE"));
    assert_eq!(
        table,
        stdout(&run(&["catalog", "report", "--format", "table"]))
    );
}

#[test]
fn every_json_command_round_trips() {
    for args in [
        &["semigroup", "3", "4", "5"][..],
        &["germ", "triple_point"],
        &["dualizing", "tacnode"],
        &["defect", "node", "3,4,5"],
        &[
            "formulas",
            "rr",
            "--genus",
            "0",
            "--bundle",
            "anticanonical",
        ],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let text = stdout(&run(&full));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&v).unwrap() + "\n",
            text,
            "{args:?}"
        );
    }
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("catalog"));
}

#[test]
fn library_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = conductor_lab_cli::run(["conductor-lab", "semigroup", "2", "3"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("symmetric: yes"));
}
