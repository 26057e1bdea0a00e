use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fabricmul(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fabricmul")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn built(dir: &Path, extra: &[&str]) {
    let mut args = vec!["build", "--design", "proposed", "--out", "p.json"];
    args.extend_from_slice(extra);
    let o = fabricmul(dir, &args);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn build_then_verify_passes() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &["--inits", "derived"]);
    let o = fabricmul(dir.path(), &["verify", "--netlist", "p.json", "--width", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "256/256 PASS");
}

#[test]
fn report_prints_resource_line_and_reference() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &[]);
    let o = fabricmul(dir.path(), &["report", "--netlist", "p.json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "LUT6+LUT6_2: 11, CARRY4: 2"));
    assert!(text.contains("not reproduced"));

    let o = fabricmul(dir.path(), &["--json", "report", "--netlist", "p.json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["resources"]["lut_count"], 11);
    assert_eq!(v["resources"]["carry4_count"], 2);
}

#[test]
fn mutated_netlist_fails_verification_with_exit_two() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &[]);
    let text = std::fs::read_to_string(dir.path().join("p.json")).unwrap();
    let mutated = text.replacen("0x78887888A0A0A0A0", "0xF8887888A0A0A0A0", 1);
    assert_ne!(text, mutated);
    std::fs::write(dir.path().join("m.json"), mutated).unwrap();
    let o = fabricmul(dir.path(), &["verify", "--netlist", "m.json"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    // bit 63 is read when A0 = A1 = B0 = B1 = 1, flipping P1 of 3 x 3
    assert!(out.lines().next().unwrap().ends_with(" FAIL"));
    assert!(out.contains("a=3 b=3 expected=9 actual=11"), "{out}");
}

#[test]
fn published_inits_fail_verification() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &["--inits", "published"]);
    let o = fabricmul(dir.path(), &["--json", "verify", "--netlist", "p.json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["all_pass"], false);
}

#[test]
fn reconcile_always_succeeds() {
    let dir = TempDir::new().unwrap();
    let o = fabricmul(dir.path(), &["reconcile"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("summary: 5 match, 6 mismatch"));
    let o = fabricmul(dir.path(), &["--json", "reconcile"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["matched"], 5);
    assert_eq!(v["rows"][0]["published"], "0x78887888A0A0A0A0");
}

#[test]
fn timing_with_presets_and_model_file() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &[]);
    let o = fabricmul(dir.path(), &["timing", "--netlist", "p.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("critical path to"));

    std::fs::write(
        dir.path().join("m.json"),
        r#"{"lut6":1,"lut6_2":1,"carry4_stage":0,"carry4_entry":0,"net_general":0,"net_dedicated":0}"#,
    )
    .unwrap();
    let o = fabricmul(dir.path(), &["--json", "timing", "--netlist", "p.json", "--model", "m.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["timing"]["critical_path"]["total"], 2.0);
    assert!(v["reference_cpd_ns"]["label"].as_str().unwrap().contains("not reproduced"));

    let o = fabricmul(dir.path(), &["timing", "--netlist", "p.json", "--model", "slow"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn emit_writes_module_testbench_and_models() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &[]);
    let o = fabricmul(dir.path(), &["emit", "--netlist", "p.json", "--name", "mult4", "--testbench", "--models"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = std::fs::read_to_string(dir.path().join("mult4.v")).unwrap();
    assert_eq!(v.matches("CARRY4 ").count(), 2);
    let tb = std::fs::read_to_string(dir.path().join("mult4_tb.v")).unwrap();
    assert!(tb.contains("i < 256;"));
    assert!(dir.path().join("fabricmul_primitives.v").exists());

    let o = fabricmul(dir.path(), &["emit", "--netlist", "p.json", "--name", "9bad"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("legal Verilog identifier"));
}

#[test]
fn errors_are_single_prefixed_lines_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 5] = [
        &["verify", "--netlist", "missing.json"],
        &["build", "--design", "triangle", "--out", "x.json"],
        &["build", "--design", "array", "--inits", "published", "--out", "x.json"],
        &["build", "--design", "proposed", "--width", "5", "--out", "x.json"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = fabricmul(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with("error: "), "{args:?}: {err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn schema_errors_name_the_json_path() {
    let dir = TempDir::new().unwrap();
    built(dir.path(), &[]);
    let text = std::fs::read_to_string(dir.path().join("p.json")).unwrap();
    let broken = text.replacen("\"init\": \"0x78887888A0A0A0A0\"", "\"init\": \"0xZZ\"", 1);
    std::fs::write(dir.path().join("b.json"), broken).unwrap();
    let o = fabricmul(dir.path(), &["verify", "--netlist", "b.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cells[0].init"), "{}", stderr(&o));
}

#[test]
fn array_baseline_round_trip() {
    let dir = TempDir::new().unwrap();
    let o = fabricmul(dir.path(), &["build", "--design", "array", "--width", "3", "--out", "a.json"]);
    assert!(o.status.success());
    let o = fabricmul(dir.path(), &["verify", "--netlist", "a.json", "--width", "3"]);
    assert_eq!(stdout(&o).trim(), "64/64 PASS");
}
