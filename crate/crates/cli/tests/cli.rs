use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ssf-lab"));
    c.env_remove("SSF_LAB_SEED");
    c
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

fn run_config(text: &str, out: &Path) -> Output {
    let cfg = out.join("config.json");
    std::fs::create_dir_all(out).unwrap();
    std::fs::write(&cfg, text).unwrap();
    bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(out.join("out")).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn empty_scenario_list_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config(r#"{"seed": 1, "scenarios": []}"#, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert_eq!(report, "scenario,property,trials,worst_gap,tolerance,pass,witness_file\n");
}

#[test]
fn trace_identity_scenario_gives_ten_passing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["run", "--config"]).arg(configs().join("quick.json")).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let rows: Vec<&str> = report.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 7);
        assert_eq!((cols[0], cols[1], cols[5], cols[6]), ("trace", "trace_identity", "true", ""));
        let (gap, tol): (f64, f64) = (cols[3].parse().unwrap(), cols[4].parse().unwrap());
        assert!(gap.abs() <= tol && tol > 0.0);
    }
    assert!(dir.path().join("curves/trace-zeta.csv").exists());
}

#[test]
fn zero_dimension_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config(r#"{"seed": 1, "scenarios": [{"name": "z", "property": "trace_identity", "params": {"dims": [0]}}]}"#, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("scenarios[0] (z).params.dims"), "{}", stderr(&o));
    assert!(!dir.path().join("out/report.csv").exists());
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("{\"seed\": 1,\n  \"scenarios\": [,]}", dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2 column"), "{}", stderr(&o));
}

#[test]
fn weight_of_the_wrong_direction_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 1, "scenarios": [{"name": "w", "property": "th1_concavity",
        "weight": {"kind": "threshold", "lambda0": 0.0, "side": "plus"}}]}"#;
    let o = run_config(cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(".weight"), "{}", stderr(&o));
}

#[test]
fn failing_property_exits_one_and_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 3, "scenarios": [{"name": "strict", "property": "trace_identity",
        "params": {"dims": [24], "trials": 3}, "tolerance": {"absolute": 1e-300}}]}"#;
    let o = run_config(cfg, dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let failing: Vec<&str> = report.lines().filter(|l| l.contains(",false,")).collect();
    assert!(!failing.is_empty());
    for row in failing {
        assert!(row.ends_with(".json"));
        let rel = row.rsplit(',').next().unwrap();
        assert!(rel.starts_with("failures/strict-"));
        let witness: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out").join(rel)).unwrap()).unwrap();
        assert_eq!(witness["property"], "trace_identity");
        assert!(witness["inputs"]["a0"]["dim"] == 24);
        assert!(row.contains(",1e-300,"), "resolved tolerance is reported: {row}");
    }
}

#[test]
fn env_seed_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: Option<&str>, name: &str| {
        let mut c = bin();
        c.args(["run", "--config"]).arg(configs().join("quick.json")).arg("--out").arg(dir.path().join(name));
        if let Some(s) = seed {
            c.env("SSF_LAB_SEED", s);
        }
        assert!(c.status().unwrap().success());
        std::fs::read_to_string(dir.path().join(name).join("report.csv")).unwrap()
    };
    let base = run(None, "a");
    assert_eq!(base, run(Some("1"), "b"), "quick.json uses seed 1");
    assert_ne!(base, run(Some("2"), "c"));
}

#[test]
fn list_properties() {
    let o = bin().arg("list-properties").output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("th1_concavity"));
    assert!(text.contains("bs_identity"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn compute_examples() {
    let pair = ["--a", "[[-1,0],[0,1]]", "--a0", "[[0,0],[0,0]]"];
    let o = bin().args(["compute", "ssf"]).args(pair).output().unwrap();
    assert_eq!(stdout(&o), "lo,hi,value\n-1.0,0.0,-1.0\n0.0,1.0,1.0\n");
    let o = bin().args(["compute", "zeta", "--lambda", "0"]).args(pair).output().unwrap();
    assert_eq!(stdout(&o), "lambda,zeta_minus\n0.0,-1.0\n");
    let o = bin()
        .args(["compute", "gamma", "--a0", "[[0]]", "--v", "[[1]]", "--weight", r#"{"kind":"threshold","lambda0":1,"side":"minus"}"#])
        .output()
        .unwrap();
    let last: f64 = stdout(&o).lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last <= 1e-3);
}

#[test]
fn compute_from_operand_file() {
    let o = bin().args(["compute", "ssf", "--operands"]).arg(configs().join("operands.json")).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "lo,hi,value\n-1.0,0.0,-1.0\n0.0,1.0,1.0\n");
    let o = bin().args(["compute", "ssf", "--a", "[[1, 2]]", "--a0", "[[0]]"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curves_are_written_for_coupling_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 5, "scenarios": [
        {"name": "sc", "property": "strong_coupling", "weight": {"kind": "threshold", "lambda0": 0.0, "side": "minus"}, "params": {"dims": [4]}},
        {"name": "bs", "property": "bs_identity", "weight": {"kind": "exp_decay", "t": 1.0}, "params": {"dims": [4]}}]}"#;
    let o = run_config(cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ratio = std::fs::read_to_string(dir.path().join("out/curves/sc-ratio.csv")).unwrap();
    assert_eq!(ratio.lines().count(), 14);
    let coupling = std::fs::read_to_string(dir.path().join("out/curves/bs-coupling.csv")).unwrap();
    assert!(coupling.starts_with("alpha,value\n0.25,"));
}
