use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_diracflow"));
    c.env_remove("DIRACFLOW_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--output-format", "json"]);
    let out = run(&all);
    let report = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (out.status.code().expect("exit code"), report)
}

fn checks(report: &Value) -> &Vec<Value> {
    report["checks"].as_array().expect("checks array")
}

fn find<'a>(report: &'a Value, name: &str) -> &'a Value {
    checks(report)
        .iter()
        .find(|c| c["check"] == name)
        .expect("check present")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

#[test]
fn series_reproduces_committed_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["series", "--output-path", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut n = 0;
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        assert_eq!(
            fs::read(&path).unwrap(),
            fs::read(dir.path().join(name)).unwrap(),
            "{name:?}"
        );
        n += 1;
    }
    assert_eq!(n, 30);
    assert_eq!(
        fs::read_to_string(dir.path().join("h_2.txt")).unwrap(),
        "E + (1/2)*b*O^2\n"
    );
}

#[test]
fn series_single_family() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_str().unwrap();
    assert_eq!(
        run(&[
            "series",
            "--what",
            "omega",
            "--max-order",
            "2",
            "--output-path",
            p
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("omega_2.txt")).unwrap(),
        "0\n"
    );
    assert!(!dir.path().join("h_2.txt").exists());
    assert_eq!(
        run(&[
            "series",
            "--what",
            "hU",
            "--max-order",
            "4",
            "--output-path",
            p
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("hU_4.txt")).unwrap(),
        "(-1/8)*O^2*F + (1/4)*O*F*O - (1/8)*F*O^2 - (1/8)*b*O^4\n"
    );
}

#[test]
fn series_refuses_to_overwrite_without_bless() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_str().unwrap();
    let file = dir.path().join("h_4.txt");
    fs::write(&file, "0\n").unwrap();
    let args = ["series", "--what", "h", "--output-path", p];
    assert_eq!(run(&args).status.code(), Some(1));
    assert_eq!(fs::read_to_string(&file).unwrap(), "0\n");
    let mut blessed = args.to_vec();
    blessed.push("--bless");
    assert_eq!(run(&blessed).status.code(), Some(0));
    assert_ne!(fs::read_to_string(&file).unwrap(), "0\n");
    assert_eq!(run(&args).status.code(), Some(0));
}

#[test]
fn series_rejects_unsupported_order() {
    assert_eq!(run(&["series", "--max-order", "13"]).status.code(), Some(1));
}

#[test]
fn symbolic_suite_holds() {
    let (code, report) = json_report(&["verify-symbolic"]);
    assert_eq!(code, 0);
    assert_eq!(report["pass"], true);
    assert!(checks(&report).len() >= 12);
}

#[test]
fn perturbation_breaks_discrepancy() {
    let (code, report) = json_report(&["verify-symbolic", "--perturb"]);
    assert_eq!(code, 1);
    let d = find(&report, "discrepancy");
    assert_eq!(d["pass"], false);
    assert!(!d["values"]["residual"].as_str().unwrap().is_empty());
    assert!(checks(&report)
        .iter()
        .filter(|c| c["check"] != "discrepancy")
        .all(|c| c["pass"] == true));
}

#[test]
fn single_check_report() {
    let (code, report) = json_report(&["verify-symbolic", "--only", "cancellation", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(checks(&report).len(), 1);
    assert_eq!(find(&report, "cancellation")["values"]["n"], 3);
}

#[test]
fn numeric_suite_and_sixth_order_slope() {
    let (code, report) = json_report(&["verify-numeric"]);
    assert_eq!(code, 0);
    let slope = find(&report, "convergence_order_6")["values"]["slope"]
        .as_f64()
        .unwrap();
    assert!((7.5..=8.5).contains(&slope), "{slope}");
}

#[test]
fn zero_coupling_residuals_vanish() {
    let (code, report) = json_report(&["verify-numeric", "--dim", "4", "--kappa", "0"]);
    assert_eq!(code, 0);
    for name in [
        "z_involution",
        "z_limit",
        "nw_even",
        "energy_separation",
        "eriksen",
        "riccati_residual",
    ] {
        for v in find(&report, name)["values"].as_object().unwrap().values() {
            if let Some(x) = v.as_f64() {
                assert!(x.abs() < 1e-14 || x == 1e-4, "{name}: {x}");
            }
        }
    }
}

#[test]
fn special_class_report() {
    let (code, report) = json_report(&["verify-numeric", "--special-class"]);
    assert_eq!(code, 0);
    assert!(
        find(&report, "special_class_z0")["values"]["max_difference_to_exact_z"]
            .as_f64()
            .unwrap()
            < 1e-8
    );
}

#[test]
fn odd_dimension_fails() {
    assert_eq!(
        run(&["verify-numeric", "--dim", "5"]).status.code(),
        Some(1)
    );
}

fn flow_in(dir: &Path, extra: &[&str]) -> (i32, String, Value) {
    let mut args = vec![
        "flow",
        "--output-format",
        "json",
        "--output-path",
        dir.to_str().unwrap(),
    ];
    args.extend(extra);
    let code = run(&args).status.code().unwrap();
    let csv = fs::read_to_string(dir.join("flow.csv")).unwrap();
    let report = serde_json::from_str(&fs::read_to_string(dir.join("flow.json")).unwrap()).unwrap();
    (code, csv, report)
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn flow_default_run() {
    let dir = tempfile::tempdir().unwrap();
    let (code, csv, report) = flow_in(dir.path(), &[]);
    assert_eq!(code, 0);
    assert_eq!(
        csv.lines().next(),
        Some("s,phi,off_block,representation_residual")
    );
    let rows = rows(&csv);
    assert_eq!(rows.len(), 6001);
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1] + 1e-12));
    assert!(rows[0][1] > rows[rows.len() - 1][1]);
    assert!(rows.iter().all(|r| r[3] <= 1e-6));
    assert_eq!(report["pass"], true);
}

#[test]
fn flow_at_zero_coupling_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let (code, csv, _) = flow_in(dir.path(), &["--kappa", "0", "--s-max", "1"]);
    assert_eq!(code, 0);
    assert!(rows(&csv).iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (_, csv_a, _) = flow_in(a.path(), &["--s-max", "1"]);
    let (_, csv_b, _) = flow_in(b.path(), &["--s-max", "1"]);
    assert_eq!(csv_a, csv_b);
    assert_eq!(
        fs::read(a.path().join("flow.json")).unwrap(),
        fs::read(b.path().join("flow.json")).unwrap()
    );
    let first = run(&["verify-numeric", "--output-format", "json"]).stdout;
    assert_eq!(
        first,
        run(&["verify-numeric", "--output-format", "json"]).stdout
    );
}

#[test]
fn seed_from_environment_unless_flag_given() {
    let out = bin()
        .args(["verify-symbolic", "--only", "kernel_coefficients"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let env_seed = bin()
        .env("DIRACFLOW_SEED", "7")
        .args([
            "verify-numeric",
            "--special-class",
            "--output-format",
            "json",
        ])
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&env_seed.stdout).unwrap();
    assert_eq!(checks(&report)[0]["seed"], 7);
    let flagged = bin()
        .env("DIRACFLOW_SEED", "7")
        .args([
            "verify-numeric",
            "--special-class",
            "--seed",
            "3",
            "--output-format",
            "json",
        ])
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&flagged.stdout).unwrap();
    assert_eq!(checks(&report)[0]["seed"], 3);
}

#[test]
fn report_file_and_text_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify-symbolic",
        "--output-format",
        "json",
        "--output-path",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary
        .lines()
        .all(|l| l.starts_with("PASS ") || l.starts_with("verify-symbolic: ")));
    let report: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["command"], "verify-symbolic");
}

fn required(schema: &Value) -> Vec<&str> {
    schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect()
}

fn conforms(kind: &Value, v: &Value) -> bool {
    let allowed: Vec<&str> = match kind {
        Value::String(s) => vec![s.as_str()],
        Value::Array(a) => a.iter().map(|x| x.as_str().unwrap()).collect(),
        _ => return true,
    };
    allowed.iter().any(|t| match *t {
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        "object" => v.is_object(),
        "array" => v.is_array(),
        _ => false,
    })
}

#[test]
fn reports_match_published_schema() {
    let schema: Value = serde_json::from_str(
        &fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let item = &schema["properties"]["checks"]["items"];
    let dir = tempfile::tempdir().unwrap();
    let (_, _, flow) = flow_in(dir.path(), &["--s-max", "1"]);
    let reports = [
        json_report(&["verify-symbolic"]).1,
        json_report(&["verify-numeric", "--special-class"]).1,
        flow,
    ];
    for report in &reports {
        let top = report.as_object().unwrap();
        assert_eq!(
            top.keys().map(String::as_str).collect::<Vec<_>>().len(),
            required(&schema).len()
        );
        assert!(required(&schema).iter().all(|k| top.contains_key(*k)));
        assert!(schema["properties"]["command"]["enum"]
            .as_array()
            .unwrap()
            .contains(&report["command"]));
        for c in checks(report) {
            let obj = c.as_object().unwrap();
            assert_eq!(obj.len(), required(item).len());
            for key in required(item) {
                assert!(
                    conforms(&item["properties"][key]["type"], &obj[key]),
                    "{key} in {c}"
                );
            }
        }
    }
}
