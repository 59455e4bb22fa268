use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn harmonic(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_harmonic"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("HARMONIC_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(doc: &Value, schema: &str) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} does not validate: {errors:?}", path.display());
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn phi_on_the_line_is_cosine() {
    let out = harmonic(&["phi", "--model", "euclidean", "--n", "0", "--lambda", "1,0", "--rmax", "6.283"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# manifest: {"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["r", "re_phi", "im_phi", "re_dphi", "im_dphi"]);
    assert_eq!(rows.len(), 401);
    for row in &rows {
        assert!((row[1] - row[0].cos()).abs() < 1e-10);
        assert!((row[3] + row[0].sin()).abs() < 1e-10);
        assert_eq!(row[2], 0.0);
    }
    // 17 significant digits in every field
    for field in text.lines().nth(3).unwrap().split(',') {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{field}");
    }
}

#[test]
fn certify_rejects_one_and_three_with_the_first_cosine_zero() {
    let out = harmonic(
        &["certify", "--model", "euclidean", "--n", "0", "--r1", "1", "--r2", "3", "--target", "sphere"],
        None,
    );
    assert!(out.status.success());
    let doc = json_stdout(&out);
    validate(&doc, "certify");
    assert_eq!(doc["verdict"], "rejected");
    let w = &doc["witness"];
    assert!((w["re"].as_f64().unwrap() + (PI / 2.0).powi(2)).abs() < 1e-9);
    assert!(w["im"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(doc["manifest"]["command"], "certify");
    assert_eq!(doc["manifest"]["model"]["name"], "euclidean(0)");
}

#[test]
fn certify_accepts_an_incommensurable_pair() {
    let out = harmonic(&["certify", "--model", "euclidean", "--r1", "1", "--r2", "1.4142135623730951"], None);
    let doc = json_stdout(&out);
    validate(&doc, "certify");
    assert_eq!(doc["verdict"], "accepted");
    assert_eq!(doc["witness"], Value::Null);
}

#[test]
fn zeros_and_bad_radii_reports() {
    let out = harmonic(
        &["zeros", "--model", "euclidean", "--r", "1", "--target", "sphere", "--box", "-70,-30,60,30"],
        None,
    );
    assert!(out.status.success());
    let doc = json_stdout(&out);
    validate(&doc, "zeros");
    let zeros = doc["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 3);
    let mut re: Vec<f64> = zeros.iter().map(|z| z["re"].as_f64().unwrap()).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    for (j, x) in re.iter().enumerate() {
        assert!((x + ((2 * j + 1) as f64 * PI / 2.0).powi(2)).abs() < 1e-9);
    }

    let out = harmonic(
        &["bad-radii", "--model", "euclidean", "--r1", "1", "--rmax", "4", "--box", "-200,-10,10,10"],
        None,
    );
    let doc = json_stdout(&out);
    validate(&doc, "bad-radii");
    let radii: Vec<f64> = doc["bad_radii"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for expect in [1.0 / 3.0, 3.0 / 5.0, 1.0, 5.0 / 3.0, 3.0] {
        assert!(radii.iter().any(|r| (r - expect).abs() < 1e-10), "{expect} missing from {radii:?}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let out = harmonic(&["phi", "--bogus"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = harmonic(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = harmonic(&["zeros", "--model", "euclidean", "--r", "1", "--box", "1,2,3"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failures_print_a_diagnostic_and_exit_with_one() {
    for (args, kind) in [
        (vec!["phi", "--model", "torus", "--lambda", "1", "--rmax", "1"], "config"),
        (vec!["heat", "--model", "euclidean", "--t", "9"], "invalid_parameter"),
        (vec!["phi", "--model", "euclidean", "--lambda", "1", "--rmax=-2"], "invalid_parameter"),
    ] {
        let out = harmonic(&args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let doc: Value = serde_json::from_slice(&out.stderr).unwrap();
        validate(&doc, "error");
        assert_eq!(doc["error"]["kind"], kind);
    }
}

#[test]
fn geo_checks_pass_and_validate() {
    for space in ["plane", "h2"] {
        for test in ["displacement", "projector", "selfadjoint", "idempotence"] {
            let out = harmonic(&["geo-check", "--space", space, "--test", test], None);
            assert!(out.status.success(), "{space} {test}");
            let doc = json_stdout(&out);
            validate(&doc, "geo-check");
            assert_eq!(doc["passed"], true);
        }
    }
}

#[test]
fn heat_check_reports_the_requested_fields() {
    let out = harmonic(&["heat-check", "--model", "hyperbolic", "--n", "2", "--t", "0.5", "--lmax", "2"], None);
    assert!(out.status.success());
    let doc = json_stdout(&out);
    validate(&doc, "heat-check");
    assert!(doc["max_rel_err"].as_f64().unwrap() < 1e-3);
    assert_eq!(doc["lambdas"].as_array().unwrap().len(), 21);
    assert_eq!(doc["t"].as_f64(), Some(0.5));
}

#[test]
fn outputs_are_identical_across_thread_counts_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| -> Vec<u8> {
        let p = dir.path().join(name);
        let out = harmonic(
            &["geo-check", "--space", "h2", "--test", "selfadjoint", "--out", p.to_str().unwrap()],
            Some(threads),
        );
        assert!(out.status.success());
        std::fs::read(&p).unwrap()
    };
    let a = run("1", "g.json");
    let b = run("4", "g.json");
    assert_eq!(a, b);

    let p = dir.path().join("z.json");
    let zeros = ["zeros", "--model", "damek-ricci", "--m", "2", "--k", "1", "--r", "2", "--box", "-40,-5,5,5"];
    let mut args = zeros.to_vec();
    args.extend(["--out", p.to_str().unwrap()]);
    assert!(harmonic(&args, Some("1")).status.success());
    let first = std::fs::read(&p).unwrap();
    let out = harmonic(&["replay", p.to_str().unwrap()], Some("3"));
    let doc = json_stdout(&out);
    validate(&doc, "replay");
    assert_eq!(doc["identical"], true);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&p).unwrap());

    // a tampered file is detected
    let text = String::from_utf8(first).unwrap().replacen("\"count\": ", "\"count\":  ", 1);
    std::fs::write(&p, text).unwrap();
    let out = harmonic(&["replay", p.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stdout(&out)["identical"], false);
}

#[test]
fn abel_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("a.csv");
    let radial = dir.path().join("f.csv");
    let model = ["--model", "damek-ricci", "--m", "2", "--k", "1"];
    let mut args = vec!["abel"];
    args.extend(model);
    args.extend(["--out", line.to_str().unwrap()]);
    assert!(harmonic(&args, None).status.success());
    let mut args = vec!["abel", "--inverse", "--in", line.to_str().unwrap()];
    args.extend(model);
    args.extend(["--out", radial.to_str().unwrap()]);
    let out = harmonic(&args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&radial).unwrap());
    assert_eq!(header, ["r", "value"]);
    let err = rows
        .iter()
        .map(|r| (r[1] - (-(r[0] / 0.3f64).powi(2)).exp()).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn model_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dr.conf");
    std::fs::write(&cfg, "# Damek-Ricci, H = 2\nmodel = damek-ricci\nm = 2\nk = 1\n").unwrap();
    let out = harmonic(&["kg", "--config", cfg.to_str().unwrap(), "--t", "1"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let manifest: Value = serde_json::from_str(text.lines().next().unwrap().trim_start_matches("# manifest: ")).unwrap();
    assert_eq!(manifest["model"]["h"].as_f64(), Some(2.0));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["s", "value"]);
    // support grows by exactly t
    let last = rows.last().unwrap();
    assert!((last[0] - (0.3 * 6.5 + 1.0)).abs() < 1e-12);
}

#[test]
fn radial_solvers_write_csv() {
    for cmd in ["wave", "heat"] {
        let out = harmonic(&[cmd, "--model", "hyperbolic", "--n", "2", "--t", "0.5"], None);
        assert!(out.status.success(), "{cmd}");
        let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
        assert_eq!(header, ["r", "value"]);
        assert!(rows.len() > 100 && rows[0][0] == 0.0);
        assert!(rows.iter().all(|r| r[1].is_finite()));
    }
}

#[test]
fn cheeger_report_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("g.csv");
    let out = harmonic(
        &["cheeger", "--model", "hyperbolic", "--n", "2", "--rmax", "20", "--csv", table.to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    let doc = json_stdout(&out);
    validate(&doc, "cheeger");
    assert_eq!(doc["passed"], true);
    let (header, rows) = csv_rows(&std::fs::read_to_string(&table).unwrap());
    assert_eq!(header, ["r", "log_vol_over_r", "area_over_vol", "theta_ratio"]);
    assert_eq!(rows.len(), 20);
    // θ'/θ = 2 coth r on H³
    assert!((rows[19][3] - 2.0 / 20f64.tanh()).abs() < 1e-12);
}

#[test]
fn quick_suite_passes_with_forty_checks() {
    let out = harmonic(&["suite", "--quick"], None);
    let doc = json_stdout(&out);
    validate(&doc, "suite");
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.len() >= 40);
    let failed: Vec<&Value> = checks.iter().filter(|c| c["passed"] != true).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert!(out.status.success());
    let criteria: std::collections::BTreeSet<i64> = checks.iter().map(|c| c["criterion"].as_i64().unwrap()).collect();
    assert_eq!(criteria.len(), 12);
}
