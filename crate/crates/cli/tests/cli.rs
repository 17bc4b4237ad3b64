use serde_json::Value;
use std::process::{Command, Output};

fn belltest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_belltest"))
        .args(args)
        .env_remove("BELLTEST_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = belltest(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_theorem_reports_bound_and_cases() {
    let v = json(&["verify-theorem"]);
    assert_eq!(v["min_functional_value"], -1);
    assert_eq!(v["values"].as_array().unwrap().len(), 81);
    assert_eq!(v["case_bounds"][2]["case"], "iii");
    assert_eq!(v["case_bounds"][2]["min_three_term"], -3);
    assert_eq!(v["all_satisfied"], true);
}

#[test]
fn verify_theorem_output_is_byte_stable() {
    for format in ["json", "csv"] {
        let a = belltest(&["verify-theorem", "--format", format]);
        let b = belltest(&["verify-theorem", "--format", format]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn eval_symmetric_measurable_with_forced_f() {
    let v = json(&[
        "eval",
        "--ineq",
        "ardehali31",
        "--source",
        "qm-real",
        "--eta",
        "0.2",
        "--phi",
        "30",
        "--force-F",
        "1",
    ]);
    assert!((num(&v, "lhs") + 1.5).abs() < 1e-12);
    assert!((num(&v, "violation_factor") - 1.5).abs() < 1e-12);
    assert_eq!(v["violated"], true);
    assert_eq!(v["inputs"]["F"], 1.0);
}

#[test]
fn eval_bell65_from_differences() {
    let v = json(&[
        "eval",
        "--ineq",
        "bell65",
        "--source",
        "qm-ideal",
        "--diffs",
        "120,120,120",
    ]);
    assert!((num(&v, "lhs") + 1.5).abs() < 1e-12);
}

#[test]
fn eval_chsh_at_standard_angles() {
    let v = json(&[
        "eval",
        "--ineq",
        "chsh",
        "--source",
        "qm-ideal",
        "--angles",
        "0,22.5,45,67.5",
    ]);
    assert!((num(&v, "violation_factor") - std::f64::consts::SQRT_2).abs() < 1e-9);
}

#[test]
fn report_fields_in_documented_order() {
    let out = belltest(&["eval", "--ineq", "ternary"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = [
        "\"name\"",
        "\"lhs\"",
        "\"bound\"",
        "\"margin\"",
        "\"violation_factor\"",
        "\"violated\"",
        "\"inputs\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).expect(k)).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn eval_csv_has_header_and_row() {
    let out = belltest(&["eval", "--ineq", "ternary", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "name,lhs,bound,margin,violation_factor,violated,std_error,sigma_distance"
    );
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "ternary");
    assert!((fields[1].parse::<f64>().unwrap() + 1.5).abs() < 1e-12);
}

#[test]
fn eval_lhv_model_file_satisfies_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uniform.txt");
    std::fs::write(&path, belltest::FourAxisModel::uniform().to_text()).unwrap();
    let v = json(&[
        "eval",
        "--ineq",
        "ternary",
        "--source",
        "lhv",
        "--model",
        path.to_str().unwrap(),
    ]);
    assert!(num(&v, "margin") >= -1e-12);
    assert_eq!(v["violated"], false);
}

#[test]
fn eval_rejects_unrealizable_differences() {
    let out = belltest(&["eval", "--ineq", "ternary", "--diffs", "120,30,120,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--diffs"));
}

#[test]
fn eval_rejects_bad_geometry() {
    let out = belltest(&[
        "eval",
        "--ineq",
        "measurable",
        "--source",
        "qm-real",
        "--eta",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--eta"));
}

#[test]
fn eval_lhv_requires_model() {
    let out = belltest(&["eval", "--ineq", "ternary", "--source", "lhv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--model"));
}

#[test]
fn unknown_inequality_is_invalid_input() {
    let out = belltest(&["eval", "--ineq", "ardehali99"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = belltest(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = belltest(&["eval", "--help"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("illustrative"));
}

const MC_ARGS: [&str; 12] = [
    "mc",
    "--pairs",
    "10000000",
    "--source",
    "qm-real",
    "--eta",
    "0.2",
    "--phi",
    "30",
    "--force-F",
    "1",
    "--seed",
];

#[test]
fn mc_converges_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let counters = dir.path().join("counters.csv");
    let manifest = dir.path().join("manifest.txt");
    let mut args: Vec<&str> = MC_ARGS.to_vec();
    args.push("42");
    args.extend([
        "--counters",
        counters.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);

    let first = belltest(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let csv_first = std::fs::read(&counters).unwrap();
    let manifest_first = std::fs::read(&manifest).unwrap();
    let second = belltest(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(csv_first, std::fs::read(&counters).unwrap());
    assert_eq!(manifest_first, std::fs::read(&manifest).unwrap());

    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let se = num(&v, "std_error");
    assert!((num(&v, "lhs") + 1.5).abs() <= 3.0 * se);
    assert!(v["sigma_distance"].is_f64());

    let text = String::from_utf8(csv_first).unwrap();
    assert!(text.starts_with("pair,cell,count\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 9);
    let parsed = belltest::montecarlo::parse_counters_csv(&text).unwrap();
    assert!(parsed.values().all(|c| c.n_emitted() == 10_000_000));
}

#[test]
fn mc_seed_falls_back_to_environment() {
    let run = |env: Option<&str>, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_belltest"));
        cmd.args(["mc", "--pairs", "100000", "--format", "csv"])
            .env_remove("BELLTEST_SEED");
        if let Some(e) = env {
            cmd.env("BELLTEST_SEED", e);
        }
        if let Some(s) = seed {
            cmd.args(["--seed", s]);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
    assert_eq!(run(Some("5"), Some("9")), run(None, Some("9")));
    assert_ne!(run(Some("5"), None), run(None, Some("9")));
}

#[test]
fn mc_worker_count_does_not_change_output() {
    let base = [
        "mc", "--pairs", "3000000", "--source", "qm-real", "--seed", "3",
    ];
    let one = belltest(&[&base[..], &["--workers", "1"]].concat());
    let many = belltest(&[&base[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn mc_bootstrap_agrees_with_delta_method() {
    let v = json(&[
        "mc",
        "--pairs",
        "1000000",
        "--source",
        "qm-real",
        "--force-F",
        "1",
        "--bootstrap",
    ]);
    let ratio = num(&v, "bootstrap_std_error") / num(&v, "std_error");
    assert!((0.8..1.25).contains(&ratio), "ratio {ratio}");
}

#[test]
fn mc_zero_pairs_names_flag() {
    let out = belltest(&["mc", "--pairs", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--pairs"));
}

#[test]
fn mc_rejects_non_measurable_inequality() {
    let out = belltest(&["mc", "--ineq", "ternary", "--pairs", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_default_finds_symmetric_optimum() {
    let v = json(&["scan"]);
    assert!((num(&v, "best_factor") - 1.5).abs() < 1e-6);
    let seps: Vec<f64> = v["best_separations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (s, target) in seps.iter().zip([60.0, 60.0, 60.0, 0.0]) {
        assert!((s - target).abs() <= 0.5, "{seps:?}");
    }
}

#[test]
fn scan_writes_surface_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let out = belltest(&[
        "scan",
        "--step",
        "45",
        "--rounds",
        "0",
        "--surface",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,a_prime,b_prime,lhs"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let best = num(&v, "best_lhs");
    for line in lines {
        let lhs: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(best <= lhs);
    }
}

#[test]
fn scan_rejects_large_step() {
    let out = belltest(&["scan", "--step", "60"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--step"));
}

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn text(bytes: Vec<u8>) -> String {
    String::from_utf8(bytes).unwrap()
}

#[test]
fn reports_match_golden_files() {
    let cases: [(&[&str], &str); 4] = [
        (&["eval", "--ineq", "ternary"], "eval_ternary.json"),
        (
            &[
                "eval",
                "--ineq",
                "measurable-symmetric",
                "--source",
                "qm-real",
                "--format",
                "csv",
            ],
            "eval_measurable_symmetric_real.csv",
        ),
        (
            &[
                "mc",
                "--pairs",
                "100000",
                "--seed",
                "42",
                "--source",
                "qm-real",
                "--force-F",
                "1",
            ],
            "mc_seed42.json",
        ),
        (
            &["scan", "--step", "45", "--rounds", "0", "--format", "csv"],
            "scan_step45.csv",
        ),
    ];
    for (args, file) in cases {
        assert_eq!(text(belltest(args).stdout), golden(file), "{file}");
    }
}

#[test]
fn counter_dump_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let counters = dir.path().join("counters.csv");
    let manifest = dir.path().join("manifest.txt");
    let out = belltest(&[
        "mc",
        "--pairs",
        "100000",
        "--seed",
        "42",
        "--source",
        "qm-real",
        "--force-F",
        "1",
        "--counters",
        counters.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(counters).unwrap(),
        golden("mc_seed42_counters.csv")
    );
    assert_eq!(
        std::fs::read_to_string(manifest).unwrap(),
        golden("mc_seed42_manifest.txt")
    );
}
