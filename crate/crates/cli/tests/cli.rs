use std::path::Path;
use std::process::{Command, Output};

fn critzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critzeta"))
        .args(args)
        .env_remove("CRITZETA_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

const HEADER: &str = "gamma,beta,re_zeta,im_zeta,log_abs_zeta,residual,env_thm1,env_thm3,ratio_upper,ratio_lower";

#[test]
fn scan_finds_the_first_critical_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = critzeta(&[
        "scan", "--t-lo", "20", "--t-hi", "25", "--sigma-lo", "0.1", "--sigma-hi", "5", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# ") && comment.contains("t_lo=20") && !comment.contains("out"));
    assert_eq!(lines.next().unwrap(), HEADER);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 1);
    let gamma: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    assert!((gamma - 23.298_320).abs() < 1e-5);
}

#[test]
fn scan_rejects_inverted_heights() {
    let o = critzeta(&["scan", "--t-lo", "30", "--t-hi", "20"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_of_an_empty_region_writes_only_the_header() {
    let o = critzeta(&["scan", "--t-lo", "100", "--t-hi", "110", "--sigma-lo", "0.1", "--sigma-hi", "0.45"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == HEADER));
    assert!(data_lines(&text).is_empty());
}

#[test]
fn scan_output_is_identical_across_worker_counts() {
    let args = ["scan", "--t-lo", "16", "--t-hi", "120", "--seed", "7"];
    let one = critzeta(&[&args[..], &["--workers", "1"]].concat());
    let env_many = Command::new(env!("CARGO_BIN_EXE_critzeta"))
        .args(args)
        .env("CRITZETA_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(code(&env_many), 0);
    assert_eq!(one.stdout, env_many.stdout);
    assert!(data_lines(&stdout(&one)).len() > 5);
}

#[test]
fn worker_count_must_be_positive() {
    assert_eq!(code(&critzeta(&["--workers", "0", "params"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_critzeta"))
        .arg("params")
        .env("CRITZETA_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# scan window\nt-lo = 20\nt_hi = 25\nsigma_lo = 0.1\nsigma_hi = 5\n").unwrap();
    let c = conf.to_str().unwrap();
    let from_file = critzeta(&["scan", "--config", c]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(data_lines(&stdout(&from_file)).len(), 1);
    let overridden = critzeta(&["scan", "--config", c, "--t-hi", "21"]);
    assert_eq!(code(&overridden), 0);
    assert!(data_lines(&stdout(&overridden)).is_empty());
    std::fs::write(&conf, "t_lo: 20\n").unwrap();
    assert_eq!(code(&critzeta(&["scan", "--config", c])), 2);
}

#[test]
fn verify_lemma1_passes_at_three_quarters() {
    let o = critzeta(&["verify", "L1", "--sigma", "0.75", "--x-max", "1e6"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    let fitted: f64 = text
        .lines()
        .find(|l| l.starts_with("fitted"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(fitted <= 5.0);
}

#[test]
fn verify_rejects_bad_arguments() {
    assert_eq!(code(&critzeta(&["verify", "L1", "--sigma", "1.2"])), 2);
    assert_eq!(code(&critzeta(&["verify", "L99"])), 2);
    assert_eq!(code(&critzeta(&["verify", "L10", "--orientation", "Q"])), 2);
}

#[test]
fn verify_lemma6_prints_root_and_prediction() {
    let o = critzeta(&["verify", "L6", "--sigma1", "0.75", "--a", "2.5", "--logx", "8"]);
    assert!(matches!(code(&o), 0 | 3));
    let text = stdout(&o);
    let root_line = text.lines().find(|l| l.starts_with("W logx=8 root")).unwrap();
    let cols: Vec<f64> = root_line.split_whitespace().rev().take(2).map(|c| c.parse().unwrap()).collect();
    let predicted = 0.75 + 8f64.powf(-2.5);
    assert!((cols[0] - predicted).abs() < 1e-9);
    assert!(cols[1] > 0.75);
}

#[test]
fn verify_json_output() {
    let o = critzeta(&["verify", "L10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lemma"], "L10");
    assert_eq!(v["pass"], true);
}

#[test]
fn tau_search_hits_are_verified() {
    let o = critzeta(&["tau-search", "--primes-limit", "3", "--delta", "0.1", "--t-lo", "0", "--t-hi", "1e4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tau,h_value,verified");
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert!(cols[1].parse::<f64>().unwrap() > 0.0);
        assert_eq!(cols[2], "true");
    }
}

#[test]
fn tau_search_guards() {
    assert_eq!(code(&critzeta(&["tau-search", "--primes-limit", "100"])), 2);
    let o = critzeta(&["tau-search", "--t-lo", "50", "--t-hi", "50"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "tau,h_value,verified\n");
    assert_eq!(code(&critzeta(&["tau-search", "--t-lo", "50", "--t-hi", "10"])), 2);
}

#[test]
fn params_reports() {
    let o = critzeta(&["params", "--T", "1e6", "--sigma1", "0.75", "--a", "2.1", "--b", "3.2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("feasible = false"));
    assert_eq!(code(&critzeta(&["params", "--a", "2.1", "--b", "3.0"])), 2);
    let big = critzeta(&["params", "--T", "1e10", "--format", "json"]);
    assert_eq!(code(&big), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&big)).unwrap();
    assert_eq!(v["height"], 1e10);
    assert!(v["x"].as_f64().unwrap() > 0.0);
}

fn report(input: &Path, format: &str) -> Output {
    critzeta(&["report", "--input", input.to_str().unwrap(), "--format", format])
}

#[test]
fn report_round_trips_between_formats() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.csv");
    let o = critzeta(&["scan", "--t-lo", "16", "--t-hi", "200", "--out", scan.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let json = report(&scan, "json");
    assert_eq!(code(&json), 0);
    let json_path = dir.path().join("scan.json");
    std::fs::write(&json_path, &json.stdout).unwrap();
    let back = report(&json_path, "csv");
    assert_eq!(code(&back), 0);
    let direct = report(&scan, "csv");
    assert_eq!(data_lines(&stdout(&back)), data_lines(&stdout(&direct)));
    // envelopes are recomputed from the rounded abscissae; the point columns carry over exactly
    let point_cols = |text: &str| -> Vec<String> {
        data_lines(text).iter().map(|l| l.split(',').take(6).collect::<Vec<_>>().join(",")).collect()
    };
    assert_eq!(point_cols(&stdout(&direct)), point_cols(&std::fs::read_to_string(&scan).unwrap()));
    assert!(String::from_utf8_lossy(&direct.stderr).contains("a_fit="));
}

#[test]
fn report_needs_input() {
    assert_eq!(code(&critzeta(&["report"])), 2);
    assert_eq!(code(&critzeta(&["report", "--input", "/nonexistent/scan.csv"])), 2);
}
