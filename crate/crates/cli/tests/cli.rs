use std::path::PathBuf;
use std::process::{Command, Output};

fn trichow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trichow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn pencil_count_genus_two() {
    let o = trichow(&["pencil-count", "--genus", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "count=12 predicted=12 MATCH");
}

#[test]
fn pencil_count_over_a_prime_field() {
    let o = trichow(&["pencil-count", "--genus", "3", "--seed", "2", "--prime", "1000003", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 15);
    assert_eq!(v["field"]["p"], 1000003);
    assert_eq!(v["matches"], true);
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = trichow(&["curve", "analyze", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flags_and_bad_values_are_usage_errors() {
    assert_eq!(trichow(&["jet-divisors", "--genus", "2", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(trichow(&["grr-push"]).status.code(), Some(2));
    assert_eq!(trichow(&["pencil-count", "--genus", "2", "--seed", "1", "--prime", "7"]).status.code(), Some(2));
    assert_eq!(trichow(&["jet-divisors", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(trichow(&["derive-main-relation", "--genus", "2", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn certificate_round_trip() {
    let o = trichow(&["derive-main-relation", "--genus", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let last = v["steps"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["name"], "sigma_2_1");
    assert_eq!(last["rhs"], "56/3*psi");
    assert!(v["conclusion"].as_str().unwrap().contains("kappa1^2 = 0"));

    let path = scratch("cert_g2.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = trichow(&["verify-certificate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let tampered = String::from_utf8(std::fs::read(&path).unwrap()).unwrap().replace("56/3*psi", "19*psi");
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(trichow(&["verify-certificate", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn symbolic_certificate() {
    let o = trichow(&["derive-main-relation", "--symbolic-b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/3*b^2 - 1/3*b"));
}

#[test]
fn random_curve_then_analyze() {
    let path = scratch("curve_g3.json");
    let o = trichow(&["curve", "random", "--genus", "3", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = trichow(&["curve", "analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("smooth: yes"));
    assert!(text.contains("total ramification: 10 (expected 10)"));
    assert!(text.contains("audit: pass"));
}

#[test]
fn singular_curve_fails_verification() {
    // G = x0^3*y0^2*y1 - x0^2*x1*y1^3 on F_0 contains the fiber x0 = 0 twice.
    let path = scratch("singular.json");
    let curve = r#"{"m": 0, "k": 3, "field": {"type": "Q"},
        "coeffs": [["0/1", "0/1", "0/1", "0/1"], ["0/1", "0/1", "0/1", "1/1"], ["0/1", "0/1", "0/1", "0/1"], ["0/1", "0/1", "-1/1", "0/1"]]}"#;
    std::fs::write(&path, curve).unwrap();
    let o = trichow(&["curve", "analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("smooth: no"));
}

#[test]
fn grr_and_maroni() {
    let o = trichow(&["grr-push", "--genus", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("coefficient of Z: 2\n"));
    assert!(stdout(&o).contains("after substitution: 0\n"));

    let o = trichow(&["maroni-classes", "--genus", "6", "--max-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=2: (4*x0 + y0)*kappa1 (degree 1)\n");
}

#[test]
fn jet_divisor_ranks() {
    let o = trichow(&["jet-divisors", "--genus", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank_delta_delta_n_xi_tr"], 3);
    assert_eq!(v["rank_delta_delta_red_delta_ram"], 3);
    assert_eq!(v["classes"].as_object().unwrap().len(), 4);
}

#[test]
fn selfcheck_small() {
    let o = trichow(&["selfcheck", "--max-genus", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("all checks passed\n"));
}

#[test]
fn deterministic_output() {
    let a = trichow(&["curve", "random", "--genus", "4", "--seed", "9", "--prime", "999983"]);
    let b = trichow(&["curve", "random", "--genus", "4", "--seed", "9", "--prime", "999983"]);
    assert_eq!(a.stdout, b.stdout);
}
