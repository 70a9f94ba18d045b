use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wres-verifier")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn documented_examples() {
    assert_eq!(run(&["coeff", "B0", "--n", "4"]), (0, "-15/8\n".into(), String::new()));
    assert_eq!(run(&["piplus", "xi/(1+xi^2)^2"]).1, "-i/(4*(xi-i)^2)\n");
    assert_eq!(run(&["boundary", "--theorem", "t41", "--n", "4"]).1, "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["coeff", "B0", "--n", "5"]).0, 64);
    assert_eq!(run(&["coeff", "Q7", "--n", "4"]).0, 64);
    assert_eq!(run(&["frobnicate"]).0, 64);
    let (code, _, err) = run(&["piplus", "xi/("]);
    assert_eq!(code, 64);
    assert!(err.contains("at byte 4"), "{err}");
    assert_eq!(run(&["residue", "1/(xi-2)"]).0, 65);
    // a printed-formula mismatch is a finding, not a failure
    assert_eq!(run(&["verify-coeffs", "--n", "4", "--names", "E2", "--nodes", "128"]).0, 0);
}

#[test]
fn p0_rule_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_wres-verifier"))
        .args(["reconcile", "--theorem", "t32", "--n", "4", "--format", "json"])
        .env("WRES_P0_RULE", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["p0_rule"], "0");
}

#[test]
fn verify_coeffs_json_at_four() {
    let (code, out, _) = run(&["verify-coeffs", "--n", "4", "--nodes", "256", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 24);
    assert!(v["findings"].as_array().unwrap().iter().any(|f| f["subject"] == "E2@n=4"));
    assert!(v["findings"].as_array().unwrap().iter().all(|f| !f["anchor"].as_str().unwrap().is_empty()));
}
