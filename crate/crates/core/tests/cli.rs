//! End-to-end tests of the `zetafred` binary: subcommand output shapes,
//! exit codes, and the determinism of the report artifacts.

use std::process::Command;

fn zetafred(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zetafred"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &std::process::Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn models_list_names_the_catalog() {
    let out = zetafred(&["models", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["N1", "N2", "HO"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn detzeta_emits_value_and_routes() {
    let out = zetafred(&["detzeta", "N2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let ld = v["log_det_zeta"].as_f64().unwrap();
    assert!((ld - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-8);
    assert!(v["residual"].as_f64().unwrap() < 1e-7);
    assert!(v["route_heat"].is_number() && v["route_derivative"].is_number());
}

#[test]
fn fredholm_matches_sinh_product() {
    let out = zetafred(&["fredholm", "N2", "--z", "1,0", "--order", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 3.676077910374978).abs() < 1e-9);
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-10);
}

#[test]
fn zeta_reports_poles() {
    let out = zetafred(&["zeta", "N1", "--s", "1,0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "pole");
    assert!((v["residue"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let out = zetafred(&["zeta", "N2", "--s", "2,0"]);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "regular");
    // ζ(2; N2) = ζ_R(4) = π^4/90.
    let want = std::f64::consts::PI.powi(4) / 90.0;
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-9);
}

#[test]
fn expand_with_fit_compares_coefficients() {
    let out = zetafred(&["expand", "N2", "--what", "fredholm", "--fit"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert!(v["predicted"].as_array().unwrap().len() >= 3);
    let rows = v["fitted"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["abs_diff"].as_f64().unwrap() < 1e-3));
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = zetafred(&["verify", "N2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("N2: PASS"));
}

#[test]
fn report_writes_deterministic_artifacts() {
    let dir = std::env::temp_dir().join(format!("zetafred-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv1 = dir.join("r1.csv");
    let json1 = dir.join("r1.json");
    let out = zetafred(&[
        "report",
        "--csv",
        csv1.to_str().unwrap(),
        "--json",
        json1.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("overall: PASS"), "{table}");
    let csv = std::fs::read_to_string(&csv1).unwrap();
    assert!(csv.starts_with("model,check,z_re,z_im,lhs,rhs,residual,status"));
    assert!(csv.lines().count() > 15);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json1).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    // Bit-identical repetition.
    let csv2 = dir.join("r2.csv");
    let out2 = zetafred(&["report", "--csv", csv2.to_str().unwrap()]);
    assert!(out2.status.success());
    assert_eq!(csv, std::fs::read_to_string(&csv2).unwrap());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn extended_precision_flag_is_accepted() {
    let out = zetafred(&["--precision", "extended", "detzeta", "HO"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["log_det_zeta"].as_f64().unwrap() - 0.5 * 2f64.ln()).abs() < 1e-8);
}

#[test]
fn model_files_load_and_validate() {
    let dir = std::env::temp_dir().join(format!("zetafred-cli-models-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // Round-trip a built-in through `models show` into a file and use it.
    let shown = zetafred(&["models", "show", "N2"]);
    assert!(shown.status.success());
    let path = dir.join("n2.json");
    std::fs::write(&path, &shown.stdout).unwrap();
    let ok = zetafred(&["models", "validate", path.to_str().unwrap()]);
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let det = zetafred(&["detzeta", path.to_str().unwrap()]);
    assert!(det.status.success());
    // Invalid model file: rejected with exit 1.
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","eigenvalues":{"kind":"formula:n"},"p":2,
           "heat_terms":[{"re_alpha":-1,"k":1,"re_c":1.0}]}"#,
    )
    .unwrap();
    let rejected = zetafred(&["models", "validate", bad.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&rejected.stderr).contains("error"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn user_model_with_shifted_spectrum_verifies() {
    // λ_n = n + 1: heat trace 1/(e^t - 1) - e^{-t}, det_ζ = √(2π), and a
    // nonzero t² heat coefficient (unlike the catalog), which exercises the
    // z^{-2} column of the constant-term fit.
    let dir = std::env::temp_dir().join(format!("zetafred-cli-n1s-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n1s.json");
    std::fs::write(
        &path,
        r#"{"name":"N1S","eigenvalues":{"kind":"formula:n+1"},"p":2,
 "heat_terms":[{"re_alpha":-1,"k":0,"re_c":1.0},{"re_alpha":0,"k":0,"re_c":-1.5},
               {"re_alpha":1,"k":0,"re_c":1.0833333333333333},{"re_alpha":2,"k":0,"re_c":-0.5},
               {"re_alpha":3,"k":0,"re_c":0.16527777777777777},{"re_alpha":4,"k":0,"re_c":-0.041666666666666664},
               {"re_alpha":5,"k":0,"re_c":0.008366402116402116},{"re_alpha":6,"k":0,"re_c":-0.001388888888888889}],
 "heat_cutoff":6.5}"#,
    )
    .unwrap();
    let det = zetafred(&["detzeta", path.to_str().unwrap()]);
    assert!(det.status.success());
    let v = stdout_json(&det);
    // ζ(s; L) = ζ_R(s) - 1, so -ζ'(0) is the same ½ log 2π as for λ_n = n.
    assert!((v["log_det_zeta"].as_f64().unwrap() - 0.5 * (2.0 * std::f64::consts::PI).ln()).abs() < 1e-8);
    let verify = zetafred(&["verify", path.to_str().unwrap()]);
    assert!(verify.status.success(), "{}", String::from_utf8_lossy(&verify.stdout));
    // A corrupted t² coefficient must be caught by the dual-route gate.
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        std::fs::read_to_string(&path).unwrap().replace("-0.5}", "-0.54}"),
    )
    .unwrap();
    let det = zetafred(&["detzeta", bad.to_str().unwrap()]);
    assert_eq!(det.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&det.stderr).contains("route consistency"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage error → 2 (clap default).
    let out = zetafred(&["not-a-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zetafred(&["fredholm", "N2"]); // missing required flags
    assert_eq!(out.status.code(), Some(2));
    // Numeric/domain failure → 1 with diagnostics on stderr.
    let out = zetafred(&["detzeta", "N1", "--shift", "-5,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    // Unknown model → 1.
    let out = zetafred(&["detzeta", "NOPE"]);
    assert_eq!(out.status.code(), Some(1));
}
