//! CLI-level integration: argument handling, file schemas, exit codes, and
//! output determinism.

use csrs::cli::run_capturing;

#[test]
fn riley_builtin_table_output() {
    let (code, out) = run_capturing(["csrs", "riley", "--knot", "builtin:5_2"]);
    assert_eq!(code, 0);
    assert!(out.contains("deg_u: 3"));
    assert!(out.contains("Alexander: 2t - 3 + 2t^-1"));
    assert!(out.contains("Delta''(1): 4"));
}

#[test]
fn riley_two_bridge_trefoil() {
    let (code, out) = run_capturing(["csrs", "riley", "--knot", "two_bridge:3/1"]);
    assert_eq!(code, 0);
    // φ = t + t⁻¹ − 1 − u in the s-variable display.
    assert!(out.contains("-u + s^2 - 1 + s^-2"), "{out}");
}

#[test]
fn riley_json_deterministic() {
    let (c1, o1) = run_capturing(["csrs", "riley", "--knot", "builtin:5_2", "--out", "json"]);
    let (c2, o2) = run_capturing(["csrs", "riley", "--knot", "builtin:5_2", "--out", "json"]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(o1, o2, "JSON output must be bit-identical across runs");
    // Every numeric branch point carries an error sibling.
    let v: serde_json::Value = serde_json::from_str(&o1).unwrap();
    for b in v["branch_points_t"].as_array().unwrap() {
        assert!(b.get("error").is_some());
    }
}

#[test]
fn missing_file_is_input_error() {
    let (code, _) = run_capturing(["csrs", "riley", "--knot", "file:does-not-exist.json"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_surgery_is_input_error() {
    let (code, _) = run_capturing([
        "csrs", "reps", "--knot", "builtin:5_2", "--surgery", "0/1",
    ]);
    assert_eq!(code, 2);
    let (code, _) = run_capturing([
        "csrs", "reps", "--knot", "builtin:5_2", "--surgery", "2/3",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn knot_file_round_trip() {
    let doc = r#"{
        "name": "5_2-from-file",
        "relator": [["y",1],["x",-1],["y",-1],["x",1],["y",1],["x",-1],["y",-1],["x",1]],
        "longitude": [["x",1],["y",-1],["x",-1],["y",1],["x",1],["y",-1],["x",-1],["y",1],
                      ["y",1],["x",-1],["y",-1],["x",1],["y",1],["x",-1],["y",-1],["x",1]],
        "fraction": [7, 2]
    }"#;
    let dir = std::env::temp_dir().join("csrs-test-knot");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k52.json");
    std::fs::write(&path, doc).unwrap();
    let spec = format!("file:{}", path.display());
    let (code, out) = run_capturing(["csrs", "riley", "--knot", &spec]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("deg_u: 3"));
    assert!(out.contains("2t - 3 + 2t^-1"));
}

#[test]
fn invalid_knot_file_rejected() {
    let doc = r#"{"name": "bad", "relator": [["x",1]], "longitude": [["x",2]]}"#;
    let dir = std::env::temp_dir().join("csrs-test-knot");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, doc).unwrap();
    let spec = format!("file:{}", path.display());
    let (code, out) = run_capturing(["csrs", "riley", "--knot", &spec]);
    assert_eq!(code, 2);
    assert!(out.contains("invariant"), "{out}");
}

#[test]
fn reps_5_2_table_output() {
    let (code, out) = run_capturing([
        "csrs", "reps", "--knot", "builtin:5_2", "--surgery", "-1/2",
        "--target-error", "1e-18",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("yes |").count() + out.matches("yes\n").count(), 8, "{out}");
    assert!(out.contains("lambda = -4"));
    assert!(out.contains("pass"));
}

#[test]
fn reps_json_has_error_siblings() {
    let (code, out) = run_capturing([
        "csrs", "reps", "--knot", "builtin:5_2", "--surgery", "-1/2",
        "--target-error", "1e-18", "--out", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    for c in classes {
        assert!(c.get("coordinate_error").is_some());
        assert!(c.get("residual_phi").is_some());
    }
    assert_eq!(v["casson"]["pass"], serde_json::Value::Bool(true));
}

#[test]
fn ledger_queries_and_facts_file() {
    let (code, out) = run_capturing([
        "csrs", "ledger", "--query", "r0( 2*S(2,3,5) + (-1)*S(2,3,11) )",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("= 1/264"), "{out}");
    assert!(out.contains("proof trace"), "{out}");

    let (code, out) = run_capturing(["csrs", "ledger", "--query", "member( S3, r=1 )"]);
    assert_eq!(code, 0);
    assert!(out.contains("true"));

    let (code, out) = run_capturing([
        "csrs",
        "ledger",
        "--query",
        "independent{ -S(2,3,5), -S(2,3,11), -S(2,3,17), -S(2,3,23), -S(2,3,29) }",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("linearly independent"));

    // HypothesisUnmet surfaces verbatim with exit 1.
    let (code, out) = run_capturing([
        "csrs", "ledger", "--query", "independent{ -S(2,3,5), -S(2,3,5) }",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("hypothesis unmet"), "{out}");

    // d_inf with a facts file carrying the cobordism assertion.
    let facts = r#"{
        "facts": [
            {"subject": "-S(2,3,5)#S(2,3,11)", "kind": "bounds_negative_definite",
             "provenance": "reversed W_n cobordism"}
        ]
    }"#;
    let dir = std::env::temp_dir().join("csrs-test-facts");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("facts.json");
    std::fs::write(&path, facts).unwrap();
    let fspec = path.display().to_string();
    let (code, out) = run_capturing([
        "csrs", "ledger", "--facts", &fspec, "--query", "dinf(S3, S(2,3,5)#-S(2,3,11))",
    ]);
    assert_eq!(code, 0, "{out}");
    // 1/(4·5·11) = 1/220.
    assert!(out.contains("1/220"), "{out}");

    // Parse errors exit 2.
    let (code, _) = run_capturing(["csrs", "ledger", "--query", "what(is this)"]);
    assert_eq!(code, 2);
}

#[test]
fn cs_trefoil_spectrum_matches_poincare_sphere() {
    // S³_{-1}(K₁) = Σ(2,3,5): mirrored spectrum = {1/120, 49/120}.
    let (code, out) = run_capturing([
        "csrs", "cs", "--knot", "twist:1", "--surgery", "-1/1", "--mirror",
        "--target-error", "1e-14", "--threads", "2", "--out", "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let spectrum = v["spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 2);
    let mut values: Vec<f64> = spectrum
        .iter()
        .map(|r| r["value_mod_1"].as_str().unwrap().parse::<f64>().unwrap())
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((values[0] - 1.0 / 120.0).abs() < 1e-10, "{values:?}");
    assert!((values[1] - 49.0 / 120.0).abs() < 1e-10, "{values:?}");
    for r in spectrum {
        assert!(r.get("error_bound").is_some());
    }
}

#[test]
fn reps_json_deterministic() {
    let args = [
        "csrs", "reps", "--knot", "builtin:5_2", "--surgery", "-1/2",
        "--target-error", "1e-18", "--out", "json",
    ];
    let (c1, o1) = run_capturing(args);
    let (c2, o2) = run_capturing(args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(o1, o2, "reps JSON must be bit-identical across runs");
}

#[test]
fn cs_with_waypoint_hints() {
    // A hinted route for class 0 of the 5₂ table: one waypoint between the
    // bifurcation basepoint and the target, still branch-verified.
    let hints = r#"{
        "paths": [
            {"class_id": 0, "waypoints": [[0.733, 0.680]], "basepoint": "alexander"}
        ]
    }"#;
    let dir = std::env::temp_dir().join("csrs-test-hints");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hints.json");
    std::fs::write(&path, hints).unwrap();
    let hspec = path.display().to_string();
    let (code, out) = run_capturing([
        "csrs", "cs", "--knot", "builtin:5_2", "--surgery", "-1/2", "--mirror",
        "--target-error", "1e-10", "--hints", &hspec, "--out", "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let first = &v["spectrum"][0];
    let val: f64 = first["value_mod_1"].as_str().unwrap().parse().unwrap();
    assert!((val - 0.00176489).abs() < 1e-7, "{val}");
}

#[test]
fn cs_svg_output_renders() {
    let (code, out) = run_capturing([
        "csrs", "cs", "--knot", "twist:1", "--surgery", "-1/1", "--mirror",
        "--target-error", "1e-12", "--out", "svg",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg"));
    assert!(out.contains("polyline"));
    assert!(out.ends_with("</svg>"));
}
