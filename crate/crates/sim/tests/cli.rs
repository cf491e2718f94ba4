use std::process::Command;

fn stirap(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stirap")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

#[test]
fn simulate_prints_headline_numbers() {
    let (code, out, _) = stirap(&["simulate", "--initial", "uniform", "--kappa", "0.1", "--gamma", "0.1"]);
    assert_eq!(code, 0);
    assert!(out.contains("p_suc=0.8455 F=0.9912"), "{out}");
}

#[test]
fn gate_prints_truth_table_signs() {
    let (code, out, _) = stirap(&["gate", "--target", "01", "--mode", "ideal", "--kappa", "0", "--gamma", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("signs (+,-,+,+)"), "{out}");
    let (_, out, _) = stirap(&["gate", "--target", "00", "--mode", "ideal", "--kappa", "0", "--gamma", "0"]);
    assert!(out.contains("signs (-,+,+,+)"), "{out}");
}

#[test]
fn grover_reports_target() {
    let (code, out, _) = stirap(&["grover", "--target", "11", "--mode", "ideal"]);
    assert_eq!(code, 0);
    assert!(out.contains("found 11"), "{out}");
}

#[test]
fn darkstates_lists_components() {
    let (code, out, _) = stirap(&["darkstates", "--omega01", "0.1", "--omegasigma2", "-0.05"]);
    assert_eq!(code, 0);
    assert!(out.contains("D00") && out.contains("|1,s,0⟩"), "{out}");
}

#[test]
fn verify_passes_on_a_clean_build() {
    let (code, out, _) = stirap(&["verify"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(stirap(&["bogus"]).0, 1);
    assert_eq!(stirap(&["gate", "--target", "22"]).0, 1);
    assert_eq!(stirap(&["grover", "--target", "01", "--mode", "fast"]).0, 1);
    assert_eq!(stirap(&["simulate", "--initial", "nonsense"]).0, 1);
    assert_eq!(stirap(&["simulate", "--kappa", "-1"]).0, 1);
    assert_eq!(stirap(&["sweep", "--config", "/nonexistent/sweep.json"]).0, 1);
    assert_eq!(stirap(&["--help"]).0, 0);
}

#[test]
fn numerical_failure_exits_with_two() {
    // A step of 5/g is far outside RK4's stability region for Ω̃ = 2g.
    let (code, _, err) = stirap(&["simulate", "--step", "5", "--omega-max", "3", "--tau", "40"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn simulate_writes_trajectory_and_result() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let json = dir.path().join("result.json");
    let (code, _, _) =
        stirap(&["simulate", "--initial", "010", "--out", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("t,p_suc,\"pop_0,1,0\",\"pop_2,1,0\""), "{header}");
    assert_eq!(text.lines().count(), 1 + 1321);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(doc["p_suc"].as_f64().unwrap() < 1.0);
    assert_eq!(doc["amplitudes"].as_array().unwrap().len(), 10);
    assert_eq!(doc["amplitudes"][0]["state"], "0,1,0");
    assert!(doc["diagnostics"]["max_excited_pop"].as_f64().is_some());
}

#[test]
fn sweep_writes_csv_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        r#"{"kappa_grid":{"min":0,"max":0.2,"points":3},"gamma_grid":{"min":0,"max":0.1,"points":2},"initial":"000"}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("table{workers}.csv"));
        let (code, _, err) =
            stirap(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--workers", workers]);
        assert_eq!(code, 0, "{err}");
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().next(), Some("kappa_over_g,gamma_over_g,p_suc,fidelity"));
    assert_eq!(text.lines().nth(1), Some("0,0,1,1"));
    assert_eq!(text.lines().count(), 7);
}
