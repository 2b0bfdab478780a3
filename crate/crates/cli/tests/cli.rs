use std::process::{Command, Output};

fn qwasser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwasser")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn distance_examples() {
    let o = qwasser(&["distance", "--rho", "0,0,1", "--omega", "0,0,-1", "--cost", "sym", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["result"]["value"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert_eq!(v["result"]["certificate"]["kind"], "unique-coupling");

    let o = qwasser(&["distance", "--rho", "0,0,0", "--omega", "0,0,0", "--cost", "sym", "--json"]);
    let v = json(&o);
    assert!(v["result"]["value"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["result"]["certificate"]["kind"], "duality-gap");

    let o = qwasser(&["distance", "--rho", "1,0,0", "--omega", "-1,0,0", "--cost", "xz"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value        6.000000000000"));
}

#[test]
fn admm_method_flag() {
    let o = qwasser(&["distance", "--rho", "0.3,0.1,0", "--omega", "0,-0.2,0.4", "--cost", "xz", "--method", "admm", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let admm = json(&o)["result"]["value"].as_f64().unwrap();
    let o = qwasser(&["distance", "--rho", "0.3,0.1,0", "--omega", "0,-0.2,0.4", "--cost", "xz", "--json"]);
    let ipm = json(&o)["result"]["value"].as_f64().unwrap();
    assert!((admm - ipm).abs() < 1e-7);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qwasser(&["distance", "--rho", "1,1,0", "--omega", "0,0,0"]).status.code(), Some(2));
    assert_eq!(qwasser(&["distance", "--rho", "1,0", "--omega", "0,0,0"]).status.code(), Some(2));
    assert_eq!(qwasser(&["distance", "--rho", "0,0,0", "--omega", "0,0,0", "--cost", "zz"]).status.code(), Some(2));
    assert_eq!(qwasser(&["distance", "--rho", "0,0,0", "--omega", "0,0,0", "--cost", "@/nonexistent"]).status.code(), Some(2));
    assert_eq!(qwasser(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qwasser(&["isometry-check", "--map", "{\"variant\":\"nope\"}"]).status.code(), Some(2));
    assert_eq!(qwasser(&["sweep"]).status.code(), Some(2));
}

#[test]
fn self_distance_examples() {
    let o = qwasser(&["self-distance", "--rho", "0,0.5,0", "--cost", "xz", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let want = 4.0 - 2.0 * 3f64.sqrt();
    for key in ["sdp", "purification", "closed_form"] {
        assert!((v[key].as_f64().unwrap() - want).abs() < 1e-6, "{key}");
    }
    let v = json(&qwasser(&["self-distance", "--rho", "0,0,0", "--cost", "xz", "--json"]));
    assert!(v["closed_form"].as_f64().unwrap().abs() < 1e-12);
    let v = json(&qwasser(&["self-distance", "--rho", "0,1,0", "--cost", "xz", "--json"]));
    assert!((v["sdp"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(v["agree"], true);
}

#[test]
fn isometry_check_exit_codes() {
    let o = qwasser(&["isometry-check", "--map", r#"{"variant":"rot-y","t":0.7}"#, "--cost", "xz", "--pairs", "200", "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qwasser(&["isometry-check", "--map", r#"{"variant":"global-conjugation"}"#, "--cost", "sym", "--pairs", "60"]);
    assert_eq!(o.status.code(), Some(0));
    // e^{i(π/8)σ₁}
    let (c, s) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
    let map = format!(r#"{{"variant":"wigner-unitary","u":[[{c},0],[0,{s}],[0,{s}],[{c},0]]}}"#);
    let o = qwasser(&["isometry-check", "--map", &map, "--cost", "xz", "--pairs", "200", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "violated");
    assert!(v["max_deviation"].as_f64().unwrap() >= 0.01);
    assert!(String::from_utf8_lossy(&o.stderr).contains("worst pair"));
}

#[test]
fn isometry_check_reads_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    std::fs::write(
        &path,
        r#"{"variant":"composition","maps":[{"variant":"rot-y","t":0.3},{"variant":"pure-sign-map","domain":"pure-nonreal","epsilon":{"kind":"hashed","seed":5}}]}"#,
    )
    .unwrap();
    let o = qwasser(&["isometry-check", "--map", path.to_str().unwrap(), "--cost", "xz", "--pairs", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = qwasser(&["sweep", "--figure", "fig1", "--out", p.to_str().unwrap(), "--json", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let s = json(&o);
        assert_eq!(s["strict_on_interior"], true);
        assert_eq!(s["boundary_nodes"], 4);
    }
    let (ca, cb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert!(text.starts_with("x,y,z,d_plus,d_minus,margin,purity\n"));
    assert_eq!(text.lines().count(), 626);
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        r#"{"figure":"custom","y-value":0.5,"grid-min":-0.4,"grid-max":0.4,"grid-points":4,"section":"full-2d","output-path":"/nonexistent/dir/x.csv"}"#,
    )
    .unwrap();
    // The configured path is unwritable.
    assert_eq!(qwasser(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let o = qwasser(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 17);

    std::fs::write(&cfg, r#"{"figure":"custom","y-value":0.9,"grid-min":-0.5,"grid-max":0.5,"grid-points":4,"section":"full-2d"}"#).unwrap();
    assert_eq!(qwasser(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cost_info_output() {
    let v = json(&qwasser(&["cost-info", "--cost", "xz", "--json"]));
    let ev: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    for (g, w) in ev.iter().zip([0.0, 4.0, 4.0, 8.0]) {
        assert!((g - w).abs() < 1e-12);
    }
    let o = qwasser(&["cost-info", "--cost", "sym"]);
    assert!(stdout(&o).contains("eigenvalues 0.000000000000 8.000000000000 8.000000000000 8.000000000000"));

    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    std::fs::write(&gens, "[[[0,0],[1,0],[1,0],[0,0]], [[1,0],[0,0],[0,0],[-1,0]]]").unwrap();
    let arg = format!("@{}", gens.display());
    let v = json(&qwasser(&["cost-info", "--cost", &arg, "--json"]));
    assert_eq!(v["name"], "custom");
    let ev: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    for (g, w) in ev.iter().zip([0.0, 4.0, 4.0, 8.0]) {
        assert!((g - w).abs() < 1e-12);
    }
}
