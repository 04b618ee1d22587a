use std::fs;
use std::process::{Command, Output};

fn nkpolicy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkpolicy"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows as maps from header name to cell, skipping `#` comments.
fn table(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn f(cell: &str) -> f64 {
    cell.parse().unwrap()
}

#[test]
fn classify_plausible_rule() {
    let o = nkpolicy(&["classify", "--f-pi", "1.5", "--f-x", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["region"], "R4_3_source_complex");
    assert_eq!(rows[0]["determinacy_forward_looking"], "determinate");
    assert!((f(&rows[0]["modulus1"]) - 1.3384f64.sqrt()).abs() < 1e-4);
}

#[test]
fn classify_laissez_faire_is_saddle() {
    let o = nkpolicy(&["classify", "--f-pi", "0", "--f-x", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["region"], "R1_saddle");
    assert_eq!(v["stable_count"], 1);
}

#[test]
fn missing_gain_is_usage_error() {
    let o = nkpolicy(&["classify", "--f-x", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("--f-pi") && err.contains("Usage: nkpolicy classify"),
        "{err}"
    );
    assert!(!err.contains('\x1b'));
}

#[test]
fn malformed_input_exits_two_without_panicking() {
    for args in [
        vec!["classify", "--f-pi", "abc", "--f-x", "0"],
        vec!["classify", "--f-pi", "nan", "--f-x", "0"],
        vec!["--beta", "0", "classify", "--f-pi", "1", "--f-x", "0"],
        vec!["--variant", "other", "classify", "--f-pi", "1", "--f-x", "0"],
        vec!["sweep", "--n-pi", "0"],
        vec!["sweep", "--f-pi-min", "3", "--f-pi-max", "1"],
        vec!["ramsey", "--mu-pi", "0", "--mu-x", "0", "--mu-i", "0"],
        vec!["ramsey", "--mu-pi", "1"],
        vec!["simulate", "--f-pi", "1.5", "--f-x", "0.5"],
        vec![
            "simulate",
            "--regime",
            "taylor-msv",
            "--f-pi",
            "1.5",
            "--f-x",
            "0.5",
            "--horizon",
            "0",
        ],
        vec!["nonsense"],
    ] {
        let o = nkpolicy(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).contains("panicked"), "{args:?}");
    }
}

#[test]
fn tiny_sweep_has_nine_rows_in_order() {
    let o = nkpolicy(&[
        "sweep",
        "--f-pi-min",
        "-1",
        "--f-pi-max",
        "1",
        "--f-x-min",
        "-1",
        "--f-x-max",
        "1",
        "--step",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("f_pi,f_x,region,stable_count,re_lambda1")));
    let rows = table(&text);
    assert_eq!(rows.len(), 9);
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (f(&r["f_pi"]), f(&r["f_x"]))).collect();
    assert_eq!(pts[0], (-1.0, -1.0));
    assert_eq!(pts[1], (-1.0, 0.0));
    assert_eq!(pts[3], (0.0, -1.0));
}

// Sign of the cross product tells which side of an edge a point is on.
fn inside(p: (f64, f64), tri: [(f64, f64); 3]) -> bool {
    let side = |a: (f64, f64), b: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let s = [side(tri[0], tri[1]), side(tri[1], tri[2]), side(tri[2], tri[0])];
    s.iter().all(|&v| v > 1e-6) || s.iter().all(|&v| v < -1e-6)
}

fn on_edge(p: (f64, f64), tri: [(f64, f64); 3]) -> bool {
    !inside(p, tri) && {
        let side = |a: (f64, f64), b: (f64, f64)| {
            let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            ((b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)).abs() / len
        };
        side(tri[0], tri[1]) < 1e-3 || side(tri[1], tri[2]) < 1e-3 || side(tri[2], tri[0]) < 1e-3
    }
}

fn sink_matches_triangle(extra: &[&str], tri: [(f64, f64); 3]) {
    let mut args = vec!["sweep", "--n-pi", "120", "--n-x", "120"];
    args.extend(extra);
    let o = nkpolicy(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 120 * 120);
    let mut sinks = 0;
    for r in &rows {
        let p = (f(&r["f_x"]), f(&r["f_pi"]));
        if on_edge(p, tri) {
            continue;
        }
        let sink = r["stable_count"] == "2";
        sinks += sink as usize;
        assert_eq!(sink, inside(p, tri), "{p:?} {}", r["region"]);
    }
    assert!(sinks > 100);
}

#[test]
fn sweep_sinks_fill_the_vertex_triangle() {
    // (F_x, F_π) of A, B, C at the baseline, from the vertex formulas
    let (g, k, b) = (0.5, 0.1, 0.99);
    let ta = 1.0 + g * k / b + 1.0 / b;
    let fx = |t: f64| (t - ta) / g;
    let fp = |t: f64, d: f64| (d - 1.0 / b - (g / b) * fx(t)) * b / (g * k);
    let tri = [
        (fx(2.0), fp(2.0, 1.0)),
        (fx(-2.0), fp(-2.0, 1.0)),
        (fx(0.0), fp(0.0, -1.0)),
    ];
    sink_matches_triangle(&[], tri);

    // appendix-a variant with both slopes negative: the triangle opens towards positive F_x
    let ta = 1.0 - g * k / b + 1.0 / b;
    let da = 1.0 / b - 2.0 * g * k / (b * b);
    let fx = |t: f64| (t - ta) / -g;
    let fp = |t: f64, d: f64| (d - da - (-g / b) * fx(t)) * b / (g * k);
    let tri = [
        (fx(2.0), fp(2.0, 1.0)),
        (fx(-2.0), fp(-2.0, 1.0)),
        (fx(0.0), fp(0.0, -1.0)),
    ];
    assert!(tri[1].0 > 0.0 && tri[2].0 > 0.0);
    sink_matches_triangle(&["--variant", "appendix-a", "--gamma", "-0.5", "--kappa", "-0.1"], tri);
}

#[test]
fn borders_emit_all_four_curves() {
    let o = nkpolicy(&["borders", "--n-pi", "11", "--n-x", "11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    for kind in ["saddle_node", "flip", "hopf", "discriminant"] {
        assert!(rows.iter().filter(|r| r["border"] == kind).count() >= 11, "{kind}");
    }
}

#[test]
fn tables_reproduce_published_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tables");
    let o = nkpolicy(&["tables", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let t1 = table(&fs::read_to_string(out.join("table1.csv")).unwrap());
    let a = &t1[0];
    assert_eq!(a["vertex"], "A");
    for (col, want) in [
        ("lambda1", 1.0),
        ("lambda2", 1.0),
        ("lambda1_plus_lambda2", 2.0),
        ("lambda1_times_lambda2", 1.0),
    ] {
        assert!((f(&a[col]) - want).abs() < 1e-9, "{col}");
    }
    assert!((f(&a["f_pi"]) - 1.01).abs() < 0.01 && (f(&a["f_x"]) + 0.12).abs() < 0.01);

    let t2 = table(&fs::read_to_string(out.join("table2.csv")).unwrap());
    assert_eq!(t2.len(), 12);
    let r = t2.iter().find(|r| r["minimize_only"] == "Interest rate").unwrap();
    for (col, want) in [
        ("modulus1", 0.748),
        ("modulus2", 0.833),
        ("f_pi", 1.89),
        ("f_x", -0.74),
        ("f_z", -2.46),
        ("f_u", 7.60),
    ] {
        assert!(
            (f(&r[col]) - want).abs() <= (0.01 * want.abs()).max(0.005),
            "{col} {}",
            r[col]
        );
    }

    let text3 = fs::read_to_string(out.join("table3.csv")).unwrap();
    assert!(text3
        .lines()
        .any(|l| l.starts_with("# Interest rate") && l.contains("unavailable")));
    let t3 = table(&text3);
    let r = t3
        .iter()
        .find(|r| r["minimize_only"] == "Output gap interest" && f(&r["mu_x"]) == 1.0)
        .unwrap();
    assert!((f(&r["x0_z0"]) - 0.58).abs() < 0.02 && (f(&r["x0_u0"]) - 2.52).abs() < 0.05);
}

#[test]
fn ramsey_json_record() {
    let o = nkpolicy(&["ramsey", "--mu-pi", "1", "--mu-x", "0", "--mu-i", "1e-7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = &v["gains"];
    assert!((g["f_pi"].as_f64().unwrap() - 21.21).abs() < 0.02);
    assert!((g["f_x"].as_f64().unwrap() + 3.92).abs() < 0.02);
    assert!((g["f_z"].as_f64().unwrap() + 2.01).abs() < 0.02);
    assert!((g["f_u"].as_f64().unwrap() - 39.5).abs() < 0.4);
    assert_eq!(v["p_y"].as_array().unwrap().len(), 2);
    assert!(v["riccati_residual"].as_f64().unwrap() < 1e-8);
    assert!(v["iterations"].as_u64().unwrap() >= 1);
}

#[test]
fn ramsey_table_sweep_csv() {
    let o = nkpolicy(&["ramsey", "--sweep", "table2", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["in_triangle"] == "true" && r["error"].is_empty()));
    assert!((f(&rows[2]["f_pi"]) - 3.03).abs() < 0.02 && (f(&rows[2]["f_x"]) + 2.10).abs() < 0.02);
}

#[test]
fn ramsey_simulation_jumps_output_not_inflation() {
    let o = nkpolicy(&[
        "simulate",
        "--regime",
        "ramsey",
        "--mu-pi",
        "1",
        "--mu-x",
        "0",
        "--mu-i",
        "1e-7",
        "--u0",
        "1",
        "--horizon",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "# seed = none"));
    let rows = table(&text);
    assert_eq!(rows.len(), 11);
    assert!((f(&rows[0]["x"]) + 10.1).abs() < 0.15);
    assert!(f(&rows[0]["pi"]).abs() < 1e-3);
    assert!(f(&rows[0]["phi_x"]).abs() < 1e-10 && f(&rows[0]["phi_pi"]).abs() < 1e-10);
}

#[test]
fn zero_shock_gives_zero_rows() {
    let o = nkpolicy(&[
        "simulate",
        "--regime",
        "taylor-msv",
        "--f-pi",
        "1.5",
        "--f-x",
        "0.5",
        "--horizon",
        "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = table(&stdout(&o));
    assert_eq!(rows.len(), 6);
    for r in rows {
        for col in ["x", "pi", "i", "z", "u"] {
            assert_eq!(f(&r[col]), 0.0);
        }
    }
}

#[test]
fn forward_iteration_of_a_source_is_refused() {
    let o = nkpolicy(&[
        "simulate",
        "--regime",
        "taylor-forward",
        "--f-pi",
        "1.5",
        "--f-x",
        "0.5",
        "--z0",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("taylor-msv"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = nkpolicy(&[
            "simulate",
            "--regime",
            "taylor-msv",
            "--f-pi",
            "1.5",
            "--f-x",
            "0.5",
            "--z0",
            "1",
            "--seed",
            "42",
            "--sd-z",
            "0.1",
            "--sd-u",
            "0.2",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().contains("# seed = 42"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"f_pi": 0.0, "f_x": 0.0, "format": "json"}"#).unwrap();
    let o = nkpolicy(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--f-pi",
        "1.5",
        "--f-x",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["region"], "R4_3_source_complex");

    fs::write(&cfg, r#"{"f_pi": 1.5, "unknown": 1}"#).unwrap();
    let o = nkpolicy(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hopf_demo_reports_crossing() {
    let o = nkpolicy(&["hopf-demo"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rep = &v["report"];
    let s = rep["crossing_fraction"].as_f64().unwrap();
    assert!(s > 0.0 && s < 1.0);
    assert_eq!(rep["crossing_label"], "Border_Hopf");
    assert_eq!(rep["taylor"]["label"], "R4_3_source_complex");
}
