use std::process::Command as Proc;

use qlss::linalg::basis;
use qlss::{random_instance, CMat, LinearSystemInstance};
use qlss_cli::commands::{success_curves, success_svg};
use qlss_cli::plot::{emit_svg, PlotSpec, Series};
use qlss_cli::{instance_from_json, instance_to_json, load_instance, run, store_instance, Command, RunConfig};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_qlss"))
}

/// Checks that every opened tag is closed in order.
fn well_formed(xml: &str) -> bool {
    let mut stack: Vec<String> = vec![];
    let mut rest = xml;
    while let Some(i) = rest.find('<') {
        let j = match rest[i..].find('>') {
            Some(j) => i + j,
            None => return false,
        };
        let tag = &rest[i + 1..j];
        rest = &rest[j + 1..];
        if tag.starts_with('?') || tag.ends_with('/') {
            continue;
        }
        let name = tag.trim_start_matches('/').split_whitespace().next().unwrap_or("").to_string();
        if tag.starts_with('/') {
            if stack.pop().as_deref() != Some(name.as_str()) {
                return false;
            }
        } else {
            stack.push(name);
        }
    }
    stack.is_empty()
}

#[test]
fn instance_round_trip_is_bit_exact() {
    let id = LinearSystemInstance::new(CMat::identity(4, 4), basis(4, 2), 2.0).unwrap();
    for inst in [id, random_instance(6, 30.0, None, 11).unwrap()] {
        let text = instance_to_json(&inst);
        let back = instance_from_json(&text).unwrap();
        assert_eq!(back.a(), inst.a());
        assert_eq!(back.b(), inst.b());
        assert_eq!(back.kappa().to_bits(), inst.kappa().to_bits());
        assert_eq!(instance_to_json(&back), text);
    }
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.qlsi");
    let inst = random_instance(3, 5.0, None, 2).unwrap();
    store_instance(&inst, &p).unwrap();
    assert_eq!(load_instance(&p).unwrap().a(), inst.a());
}

#[test]
fn malformed_pair_names_the_field() {
    let inst = random_instance(2, 4.0, None, 1).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&instance_to_json(&inst)).unwrap();
    doc["a"][3] = serde_json::json!([1.0]);
    let e = instance_from_json(&doc.to_string()).unwrap_err();
    assert_eq!(e.code(), "parse_error");
    assert!(e.to_string().contains("a[3]"), "{e}");

    let e = instance_from_json("{\"version\": 1,\n \"rows\": }").unwrap_err();
    assert!(e.to_string().contains("line 2"), "{e}");
}

#[test]
fn version_mismatch_is_explicit() {
    let inst = random_instance(2, 4.0, None, 1).unwrap();
    let text = instance_to_json(&inst).replacen("\"version\": 1", "\"version\": 7", 1);
    let e = instance_from_json(&text).unwrap_err();
    assert_eq!(e.code(), "version_error");
}

#[test]
fn config_rejects_unknown_keys() {
    assert!(RunConfig::from_json(r#"{"seed": 3, "params": {"kappa": 8}}"#).is_ok());
    let e = RunConfig::from_json(r#"{"seed": 3, "sed": 4}"#).unwrap_err();
    assert_eq!(e.code(), "config_error");
    assert!(RunConfig::from_json(r#"{"params": {"kapa": 8}}"#).is_err());
    let cfg = RunConfig::from_json(r#"{"command": "solve"}"#).unwrap();
    assert_eq!(run(Command::BenchBounds, &cfg).unwrap_err().code(), "config_error");
}

#[test]
fn same_seed_gives_identical_csv() {
    let cfg = RunConfig::from_json(r#"{"seed": 9, "trials": 64, "params": {"solver": "random-t"}}"#).unwrap();
    let a = run(Command::Solve, &cfg).unwrap();
    let b = run(Command::Solve, &cfg).unwrap();
    assert_eq!(a.primary(), b.primary());
    assert!(a.primary().starts_with("method,kappa,eps,bound,measured_mean,ci_low,ci_high\n"));

    let out = |threads: &str| {
        bin()
            .args(["norm-est", "--method", "binary", "--trials", "20", "--seed", "4"])
            .env("QLSS_THREADS", threads)
            .output()
            .unwrap()
    };
    let (x, y) = (out("1"), out("3"));
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn svg_rejects_empty_series_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.svg");
    let spec = PlotSpec { title: "t".into(), x_label: "x".into(), y_label: "y".into(), log_x: false };
    let e = emit_svg(&spec, &[Series { name: "s".into(), points: vec![] }], &p).unwrap_err();
    assert_eq!(e.code(), "empty_series");
    assert!(!p.exists());

    let two = [Series { name: "a<b".into(), points: vec![(0.0, 0.0), (1.0, 1.0)] }];
    emit_svg(&spec, &two, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(well_formed(&text));
    assert!(text.contains("a&lt;b"));
}

#[test]
fn success_curves_peak_at_true_norm() {
    let rows = success_curves(0.1, 10.0, 201);
    let mid = rows[100];
    assert!((mid.0 - 1.0).abs() < 1e-12);
    assert!((mid.1 - 1.0).abs() < 1e-12);
    assert!((mid.2 - 0.5).abs() < 1e-12);
    assert!(rows.iter().all(|r| r.1 <= mid.1 + 1e-15));
    let svg = success_svg(&rows).unwrap();
    assert!(well_formed(&svg));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg, success_svg(&rows).unwrap());
}

#[test]
fn sweep_with_instance_adds_simulated_columns() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("i.qlsi");
    store_instance(&random_instance(4, 8.0, None, 5).unwrap(), &p).unwrap();
    let cfg = RunConfig::from_json(&format!(
        r#"{{"instance": {{"file": {:?}}}, "params": {{"points": 9, "ratio_min": 0.5, "ratio_max": 2.0, "eta": 0.001}}}}"#,
        p.to_str().unwrap()
    ))
    .unwrap();
    let out = run(Command::SweepCurves, &cfg).unwrap();
    let csv = out.get("success_curves.csv").unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "ratio,reflection,projection,reflection_sim,projection_sim");
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[3]).abs() < 1e-2, "{l}");
        assert!((v[2] - v[4]).abs() < 1e-2, "{l}");
    }
}

#[test]
fn verify_circuits_prints_six_passes() {
    let o = bin().args(["verify-circuits", "--seed", "2"]).output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(",PASS")).count(), 6);
    for l in text.lines().skip(1) {
        let err: f64 = l.split(',').nth(3).unwrap().parse().unwrap();
        assert!(err <= 1e-10);
    }
}

#[test]
fn bench_bounds_reports_adiabatic_row() {
    let o = bin().args(["bench-bounds", "--kappa", "1e5", "--eps", "1e-10"]).output().unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("augmented KR + adiabatic,") && last.ends_with(",80"), "{last}");
}

#[test]
fn errors_are_json_on_stderr() {
    let cases: [(&[&str], &str); 4] = [
        (&["bench-bounds", "--kappa", "2"], "domain_error"),
        (&["solve", "--instance", "/nonexistent/x.qlsi"], "io_error"),
        (&["norm-est", "--method", "random-t"], "config_error"),
        (&["solve", "--frobnicate"], "usage_error"),
    ];
    for (args, code) in cases {
        let o = bin().args(args).output().unwrap();
        assert!(!o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(v["error"], code, "{args:?}");
        assert!(v["message"].is_string());
    }
    let o = bin().args(["solve"]).env("QLSS_THREADS", "zero").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "config_error");
}

#[test]
fn hard_instance_files_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["hard-instance", "--kappa", "3", "--eps", "0.25", "--n", "8", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let a = load_instance(&dir.path().join("hard_i.qlsi")).unwrap();
    let b = load_instance(&dir.path().join("hard_ii.qlsi")).unwrap();
    let r = a.x_norm().powi(2) / b.x_norm().powi(2);
    assert!(r.max(1.0 / r) >= qlss::instance::hard_instance_ratio_bound(0.25));
}
