use std::path::PathBuf;
use std::process::{Command, Output};

use ridgekit::bolts::{hexagon_error, Hexagon};
use ridgekit::parse_expression;
use ridgekit::sigmoid::{sigma, SigmoidParams};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ridgekit"));
    c.env_remove("RIDGEKIT_THREADS");
    c
}

fn scratch(name: &str, files: &[(&str, &str)]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ridgekit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (f, body) in files {
        std::fs::write(dir.join(f), body).unwrap();
    }
    dir
}

fn run(args: &[&str], dir: Option<&PathBuf>) -> Output {
    let mut c = bin();
    if let Some(d) = dir {
        c.current_dir(d);
    }
    c.args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn sigmoid_eval_matches_table_value() {
    let out = run(&["sigmoid", "eval", "--d", "2", "--lambda", "0.25", "--x", "6.0"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "ok");
    let s = r["results"]["sigma"].as_f64().unwrap();
    assert!((s - 0.94787).abs() < 1e-5);
    // The report value is the library value.
    assert_eq!(s, sigma(6.0, &SigmoidParams::new(2.0, 0.25).unwrap()).unwrap());
}

#[test]
fn square_has_alternating_certificate() {
    let dir = scratch("square", &[("square.csv", "0,0\n1,0\n1,1\n0,1\n"), ("xy.csv", "1,0\n0,1\n")]);
    let out = run(&["cycles", "check", "--points", "square.csv", "--directions", "xy.csv", "--tau"], Some(&dir));
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "domain_error");
    assert_eq!(r["results"]["has_cycle"], true);
    let cert = &r["results"]["certificates"][0];
    assert_eq!(cert["support"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(cert["weights"], serde_json::json!([1, -1, 1, -1]));
    assert_eq!(r["results"]["tau_trace"]["empty"], false);
}

#[test]
fn cycle_free_set_is_solved_exactly() {
    let dir = scratch(
        "solve",
        &[("pts.csv", "0,0\n1,0\n0,1\n"), ("xy.csv", "1,0\n0,1\n"), ("f.csv", "0\n1/2\n3\n")],
    );
    let out = run(
        &["cycles", "check", "--points", "pts.csv", "--directions", "xy.csv", "--solve", "f.csv"],
        Some(&dir),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["has_cycle"], false);
    let tables = &r["results"]["representation"]["tables"];
    // g₁ pinned to 0 at the anchor's fiber x = 0; g₁(1) = 1/2, g₂(0) = 0, g₂(1) = 3.
    assert_eq!(tables[0], serde_json::json!([[0, 0], [1, "1/2"]]));
    assert_eq!(tables[1], serde_json::json!([[0, 0], [1, 3]]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["cycles", "check", "--bogus"], None).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    let bad = run(&["approx", "uniform", "--expr", "x1*(", "--dirs", "1", "0", "0", "1", "--bounds", "0", "1", "0", "1"], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("grammar"));
    let out = bin().env("RIDGEKIT_THREADS", "zero").args(["sigmoid", "eval", "--d", "2", "--lambda", "0.25", "--x", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_is_recorded() {
    let out = bin().env("RIDGEKIT_THREADS", "3").args(["sigmoid", "eval", "--d", "2", "--lambda", "0.25", "--x", "1"]).output().unwrap();
    assert_eq!(report(&out)["threads"], 3);
}

#[test]
fn identical_runs_are_byte_identical_modulo_timing() {
    let dir = scratch("det", &[("hex.json", r#"{"a":[0,1,2],"b":[0,1,2]}"#)]);
    let args = ["bolts", "hexagon", "--expr", "x1*x2 + sin(x1)", "--geom", "hex.json"];
    let strip = |o: Output| {
        let mut v = report(&o);
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_vec(&v).unwrap()
    };
    assert_eq!(strip(run(&args, Some(&dir))), strip(run(&args, Some(&dir))));
}

#[test]
fn hexagon_report_reproduces_library_value() {
    let dir = scratch("hex", &[("hex.json", r#"{"a":[0,1,2],"b":[0,1,2]}"#)]);
    let out = run(&["bolts", "hexagon", "--expr", "x1*x2", "--geom", "hex.json", "--bounds"], Some(&dir));
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["results"].clone();
    let f = parse_expression("x1*x2", 2).unwrap();
    let lib = hexagon_error(&f, &Hexagon::new([0.0, 1.0, 2.0], [0.0, 1.0, 2.0]).unwrap()).unwrap();
    assert_eq!(r["error"].as_f64().unwrap(), lib.error);
    assert!((lib.error - 0.5).abs() < 1e-12);
    assert!((r["lp_value"].as_f64().unwrap() - 0.5).abs() < 5e-3);
    assert!(r["bounds"]["lower"].as_f64().unwrap() <= r["bounds"]["upper"].as_f64().unwrap() + 1e-9);
}

#[test]
fn class_violation_exits_one() {
    let dir = scratch("class", &[("r.json", r#"{"x":[0,1],"y":[0,1]}"#)]);
    let ok = run(&["bolts", "rect", "--expr", "x2*sin(3.141592653589793*x1)", "--geom", "r.json", "--class", "V", "--c", "0.5"], Some(&dir));
    assert_eq!(ok.status.code(), Some(0));
    let e = report(&ok)["results"]["extremal"]["error"].as_f64().unwrap();
    assert!((e - 0.25).abs() < 1e-9);
    let bad = run(&["bolts", "rect", "--expr", "x1*x2", "--geom", "r.json", "--class", "V", "--c", "0.5"], Some(&dir));
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(report(&bad)["results"]["extremal"]["verdict"]["pass"], false);
}

#[test]
fn uniform_closed_form_and_fallback() {
    let out = run(&["approx", "uniform", "--expr", "x1*x2", "--dirs", "1", "0", "0", "1", "--bounds", "0", "1", "0", "1", "--ds-iters", "3"], None);
    let r = report(&out)["results"].clone();
    assert_eq!(r["method"], "closed_form");
    assert!((r["error"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(r["ds_norms"].as_array().unwrap().len(), 4);
    let fb = run(&["approx", "uniform", "--expr", "x1^2*x2", "--dirs", "1", "0", "0", "1", "--bounds", "-1", "1", "-1", "1", "--grid", "8"], None);
    assert_eq!(fb.status.code(), Some(0));
    assert_eq!(report(&fb)["results"]["method"], "numerical (no closed form)");
}

#[test]
fn l2_worked_example() {
    let dir = scratch("l2", &[("d.csv", "1,0,0\n0,1,0\n0,0,1\n"), ("y.json", "[[0,1],[0,1],[0,1]]")]);
    let out = run(&["approx", "l2", "--expr", "x1*x2*x3", "--dirs-file", "d.csv", "--ybox", "y.json"], Some(&dir));
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["results"].clone();
    assert!((r["diagnostics"]["a"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(r["components"].as_array().unwrap().len(), 3);
}

#[test]
fn smooth_decompose_reports_residual() {
    let dir = scratch("smooth", &[("d.csv", "1,1\n1,0\n0,1\n")]);
    let out = run(
        &["smooth", "decompose", "--expr", "x1^2 + x2^2 + (x1 + x2)^2", "--dirs", "d.csv", "--order", "3", "--box", "-1", "1", "-1", "1", "--crosscheck"],
        Some(&dir),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["results"].clone();
    assert!(r["residual"].as_f64().unwrap() < 1e-6);
    assert!(r["crosscheck"]["max_difference"].as_f64().unwrap() < 1e-5);
    assert_eq!(r["g_tables"].as_array().unwrap().len(), 3);
}

#[test]
fn sigmoid_table_layout() {
    let out = run(&["sigmoid", "table", "--d", "2", "--lambda", "0.25", "--from", "0", "--to", "20", "--step", "0.4"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[1], "0.0,0.37462,4.0,0.95210,8.0,0.97394,12.0,0.97662,16.0,0.96739");
    assert_eq!(lines[10], "3.6,0.95210,7.6,0.96455,11.6,0.97195,15.6,0.96565,19.6,0.97198");
}

#[test]
fn sigmoid_fit_cubic_is_exact() {
    let out = run(&["sigmoid", "fit", "--expr", "x1^3 + x1^2 - 5*x1 + 3", "--interval", "-1", "1", "--eps", "0.01"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out)["results"].clone();
    assert_eq!(r["theta2"].as_f64().unwrap(), -3.0);
    assert!(r["achieved_error"].as_f64().unwrap() <= 1e-8);
    assert!(r["n"].as_str().unwrap().parse::<u64>().is_ok());
}

#[test]
fn csv_flag_switches_output() {
    let out = run(&["--csv", "sigmoid", "eval", "--d", "2", "--lambda", "0.25", "--x", "0", "2"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,sigma\n0,"));
    assert_eq!(text.lines().count(), 3);
}
