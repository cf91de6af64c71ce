use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_affine-elastica"));
    c.env_remove("AFFINE_ELASTICA_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_prints_tags() {
    for (args, tag) in [
        (vec!["--g2", "0", "--g3", "-1"], "F"),
        (vec!["--g2", "0", "--g3", "0"], "G"),
        (
            vec!["--q", "1", "--Q", "3.940854279", "--branch", "closed"],
            "A1",
        ),
        (
            vec!["--g2", "0.75", "--g3", "-0.125", "--branch", "closed"],
            "Dc",
        ),
    ] {
        let o = run(&[&["classify"], &args[..]].concat());
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["tag"], tag, "{args:?}");
    }
}

#[test]
fn classify_rejects_bad_input() {
    let o = run(&["classify", "--g2", "NaN", "--g3", "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("InvalidInput"));
    let o = run(&["classify", "--g2", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn table_lists_published_rows_first() {
    let o = run(&["table", "5:7"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6, "{out}");
    assert!(lines[1].contains("3.940854279"), "{out}");
    assert!(lines[1].contains("1.5407000575i"), "{out}");
    assert!(lines[4].contains("1.244192459"), "{out}");
    assert!(lines[5].trim_start().starts_with("5    7"), "{out}");
    assert_eq!(code(&run(&["table", "5-7"])), 2);
}

#[test]
fn synthesized_case_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let o = run(&["synth", "--case", "G", "--csv", path_str(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", path_str(&csv), "--suite", "el"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&o);
    assert_eq!(r["pass"], true);
    assert_eq!(r["closed"], false);
}

#[test]
fn synth_defaults_to_csv_on_stdout() {
    let o = run(&["synth", "--case", "B2", "--samples", "200"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 201);
}

#[test]
fn synth_rejects_mismatched_case() {
    let o = run(&["synth", "--case", "A1", "--g2", "0", "--g3", "-1"]);
    assert_eq!(code(&o), 2);
    let o = run(&["synth", "--case", "Z9"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unsolvable_closure_exits_3() {
    let o = run(&["synth", "--closure", "1", "100"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotBracketed"));
}

fn write_polar(path: &Path, n: usize, f: impl Fn(f64) -> (f64, f64)) {
    let mut s = String::from("s,x,y\n");
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let (x, y) = f(t);
        writeln!(s, "{t},{x},{y}").unwrap();
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn hypotrochoid_is_not_critical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    write_polar(&csv, 1024, |t| {
        (
            t.cos() + 0.2 * (2.0 * t).cos(),
            t.sin() - 0.2 * (2.0 * t).sin(),
        )
    });
    let o = run(&["verify", path_str(&csv)]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let r = json(&o);
    assert_eq!(r["reparametrized"], true);
    assert_eq!(r["closed"], true);
}

#[test]
fn ellipse_passes_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e.csv");
    write_polar(&csv, 600, |t| (2.0 * t.cos(), 0.5 * t.sin()));
    let o = run(&["verify", path_str(&csv), "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&o);
    for s in ["el", "sqrt", "closure", "fullaffine"] {
        assert_eq!(r["suites"][s]["pass"], true, "{s}");
    }
}

#[test]
fn closure_svg_has_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let o = run(&[
        "synth",
        "--closure",
        "3",
        "4",
        "--euclidean-display",
        "--svg",
        path_str(&svg),
        "--mark",
        "100",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["display_normalized"], true);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(&format!(
        "<!-- affine-elastica {} -->",
        env!("CARGO_PKG_VERSION")
    )));
    assert!(text.contains("stroke-dasharray"));
    assert!(text.contains("class=\"parabola\" points"));
    assert!(text.contains("class=\"conic\" points"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["synth", "--case", "C3", "--samples", "300"]);
    let b = run(&["synth", "--case", "C3", "--samples", "300"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["scan-closure", "2", "10", "16"]);
    let b = run(&["scan-closure", "2", "10", "16"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_crosses_four_thirds_near_table_value() {
    let o = run(&["scan-closure", "3.8", "4.1", "31"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<(f64, f64)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    assert_eq!(rows.len(), 31);
    let target = 4.0 / 3.0;
    let w = rows
        .windows(2)
        .find(|w| (w[0].1 - target) * (w[1].1 - target) <= 0.0)
        .expect("crossing");
    assert!(w[0].0 <= 3.9409 && 3.9409 <= w[1].0, "{w:?}");
    assert_eq!(code(&run(&["scan-closure", "0.5", "2", "4"])), 2);
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.cfg");
    std::fs::write(&cfg, "tolerance = 1e-3\n").unwrap();
    let o = run(&[
        "--config",
        path_str(&cfg),
        "classify",
        "--g2",
        "0",
        "--g3",
        "0",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
}

#[test]
fn tolerance_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    assert_eq!(
        code(&run(&["synth", "--case", "G", "--csv", path_str(&csv)])),
        0
    );
    let cfg = dir.path().join("job.cfg");
    std::fs::write(&cfg, "tol = 1e-3 # loose\n").unwrap();

    let tol = |o: &Output| json(o)["tolerance"].as_f64().unwrap();
    let o = run(&["verify", path_str(&csv), "--config", path_str(&cfg)]);
    assert_eq!(tol(&o), 1e-3);
    let o = bin()
        .args(["verify", path_str(&csv), "--config", path_str(&cfg)])
        .env("AFFINE_ELASTICA_TOL", "1e-4")
        .output()
        .unwrap();
    assert_eq!(tol(&o), 1e-4);
    let o = bin()
        .args(["verify", path_str(&csv), "--tol", "1e-20"])
        .env("AFFINE_ELASTICA_TOL", "1e-4")
        .output()
        .unwrap();
    assert_eq!(tol(&o), 1e-20);
    assert_eq!(code(&o), 1, "an impossible tolerance fails");

    let o = bin()
        .args(["verify", path_str(&csv)])
        .env("AFFINE_ELASTICA_TOL", "-3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn self_check_reports_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c34.csv");
    let o = run(&[
        "synth",
        "--closure",
        "3",
        "4",
        "--self-check",
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(code(&o), 0);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("\"el\"") && err.contains("\"closure\""),
        "{err}"
    );

    let o = run(&["--config", "/nonexistent/job.cfg", "synth", "--case", "A1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn length_constrained_curves() {
    for c0 in ["w2", "0"] {
        let o = run(&[
            "synth",
            "--length-constrained",
            "--A",
            "1",
            "--g3",
            "-0.15",
            "--c0",
            c0,
            "--samples",
            "801",
            "--self-check",
        ]);
        assert_eq!(code(&o), 0, "{c0}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unreadable_csv_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "s,x,y\n0,1\n").unwrap();
    assert_eq!(code(&run(&["verify", path_str(&csv)])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent.csv"])), 2);
}
