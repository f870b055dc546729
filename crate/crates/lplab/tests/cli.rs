use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lplab::csv;
use lplab::CliError;
use lplab_core::experiments::{ExperimentRecord, Value};
use proptest::prelude::*;

fn lplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lplab")).args(args).output().expect("binary runs")
}

fn lplab_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lplab")).args(args).env("LPLAB_THREADS", threads).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn enumerate_e2_rows() {
    let o = lplab(&["enumerate-intervals", "--set", "e2", "--k-min", "2", "--k-max", "4", "--sign", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: enumerate-intervals "));
    assert_eq!(lines.next().unwrap(), "k,l,sign,a,b");
    // k = 2..4 with l = 0..k-1, both signs
    assert_eq!(lines.count(), 2 * (2 + 3 + 4));
    let (_, recs) = csv::parse(&text).unwrap();
    let first = &recs[0];
    assert_eq!(first.get("a"), Some(&Value::Real(-16.0 + 0.5)));
    assert!(!text.contains('\r'));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# comment\nset = e2\nk-min = 2\nk-max = 3\nsign = positive\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = lplab(&["enumerate-intervals", "--config", c]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2 + 2 + 3);
    let o = lplab(&["enumerate-intervals", "--config", c, "--k-max", "4"]);
    assert_eq!(stdout(&o).lines().count(), 2 + 2 + 3 + 4);
    assert!(stdout(&o).lines().next().unwrap().contains("k-max=4"));

    fs::write(&cfg, "set = e2\nk-min = 2\nk-max = 3\ncolour = red\n").unwrap();
    let o = lplab(&["enumerate-intervals", "--config", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn validation_errors_exit_one() {
    let o = lplab(&["enumerate-intervals", "--set", "e2", "--k-min", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("k-max"), "{}", stderr(&o));

    let o = lplab(&["enumerate-intervals", "--set", "e2", "--k-min", "two", "--k-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("k-min") && stderr(&o).contains("integer"));

    let o = lplab(&["a2", "--kind", "power", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(-1, 1)"), "{}", stderr(&o));

    let o = lplab(&["witness", "--n-list", "48"]);
    assert_eq!(o.status.code(), Some(1));

    let o = lplab(&["a2", "--kind", "power", "--alpha", "0.5", "--bogus", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let o = lplab_env(&["a2", "--kind", "constant"], "zero");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("LPLAB_THREADS"));

    let o = lplab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn refinement_failures_map_to_exit_two() {
    let e: CliError = lplab_core::Error::Refinement { err: 1e-3, tol: 1e-4 }.into();
    assert_eq!(e.exit_code(), 2);
    let e: CliError = lplab_core::Error::EmptyResult.into();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn a2_constant_and_step() {
    let o = lplab(&["a2", "--kind", "constant", "--value", "3"]);
    let (_, recs) = csv::parse(&stdout(&o)).unwrap();
    assert!((recs[0].real("characteristic").unwrap() - 1.0).abs() < 1e-12);
    let o = lplab(&["a2", "--kind", "step", "--inside", "2", "--outside", "1"]);
    let (_, recs) = csv::parse(&stdout(&o)).unwrap();
    assert!((recs[0].real("characteristic").unwrap() - 9.0 / 8.0).abs() < 0.01 * 9.0 / 8.0);
}

#[test]
fn square_function_from_spectrum_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("spec.csv");
    // one coefficient at xi = 3/2 on the 1/(2T) = 1/4 lattice
    fs::write(&input, "freq,re,im\n1.5,2.0,0.0\n").unwrap();
    let out = dir.path().join("s.csv");
    let o = lplab(&[
        "square-function", "--input", input.to_str().unwrap(), "--set", "e1", "--k-min", "-2", "--k-max", "3",
        "--half-width", "2", "--samples", "64", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (cfg, recs) = csv::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(cfg.unwrap().starts_with("square-function "));
    assert_eq!(recs.len(), 64);
    // a single mode has constant modulus 2 / (2T)
    for r in &recs {
        assert!((r.real("value").unwrap() - 0.5).abs() < 1e-12);
    }

    fs::write(&input, "freq,re,im\n0.3,1.0,0.0\n").unwrap();
    let o = lplab(&[
        "square-function", "--input", input.to_str().unwrap(), "--set", "e1", "--k-min", "-2", "--k-max", "3",
        "--half-width", "2", "--samples", "64",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = lplab(&["lower-bound-scan", "--set", "e2", "--n-list", "16,32,64", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "N,p,B,R,norm_p,quad_err");
    let o = lplab(&["fit", "--input", out.to_str().unwrap(), "--x", "N", "--y", "B"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, recs) = csv::parse(&stdout(&o)).unwrap();
    assert!(recs[0].real("slope").unwrap() > 0.0);
    assert_eq!(recs[0].get("count"), Some(&Value::Int(3)));

    let o = lplab(&["fit", "--input", out.to_str().unwrap(), "--x", "N", "--y", "missing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing"));
}

fn no_temp_files(dir: &Path) -> bool {
    fs::read_dir(dir).unwrap().all(|e| e.unwrap().file_name().to_string_lossy().ends_with(".csv"))
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["weighted-scan", "--alpha-list", "0,0.5", "--samples", "1024", "--half-width", "4", "--seed", "7"],
        &["witness", "--n-list", "16,32", "--p-list", "1.25,1.5"],
        &["lower-bound-scan", "--set", "et2", "--n-list", "16,32"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("a{i}.csv"));
        let b = dir.path().join(format!("b{i}.csv"));
        let mut first: Vec<&str> = args.to_vec();
        first.extend(["--output", a.to_str().unwrap()]);
        let mut second: Vec<&str> = args.to_vec();
        second.extend(["--output", b.to_str().unwrap()]);
        assert_eq!(lplab_env(&first, "1").status.code(), Some(0));
        assert_eq!(lplab_env(&second, "2").status.code(), Some(0));
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{args:?}");
    }
    assert!(no_temp_files(dir.path()));

    let c = dir.path().join("c.csv");
    let o = lplab(&["weighted-scan", "--alpha-list", "0,0.5", "--samples", "1024", "--half-width", "4", "--seed", "8", "-o", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(fs::read(&c).unwrap(), fs::read(dir.path().join("a0.csv")).unwrap());
}

fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<i64>().prop_map(Value::Int),
        any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(Value::Real),
        "[a-z+-][a-z_]{0,6}".prop_map(Value::Text),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::collection::vec(value(), 3), 1..8)) {
        let keys = ["x", "y", "z"];
        let records: Vec<ExperimentRecord> = rows
            .iter()
            .map(|vals| {
                let mut r = ExperimentRecord::new();
                for (k, v) in keys.iter().zip(vals) {
                    r.push(k, v.clone());
                }
                r
            })
            .collect();
        let text = csv::render("test seed=0", &records).unwrap();
        let (cfg, back) = csv::parse(&text).unwrap();
        prop_assert_eq!(cfg.as_deref(), Some("test seed=0"));
        prop_assert_eq!(back, records);
    }
}
