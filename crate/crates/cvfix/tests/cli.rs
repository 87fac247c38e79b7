use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cvfix::formats::grid_from_csv;
use cvfix_core::ComplexScalar;
use serde_json::Value;

fn cvfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn iterate_halfshift_finds_i() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = cvfix(&[
        "iterate",
        "--map",
        "halfshift",
        "--start",
        "0+0i",
        "--metric",
        "d1",
        "--tol",
        "1e-10",
        "--output",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let p: ComplexScalar = r["point"].as_str().unwrap().parse().unwrap();
    assert!((p - ComplexScalar::I).modulus() <= 1e-9);
    assert_eq!(r["converged"], Value::Bool(true));

    let csv = fs::read_to_string(trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,delta,point"));
    assert_eq!(lines.next(), Some("1,5.0000000000000000e-1,0+0.5i"));
    assert_eq!(
        csv.lines().count(),
        1 + r["iterations"].as_u64().unwrap() as usize
    );
}

#[test]
fn kernel_mass_example() {
    let out = cvfix(&[
        "kernel-mass",
        "--t",
        "0.5",
        "--a",
        "1",
        "--eta",
        "2",
        "--grid",
        "2001",
    ]);
    assert_eq!(code(&out), 0);
    assert!((report(&out)["value"].as_f64().unwrap() - 0.5).abs() <= 1e-6);
}

#[test]
fn expansion_fails_contraction_check() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"variant": "plain", "xi": "xi1:lambda=0.6", "alpha": "one", "metric": "d1", "map": "double"}"#,
    );
    let out = cvfix(&["check-contraction", "--config", &bad]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["passed"], Value::Bool(false));
    assert_eq!(r["witness"]["clause"], "(ii) 0 ≾ xi(alpha d(Sx,Ty), d)");
    assert_eq!(r["witness"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn contraction_variants_pass_on_halfshift() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"variant": "m_type", "lambda": 0.9, "xi": "xi1:lambda=0.6", "alpha": "one", "metric": "d1", "samples": 2000}"#,
    );
    assert_eq!(code(&cvfix(&["check-contraction", "--config", &m])), 0);
    assert_eq!(
        code(&cvfix(&[
            "check-contraction",
            "--variant",
            "n_type",
            "--samples",
            "2000"
        ])),
        0
    );
    assert_eq!(
        code(&cvfix(&[
            "check-contraction",
            "--config",
            &m,
            "--lambda",
            "0.5"
        ])),
        1
    );
}

#[test]
fn exit_codes_for_checks() {
    assert_eq!(
        code(&cvfix(&[
            "check-metric",
            "--metric",
            "d3",
            "--samples",
            "500"
        ])),
        0
    );
    assert_eq!(
        code(&cvfix(&[
            "check-metric",
            "--metric",
            "d2:k=2",
            "--samples",
            "500"
        ])),
        1
    );
    assert_eq!(
        code(&cvfix(&[
            "check-metric",
            "--metric",
            "periodic-sup:a=1",
            "--samples",
            "200"
        ])),
        0
    );
    assert_eq!(
        code(&cvfix(&[
            "check-simulation",
            "--xi",
            "xi3",
            "--samples",
            "200",
            "--tail",
            "50"
        ])),
        0
    );
    let out = cvfix(&[
        "check-simulation",
        "--xi",
        "difference",
        "--samples",
        "100",
        "--tail",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        report(&out)["witness"]["clause"],
        "(iii) limsup xi(|t_n|,|s_n|) ⪇ 0"
    );
}

#[test]
fn exit_codes_for_solvers() {
    assert_eq!(code(&cvfix(&["solve-integral", "--grid", "201"])), 0);
    assert_eq!(code(&cvfix(&["solve-periodic", "--grid", "201"])), 0);
    assert_eq!(
        code(&cvfix(&[
            "solve-periodic",
            "--grid",
            "201",
            "--max-iter",
            "2"
        ])),
        1
    );
    let out = cvfix(&["iterate", "--map", "doubleplus1", "--start", "1+0i"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["diverged"], Value::Bool(true));
    assert_eq!(
        code(&cvfix(&[
            "iterate",
            "--map",
            "identity",
            "--map-t",
            "plusone",
            "--max-iter",
            "50"
        ])),
        1
    );
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let cases: [(&[&str], &str); 8] = [
        (&["iterate", "--start", "1+2j"], "--start"),
        (&["check-simulation", "--xi", "xi1:lambda=1.5"], "--xi"),
        (
            &["check-contraction", "--variant", "m_type", "--lambda", "0"],
            "--lambda",
        ),
        (&["solve-periodic", "--eta", "0.5"], "--eta"),
        (&["solve-periodic", "--grid", "2"], "--grid"),
        (&["solve-integral", "--grid", "1"], "--grid"),
        (&["check-metric", "--metric", "d9"], "--metric"),
        (
            &[
                "iterate",
                "--map",
                "halfshift",
                "--metric",
                "periodic-sup:a=1",
            ],
            "--metric",
        ),
    ];
    for (argv, flag) in cases {
        let out = cvfix(argv);
        assert_eq!(code(&out), 2, "{argv:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{argv:?}: {err}");
        assert!(err.contains(flag), "{argv:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_verbs_flags_and_fields_are_rejected() {
    assert_eq!(code(&cvfix(&["solve-everything"])), 2);
    assert_eq!(code(&cvfix(&["iterate", "--speed", "3"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"t": 0.5, "colour": "blue"}"#);
    assert_eq!(code(&cvfix(&["kernel-mass", "--config", &cfg])), 2);
    assert_eq!(
        code(&cvfix(&["kernel-mass", "--config", "/nonexistent/c.json"])),
        2
    );
}

#[test]
fn periodic_config_from_file_and_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"problem": "periodic", "f": "example32", "eta": 1.5, "a": 1.0, "n": 1, "grid": 401, "tol": 1e-10}"#,
    );
    let csv = dir.path().join("u.csv");
    let out = cvfix(&[
        "solve-periodic",
        "--config",
        &cfg,
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["certified"], Value::Bool(true));
    let u = grid_from_csv(&fs::read_to_string(csv).unwrap()).unwrap();
    assert_eq!(u.shape().nodes, 401);
    for (i, t) in u.shape().nodes().enumerate() {
        let exact = t - 1.0 + (-t).exp() / (1.0 - (-1.0f64).exp());
        assert!((u.value(i)[0] - exact).abs() <= 1e-5);
    }
}

#[test]
fn echoed_config_reproduces_report_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 7] = [
        &[
            "check-metric",
            "--metric",
            "d2:k=0.3",
            "--samples",
            "300",
            "--seed",
            "9",
        ],
        &[
            "check-simulation",
            "--xi",
            "xi2:psi=scale(0.5),phi=identity",
            "--samples",
            "100",
            "--tail",
            "20",
        ],
        &[
            "check-contraction",
            "--map",
            "double",
            "--samples",
            "100",
            "--seed",
            "3",
        ],
        &[
            "iterate", "--map", "third", "--start", "-4+2.5i", "--metric", "d3",
        ],
        &["solve-integral", "--grid", "101"],
        &[
            "solve-periodic",
            "--f",
            "example33",
            "--a",
            "2",
            "--eta",
            "2.5",
            "--grid",
            "101",
        ],
        &["kernel-mass", "--t", "0.3", "--eta", "5"],
    ];
    for (k, argv) in runs.iter().enumerate() {
        let first = cvfix(argv);
        let r = report(&first);
        let cfg = write(dir.path(), &format!("{k}.json"), &r["config"].to_string());
        let again = cvfix(&[argv[0], "--config", &cfg]);
        assert_eq!(first.stdout, again.stdout, "{argv:?}");
        assert_eq!(code(&first), code(&again));
        assert_eq!(r["schema"], 1);
        assert_eq!(r["command"], argv[0]);
    }
}
