use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secondary"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV body as header + rows of strings.
fn table(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn f(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn catalog_lists_eleven_entries() {
    let o = run(&["catalog"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    assert_eq!(rows.len(), 11);
    let (n, red) = (col(&h, "name"), col(&h, "reducible"));
    let find = |name: &str| rows.iter().find(|r| r[n] == name).unwrap()[red].clone();
    assert_eq!(find("lebesgue01"), "true");
    assert_eq!(find("chebyshev1"), "false");
    assert_eq!(find("jacobi_half"), "false");
}

#[test]
fn catalog_json_and_unknown_name() {
    let o = run(&["catalog", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 11);
    assert_eq!(arr[0]["name"], "lebesgue01");
    assert_eq!(arr[0]["interval"], "[0, 1]");

    let o = run(&["catalog", "--name", "nosuch"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nosuch"));

    let o = run(&["catalog", "--name", "power_a(-0.4)", "--json"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn reducer_vanishes_at_the_midpoint() {
    let o = run(&["reducer", "--density", "lebesgue01", "--grid", "3"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    assert_eq!(h, ["x", "phi", "mu", "psi"]);
    let mid = rows.iter().find(|r| f(&r[0]) == 0.5).expect("x = 0.5 row");
    assert_eq!(f(&mid[1]), 0.0);
    // μ(1/2) = 1/π², ψ(1/2) = 0
    assert!((f(&mid[2]) - 1.0 / (std::f64::consts::PI.powi(2))).abs() < 1e-15);
    assert!(f(&mid[3]).abs() < 1e-15);
}

#[test]
fn reducer_compare_on_chebyshev2() {
    let o = run(&["reducer", "--density", "chebyshev2", "--grid", "5", "--compare"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    let (x, phi, r) = (col(&h, "x"), col(&h, "phi"), col(&h, "residual"));
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert!(f(&row[r]).abs() < 1e-10);
        // φ = 4x
        assert!((f(&row[phi]) - 4.0 * f(&row[x])).abs() < 1e-14);
    }
}

#[test]
fn non_reducible_densities_exit_3() {
    assert_eq!(code(&run(&["reducer", "--density", "chebyshev1"])), 3);
    assert_eq!(code(&run(&["solve", "--density", "chebyshev1", "--rhs", "q1", "--grid", "5"])), 3);
    assert_eq!(code(&run(&["fourier", "--density", "jacobi_half"])), 3);
    assert_eq!(code(&run(&["verify", "--suite", "norm", "--density", "chebyshev1"])), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "--suite", "bogus"])), 2);
    assert_eq!(code(&run(&["reducer"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["solve", "--density", "lebesgue01", "--rhs", "qx"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "coupling", "--density", "gaussian"])), 2);
}

#[test]
fn fourier_reference_systems_pass() {
    for d in ["lebesgue01", "exponential", "gaussian"] {
        let o = run(&["fourier", "--density", d, "--n", "6"]);
        assert_eq!(code(&o), 0, "{d}");
        let (h, rows) = table(&o);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r[col(&h, "pass")] == "true"));
    }
    // Legendre: C_1 = 4√3/2 in the positive-leading convention
    let (h, rows) = table(&run(&["fourier", "--density", "lebesgue01", "--n", "1"]));
    assert!((f(&rows[0][col(&h, "computed")]) - 2.0 * 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn fourier_without_reference_gives_raw_values() {
    let o = run(&["fourier", "--density", "arccos", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r[col(&h, "expected")].is_empty());
        assert!(f(&r[col(&h, "computed")]).is_finite());
    }
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--suite", "all", "--density", "lebesgue01"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(&o);
    assert!(rows.len() > 50);
    assert!(rows.iter().all(|r| r[col(&h, "pass")] == "true"));

    let o = run(&["verify", "--suite", "norm", "--density", "exponential"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    let target = 4.0 * std::f64::consts::PI.powi(2) / 9.0;
    for r in &rows {
        assert!((f(&r[col(&h, "computed")]) - target).abs() < 1e-4);
    }

    let o = run(&["verify", "--suite", "geoharmonic"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sum G_n/n! x^n"));
}

#[test]
fn verify_json_report() {
    let o = run(&["verify", "--suite", "moments", "--density", "chebyshev2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["command"], "verify moments chebyshev2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    assert!(v["wall_time"].as_f64().unwrap() >= 0.0);
}

#[test]
fn solve_recovers_orthonormal_polynomials() {
    let p1 = |x: f64| 3f64.sqrt() * (2.0 * x - 1.0);
    let p2 = |x: f64| 5f64.sqrt() * (6.0 * x * x - 6.0 * x + 1.0);
    for (rhs, p, tol) in [("q1", &p1 as &dyn Fn(f64) -> f64, 1e-6), ("q2", &p2, 1e-5)] {
        let o = run(&["solve", "--density", "lebesgue01", "--rhs", rhs, "--grid", "20"]);
        assert_eq!(code(&o), 0);
        let (h, rows) = table(&o);
        assert_eq!(h, ["x", "f", "residual"]);
        assert_eq!(rows.len(), 20);
        for r in &rows {
            assert!((f(&r[1]) - p(f(&r[0]))).abs() < tol, "{rhs} at {}", r[0]);
            assert!(f(&r[2]).abs() < 1e-8);
        }
    }
}

#[test]
fn solve_from_csv_file() {
    // Q_1 = 2√3 for the uniform density, so f should come back as P_1
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "x,g").unwrap();
    for i in 0..=10 {
        writeln!(file, "{},{}", i as f64 / 10.0, 2.0 * 3f64.sqrt()).unwrap();
    }
    let path = file.path().to_str().unwrap();
    let o = run(&["solve", "--density", "lebesgue01", "--rhs", path, "--grid", "8"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("C^1"));
    let (_, rows) = table(&o);
    for r in &rows {
        assert!((f(&r[1]) - 3f64.sqrt() * (2.0 * f(&r[0]) - 1.0)).abs() < 1e-6);
    }

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "0,1\n0.5\n").unwrap();
    let o = run(&["solve", "--density", "lebesgue01", "--rhs", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    let args = ["reducer", "--density", "neg_log", "--grid", "7"];
    let o = run(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let o2 = run(&with_file);
    assert_eq!(code(&o2), 0);
    assert!(o2.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["reducer", "--density", "arccos", "--grid", "9", "--compare"][..],
        &["solve", "--density", "chebyshev2", "--rhs", "q3", "--grid", "12"],
        &["verify", "--suite", "all", "--density", "chebyshev2"],
        &["geoharmonic", "--table"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let (_, rows) = table(&run(&["reducer", "--density", "scaled_exp", "--grid", "4"]));
    for r in &rows {
        for cell in r {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{cell}");
        }
    }
}

#[test]
fn geoharmonic_table_has_eighteen_rows() {
    let o = run(&["geoharmonic", "--table"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = table(&o);
    assert_eq!(rows.len(), 18);
    let r = col(&h, "residual");
    assert!(rows.iter().all(|row| f(&row[r]).abs() < 1e-8));
    let o = run(&["geoharmonic", "--table", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 18);
}
