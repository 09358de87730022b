use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use secondary::density::{catalog as all_densities, get_density, moments, ClosedMoments, Density, Smoothness};
use secondary::geoharmonic::gf_table;
use secondary::identities::fourier_coeffs_via_q;
use secondary::operator::{back_substitution, chebyshev_grid, solve_integral_equation, GridFunction};
use secondary::orthopoly::{build_basis, OrthoBasis, Polynomial};
use secondary::quadrature::Interval;
use secondary::reducer::{numeric_reducer, secondary_density, secondary_reducer, ReducerProfile, NUMERIC_REDUCER_TOL};

use crate::report::{num, Row, RunReport};
use crate::{sink, suites, CmdResult, Failure, EXIT_FAIL};

/// `reducer --compare` accepts |numeric − closed| up to this.
pub const COMPARE_TOL: f64 = 1e-6;

/// Finite window used for grids on unbounded supports.
pub fn window(d: &Density) -> (f64, f64) {
    match d.interval {
        Interval::Bounded { a, b } => (a, b),
        Interval::SemiInfinite { a } => (a, a + 10.0),
        Interval::RealLine => (-5.0, 5.0),
    }
}

/// Solver window: unbounded supports are covered out to where the density
/// is negligible, since the check integrates the interpolated solution over
/// the whole support.
fn solve_window(d: &Density) -> (f64, f64) {
    match d.interval {
        Interval::Bounded { a, b } => (a, b),
        Interval::SemiInfinite { a } => (a, d.truncate_at.unwrap_or(a + 60.0)),
        Interval::RealLine => (-10.0, 10.0),
    }
}

pub fn basis(d: &Density, n: usize) -> Result<OrthoBasis, Failure> {
    Ok(build_basis(&moments(d, 2 * n, 1e-13)?, n)?)
}

fn reducible(name: &str) -> Result<Density, Failure> {
    let d = get_density(name)?;
    d.require_reducible()?;
    Ok(d)
}

fn status(report: &RunReport) -> u8 {
    eprintln!(
        "{}: {} ({} rows, {:.3}s)",
        report.command,
        if report.pass { "PASS" } else { "FAIL" },
        report.rows.len(),
        report.wall_time.as_secs_f64()
    );
    if report.pass {
        0
    } else {
        EXIT_FAIL
    }
}

fn emit(report: &RunReport, json: bool) -> CmdResult {
    let mut out = sink(None)?;
    if json {
        report.write_json(&mut out)?;
    } else {
        report.write_csv(&mut out)?;
    }
    out.flush()?;
    Ok(status(report))
}

#[derive(Serialize)]
struct CatalogEntry {
    name: String,
    interval: String,
    reducible: bool,
    smoothness: Smoothness,
    closed_reducer: bool,
    closed_secondary: bool,
    closed_moments: Option<&'static str>,
}

impl CatalogEntry {
    fn of(d: &Density) -> Self {
        CatalogEntry {
            name: d.name.clone(),
            interval: d.interval.to_string(),
            reducible: d.reducible,
            smoothness: d.smoothness,
            closed_reducer: d.closed_reducer.is_some(),
            closed_secondary: d.closed_secondary.is_some(),
            closed_moments: d.closed_moments.as_ref().map(|m| match m {
                ClosedMoments::Rational(_) => "rational",
                ClosedMoments::Real(_) => "real",
            }),
        }
    }
}

pub fn catalog(json: bool, name: Option<&str>) -> CmdResult {
    let ds = match name {
        Some(n) => vec![get_density(n)?],
        None => all_densities(),
    };
    let entries: Vec<CatalogEntry> = ds.iter().map(CatalogEntry::of).collect();
    let mut out = sink(None)?;
    if json {
        serde_json::to_writer_pretty(&mut out, &entries)?;
        writeln!(out)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record([
            "name",
            "interval",
            "reducible",
            "smoothness",
            "closed_reducer",
            "closed_secondary",
            "closed_moments",
        ])?;
        for e in &entries {
            w.write_record([
                e.name.clone(),
                e.interval.clone(),
                e.reducible.to_string(),
                format!("{:?}", e.smoothness).to_lowercase(),
                e.closed_reducer.to_string(),
                e.closed_secondary.to_string(),
                e.closed_moments.unwrap_or("").to_string(),
            ])?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct ReducerRow {
    x: f64,
    phi: f64,
    mu: f64,
    psi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_closed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

pub fn reducer(name: &str, grid: usize, compare: bool, json: bool, output: Option<&PathBuf>) -> CmdResult {
    let d = reducible(name)?;
    if grid == 0 {
        return Err(Failure::usage("--grid must be at least 1"));
    }
    let closed = match (compare, &d.closed_reducer) {
        (true, None) => return Err(Failure::usage(format!("'{name}' has no closed-form reducer to compare with"))),
        (_, c) => c.clone(),
    };
    let phi = ReducerProfile::default_for(&d)?;
    let mu = secondary_density(&d, &phi)?;
    let c1 = moments(&d, 1, 1e-13)?.c1();
    let (a, b) = window(&d);
    let mut rows = Vec::with_capacity(grid);
    for x in chebyshev_grid(a, b, grid) {
        let mut row = ReducerRow {
            x,
            phi: phi.eval(x),
            mu: mu.eval(x),
            // ψ is undefined where the density vanishes
            psi: secondary_reducer(&d, &phi, &mu, c1, x).unwrap_or(f64::NAN),
            phi_closed: None,
            phi_numeric: None,
            residual: None,
        };
        if let (true, Some(c)) = (compare, &closed) {
            let cv = c(x);
            let nv = numeric_reducer(&d, x, NUMERIC_REDUCER_TOL).unwrap_or(f64::NAN);
            row.phi_closed = Some(cv);
            row.phi_numeric = Some(nv);
            row.residual = Some(nv - cv);
        }
        rows.push(row);
    }

    let mut out = sink(output)?;
    if json {
        serde_json::to_writer_pretty(&mut out, &rows)?;
        writeln!(out)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header = vec!["x", "phi", "mu", "psi"];
        if compare {
            header.extend(["phi_closed", "phi_numeric", "residual"]);
        }
        w.write_record(&header)?;
        for r in &rows {
            let mut rec = vec![num(r.x), num(r.phi), num(r.mu), num(r.psi)];
            for v in [r.phi_closed, r.phi_numeric, r.residual].into_iter().flatten() {
                rec.push(num(v));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    out.flush()?;

    if compare {
        let worst = rows
            .iter()
            .filter_map(|r| r.residual)
            .map(f64::abs)
            .fold(0.0, |m: f64, r| if m.is_nan() || r.is_nan() { f64::NAN } else { m.max(r) });
        eprintln!("reducer {name}: max |numeric - closed| = {worst:.3e} (tolerance {COMPARE_TOL:e})");
        if !(worst <= COMPARE_TOL) {
            return Ok(EXIT_FAIL);
        }
    }
    Ok(0)
}

pub fn fourier(name: &str, n: usize, json: bool) -> CmdResult {
    let start = Instant::now();
    let d = reducible(name)?;
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let t = fourier_coeffs_via_q(&basis(&d, n)?, n)?;
    let expected = t.expected();
    let rows = (1..=n)
        .map(|k| {
            let label = format!("C_{k}");
            match &expected {
                Some(e) => Row::check(label, t.coeffs[k], e[k], 1e-8 * e[k].abs().max(1.0)),
                None => Row::raw(label, t.coeffs[k]),
            }
        })
        .collect();
    let report = RunReport::new(format!("fourier {}", d.name), rows, start.elapsed());
    emit(&report, json)
}

pub fn verify(suite: &str, name: &str, json: bool) -> CmdResult {
    let start = Instant::now();
    let d = get_density(name)?;
    let rows = suites::run(suite, &d)?;
    let command = if suite == "geoharmonic" {
        "verify geoharmonic".to_string()
    } else {
        format!("verify {suite} {}", d.name)
    };
    emit(&RunReport::new(command, rows, start.elapsed()), json)
}

/// `(x, g(x))` pairs from a CSV file, header optional.
fn read_rhs(path: &Path) -> Result<GridFunction, Failure> {
    let bad = |msg: String| Failure::usage(format!("{}: {msg}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.len() != 2 {
            return Err(bad(format!("line {}: expected 2 fields, found {}", i + 1, rec.len())));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(x), Ok(g)) if x.is_finite() && g.is_finite() => pts.push((x, g)),
            _ if i == 0 => continue, // header
            _ => return Err(bad(format!("line {}: not a pair of finite numbers", i + 1))),
        }
    }
    if pts.len() < 2 {
        return Err(bad("need at least two (x, g) rows".into()));
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (xs, gs): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    GridFunction::new(xs, gs).map_err(|e| bad(e.to_string()))
}

enum Rhs {
    Secondary(Polynomial),
    Table(GridFunction),
}

impl Rhs {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Rhs::Secondary(p) => p.eval(x),
            Rhs::Table(g) => g.interpolate(x),
        }
    }
}

#[derive(Serialize)]
struct SolveRow {
    x: f64,
    f: f64,
    residual: f64,
}

pub fn solve(name: &str, rhs: &str, grid: usize, json: bool, output: Option<&PathBuf>) -> CmdResult {
    let d = reducible(name)?;
    if grid < 2 {
        return Err(Failure::usage("--grid must be at least 2"));
    }
    let g = match rhs.strip_prefix('q').map(str::parse::<usize>) {
        Some(Ok(n)) if n >= 1 => Rhs::Secondary(basis(&d, n)?.q[n].clone()),
        Some(_) if !Path::new(rhs).exists() => {
            return Err(Failure::usage(format!("--rhs '{rhs}': expected qN with N >= 1 or a CSV file")))
        }
        _ => {
            eprintln!("warning: g is interpolated linearly from {rhs}; the inversion formula assumes g is C^1");
            Rhs::Table(read_rhs(Path::new(rhs))?)
        }
    };
    let phi = ReducerProfile::default_for(&d)?;
    let mu = secondary_density(&d, &phi)?;
    let c1 = moments(&d, 1, 1e-13)?.c1();
    let (a, b) = solve_window(&d);
    let pts = chebyshev_grid(a, b, grid);
    let f = solve_integral_equation(&mu, c1, |t| g.eval(t), &pts, 1e-10)?;
    // check T(f) = g with f interpolated through the grid values
    let fp = f.polynomial()?;
    let res = back_substitution(&d, |t| fp.eval(t), |t| g.eval(t), &pts, 1e-9)?;
    let worst = res.iter().map(|r| r.abs()).fold(0.0, f64::max);
    eprintln!("solve {}: max |T(f) - g| on the grid = {worst:.3e}", d.name);
    let rows: Vec<SolveRow> = pts
        .iter()
        .zip(&f.values)
        .zip(&res)
        .map(|((&x, &fx), &r)| SolveRow { x, f: fx, residual: r })
        .collect();

    let mut out = sink(output)?;
    if json {
        serde_json::to_writer_pretty(&mut out, &rows)?;
        writeln!(out)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["x", "f", "residual"])?;
        for r in &rows {
            w.write_record([num(r.x), num(r.f), num(r.residual)])?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct GfRow {
    series: &'static str,
    x: f64,
    terms: usize,
    partial: f64,
    closed: f64,
    residual: f64,
}

pub fn geoharmonic(table: bool, json: bool) -> CmdResult {
    if !table {
        return verify("geoharmonic", "lebesgue01", json);
    }
    let rows: Vec<GfRow> = gf_table()?
        .into_iter()
        .map(|r| GfRow {
            series: r.label,
            x: r.x,
            terms: r.terms,
            partial: r.check.partial,
            closed: r.check.closed,
            residual: r.check.residual(),
        })
        .collect();
    let mut out = sink(None)?;
    if json {
        serde_json::to_writer_pretty(&mut out, &rows)?;
        writeln!(out)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["series", "x", "terms", "partial", "closed", "residual"])?;
        for r in &rows {
            w.write_record([
                r.series.to_string(),
                num(r.x),
                r.terms.to_string(),
                num(r.partial),
                num(r.closed),
                num(r.residual),
            ])?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(0)
}
