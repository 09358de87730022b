//! Identity suites behind `verify`. Each returns report rows; a suite that
//! cannot apply to the density is a usage error when asked for by name and
//! skipped under `all`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use secondary::density::{exponential_reducer_ei, get_density, moments, Density, EXPONENTIAL_CUTOFF};
use secondary::geoharmonic::{build_sequences, gf_table, s_from_leibniz_row, series_g2, series_gh, series_h2, G2_LIMIT};
use secondary::identities::{
    check_moment_identity, check_norm_identity, check_sum_formula, check_triplet_identity,
    fourier_coeffs_direct, fourier_coeffs_via_q,
};
use secondary::operator::{covariance_residual, verify_composition};
use secondary::quadrature::{integrate_range, Interval};
use secondary::reducer::{secondary_density, verify_coupling, ReducerProfile};

use crate::commands::{basis, window};
use crate::report::Row;
use crate::Failure;

pub const SUITES: [&str; 10] = [
    "covariance",
    "norm",
    "triplet",
    "fourier",
    "sum",
    "moments",
    "coupling",
    "composition",
    "geoharmonic",
    "all",
];

const FOURIER_N: usize = 6;

/// Ok(None) means the suite does not apply to this density.
type SuiteResult = Result<Option<Vec<Row>>, Failure>;

pub fn run(suite: &str, d: &Density) -> Result<Vec<Row>, Failure> {
    if !SUITES.contains(&suite) {
        return Err(Failure::usage(format!(
            "unknown suite '{suite}'; expected one of {}",
            SUITES.join(", ")
        )));
    }
    if suite == "geoharmonic" {
        return geoharmonic();
    }
    d.require_reducible()?;
    if suite != "all" {
        return one(suite, d)?.ok_or_else(|| {
            Failure::usage(format!("suite '{suite}' does not apply to '{}' on {}", d.name, d.interval))
        });
    }
    let mut rows = Vec::new();
    for s in &SUITES[..SUITES.len() - 1] {
        if *s == "geoharmonic" {
            rows.extend(geoharmonic()?);
        } else if let Some(r) = one(s, d)? {
            rows.extend(r);
        }
    }
    Ok(rows)
}

fn one(suite: &str, d: &Density) -> SuiteResult {
    match suite {
        "covariance" => covariance(d),
        "norm" => norm(d),
        "triplet" => triplet(d),
        "fourier" => fourier(d),
        "sum" => sum(d),
        "moments" => moment_identity(d),
        "coupling" => coupling(d),
        "composition" => composition(d),
        _ => unreachable!("suite names checked by caller"),
    }
}

fn covariance(d: &Density) -> SuiteResult {
    let mu = secondary_density(d, &ReducerProfile::default_for(d)?)?;
    let mut rows = Vec::new();
    for p in 1..=3 {
        for q in 1..=3 {
            let r = covariance_residual(d, &mu, |t: f64| t.powi(p), |t: f64| t.powi(q), 1e-8)?;
            rows.push(Row::residual(format!("covariance x^{p}, x^{q}"), r, 1e-5));
        }
    }
    Ok(Some(rows))
}

fn norm(d: &Density) -> SuiteResult {
    let tol = if d.interval.is_bounded() { 1e-5 } else { 1e-4 };
    let c = check_norm_identity(d, &ReducerProfile::default_for(d)?, 1e-8)?;
    let mut rows = vec![Row::check("norm: int phi^2 rho vs (4 pi^2/3) int rho^3", c.lhs, c.rhs, tol)];
    if d.name == "exponential" {
        // the closed reducer written with Ei; Ei has its root at 0.3725...
        let ei = integrate_range(
            |t| exponential_reducer_ei(t).powi(2) * (-t).exp(),
            0.0,
            EXPONENTIAL_CUTOFF,
            &[0.372_507_410_781_366_6],
            1e-9,
        )?
        .value;
        rows.push(Row::check("norm: int 4 Ei(x)^2 e^-3x vs 4 pi^2/9", ei, 4.0 * PI * PI / 9.0, 1e-4));
    }
    Ok(Some(rows))
}

fn triplet(d: &Density) -> SuiteResult {
    if d.interval != Interval::unit() {
        return Ok(None);
    }
    let partners = [
        [d.name.as_str(), d.name.as_str()],
        ["lebesgue01", "arccos"],
        ["neg_log", "scaled_exp"],
    ];
    let mut rows = Vec::new();
    for [b, c] in partners {
        let (db, dc) = (get_density(b)?, get_density(c)?);
        let (pa, pb, pc) = (
            ReducerProfile::default_for(d)?,
            ReducerProfile::default_for(&db)?,
            ReducerProfile::default_for(&dc)?,
        );
        let r = check_triplet_identity([d, &db, &dc], [&pa, &pb, &pc], 1e-8)?;
        rows.push(Row::residual(format!("triplet {}, {b}, {c}", d.name), r, 1e-5));
    }
    Ok(Some(rows))
}

fn fourier(d: &Density) -> SuiteResult {
    let b = basis(d, FOURIER_N)?;
    let phi = ReducerProfile::default_for(d)?;
    let via_q = fourier_coeffs_via_q(&b, FOURIER_N)?;
    let direct = fourier_coeffs_direct(&phi, &b, d, FOURIER_N, 1e-9)?;
    let expected = via_q.expected();
    let mut rows = Vec::new();
    for n in 1..=FOURIER_N {
        let c = via_q.coeffs[n];
        if let Some(e) = &expected {
            rows.push(Row::check(format!("fourier C_{n} vs reference"), c, e[n], 1e-8 * e[n].abs().max(1.0)));
        }
        rows.push(Row::check(format!("fourier C_{n} quadrature vs Q_n"), direct.coeffs[n], c, 1e-6));
    }
    Ok(Some(rows))
}

fn sum(d: &Density) -> SuiteResult {
    // C_n(x^k) vanishes for n > k, so N = 3 makes the sum exact for k ≤ 3
    let b = basis(d, 3)?;
    let phi = ReducerProfile::default_for(d)?;
    let mut rows = Vec::new();
    for k in 1..=3 {
        let s = check_sum_formula(d, &b, &phi, |t: f64| t.powi(k), 3, 1e-8)?;
        rows.push(Row::check(format!("sum formula f = x^{k}"), s.lhs, s.partial_rhs, 1e-6));
    }
    Ok(Some(rows))
}

fn moment_identity(d: &Density) -> SuiteResult {
    let phi = ReducerProfile::default_for(d)?;
    let m = moments(d, 6, 1e-13)?;
    let rows = check_moment_identity(d, &phi, &m, 6, 1e-10)?
        .into_iter()
        .enumerate()
        .map(|(n, r)| Row::residual(format!("moments n = {n}"), r, 1e-6))
        .collect();
    Ok(Some(rows))
}

fn coupling(d: &Density) -> SuiteResult {
    let zs: Vec<f64> = match d.interval {
        Interval::Bounded { a, b } => [-3.0, -1.0, 2.0, 5.0].iter().map(|z| a + (b - a) * z).collect(),
        Interval::SemiInfinite { a } => vec![a - 3.0, a - 1.0],
        Interval::RealLine => return Ok(None),
    };
    let mu = secondary_density(d, &ReducerProfile::default_for(d)?)?;
    let c1 = moments(d, 1, 1e-13)?.c1();
    let mut rows = Vec::new();
    for z in zs {
        let r = verify_coupling(d, &mu, c1, z, 1e-9)?;
        rows.push(Row::residual(format!("coupling z = {z}"), r, 1e-6));
    }
    Ok(Some(rows))
}

fn composition(d: &Density) -> SuiteResult {
    let phi = ReducerProfile::default_for(d)?;
    let mu = secondary_density(d, &phi)?;
    let (a, b) = window(d);
    type Named = (&'static str, fn(f64) -> f64);
    let fs: [Named; 3] = [("1", |_| 1.0), ("x", |t| t), ("x^2", |t| t * t)];
    let mut rows = Vec::new();
    for (name, f) in fs {
        for s in [0.1, 0.3, 0.5, 0.6, 0.85] {
            let x = a + (b - a) * s;
            let r = verify_composition(d, &phi, &mu, f, x, 1e-8)?;
            rows.push(Row::residual(format!("composition f = {name}, x = {x}"), r, 2e-5));
        }
    }
    Ok(Some(rows))
}

fn geoharmonic() -> Result<Vec<Row>, Failure> {
    let n = 30;
    let seq = build_sequences(n)?;
    let mut mismatches = 0;
    for k in 1..=n {
        let from_g = &seq.g[k] / BigRational::from_integer(BigInt::from(1u64 << k));
        if s_from_leibniz_row(k)? != seq.s[k] || from_g != seq.s[k] {
            mismatches += 1;
        }
    }
    let mut rows = vec![
        Row::check("geoharmonic Leibniz rows n = 1..30, mismatches", mismatches as f64, 0.0, 0.0),
        Row::check("geoharmonic sum G_n^2/4^n, N = 1e6", series_g2(1_000_000), G2_LIMIT, 1e-5),
    ];
    let h2 = series_h2(60);
    rows.push(Row::check("geoharmonic sum H_n^2/4^n, N = 60", h2.partial, h2.closed, 1e-10));
    let gh = series_gh(60);
    rows.push(Row::check("geoharmonic sum G_n H_n/4^n, N = 60", gh.partial, gh.closed, 1e-10));
    for r in gf_table()? {
        rows.push(Row::check(
            format!("geoharmonic {} at x = {}, N = {}", r.label, r.x, r.terms),
            r.check.partial,
            r.check.closed,
            1e-8,
        ));
    }
    Ok(rows)
}
