//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p secondary-core --test acceptance`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use secondary::density::{
    chebyshev2, exponential, exponential_reducer_ei, gaussian, get_density, lebesgue01, moments,
    Density,
};
use secondary::geoharmonic::{
    build_sequences, gf_table, s_from_leibniz_row, series_g2, series_gh, series_h2, G2_LIMIT,
};
use secondary::identities::{
    check_moment_identity, check_norm_identity, fourier_coeffs_direct, fourier_coeffs_via_q,
    hermite_factorial_form,
};
use secondary::operator::{
    chebyshev_grid, covariance_residual, solve_integral_equation, solve_via_u, uniform_grid,
    verify_composition,
};
use secondary::orthopoly::{build_basis, gram_residuals, orthonormality_report, OrthoBasis};
use secondary::quadrature::integrate_range;
use secondary::reducer::{numeric_reducer, secondary_density, verify_coupling, ReducerProfile};
use secondary::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn basis(d: &Density, n: usize) -> Result<OrthoBasis> {
    build_basis(&moments(d, 2 * n, 1e-13)?, n)
}

fn grid_of(d: &Density, n: usize) -> Vec<f64> {
    let (a, b) = d.interval.bounds();
    chebyshev_grid(a, b, n)
}

fn c1_reducer_closed_forms() -> Result<Outcome> {
    let names = [
        "lebesgue01",
        "chebyshev2",
        "neg_log",
        "power_a",
        "log_inv_sqrt",
        "arccos",
        "scaled_exp",
    ];
    let mut worst: f64 = 0.0;
    let mut worst_name = "";
    for name in names {
        let d = get_density(name)?;
        let closed = d.closed_reducer.clone().expect("catalog closed form");
        for x in grid_of(&d, 50) {
            let err = (numeric_reducer(&d, x, 1e-10)? - closed(x)).abs();
            if !(err <= worst) {
                worst = err;
                worst_name = name;
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!("7 densities x 50 points, max |numeric - closed| = {worst:.2e} ({worst_name})"),
    )
}

fn c2_chebyshev2_secondary() -> Result<Outcome> {
    let d = chebyshev2();
    let mu = secondary_density(&d, &ReducerProfile::closed(&d)?)?;
    let worst = grid_of(&d, 50)
        .into_iter()
        .map(|x| (mu.eval(x) - 0.25 * d.density(x)).abs())
        .fold(0.0, f64::max);
    outcome(worst < 1e-10, format!("max |mu - rho/4| = {worst:.2e}"))
}

fn c3_norm_identity() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["lebesgue01", "chebyshev2", "arccos", "neg_log"] {
        let d = get_density(name)?;
        let r = check_norm_identity(&d, &ReducerProfile::closed(&d)?, 1e-8)?.residual();
        pass &= r.abs() < 1e-5;
        parts.push(format!("{name} {r:.1e}"));
    }
    // ∫ 4 Ei(x)² e^{−3x} dx over [0, ∞), truncated at 60, split at the root of Ei
    let ei_form = integrate_range(
        |t| exponential_reducer_ei(t).powi(2) * (-t).exp(),
        0.0,
        60.0,
        &[0.372_507_410_781_366_6],
        1e-9,
    )?
    .value;
    let r_ei = ei_form - 4.0 * PI * PI / 9.0;
    let e = exponential();
    let r_int = check_norm_identity(&e, &ReducerProfile::closed(&e)?, 1e-7)?.residual();
    pass &= r_ei.abs() < 1e-4 && r_int.abs() < 1e-4;
    parts.push(format!("exponential Ei-form {r_ei:.1e}, integral-form {r_int:.1e}"));
    outcome(pass, parts.join("; "))
}

fn c4_fourier() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();

    let l = lebesgue01();
    let t = fourier_coeffs_via_q(&basis(&l, 6)?, 6)?;
    let e = t.expected().unwrap();
    let odd = [1, 3, 5].iter().map(|&n| (t.coeffs[n] - e[n]).abs()).fold(0.0, f64::max);
    let even = [2, 4, 6].iter().map(|&n| t.coeffs[n].abs()).fold(0.0, f64::max);
    pass &= odd < 1e-5 && even < 1e-7;
    parts.push(format!("Legendre odd {odd:.1e} even {even:.1e}"));

    let g = gaussian();
    let gb = basis(&g, 6)?;
    let phi = ReducerProfile::closed(&g)?;
    let tq = fourier_coeffs_via_q(&gb, 6)?;
    let td = fourier_coeffs_direct(&phi, &gb, &g, 6, 1e-9)?;
    let e = tq.expected().unwrap();
    let mut odd: f64 = 0.0;
    let mut even: f64 = 0.0;
    for n in 1..=6 {
        for c in [tq.coeffs[n], td.coeffs[n]] {
            if n % 2 == 1 {
                odd = odd.max((c - e[n]).abs());
            } else {
                even = even.max(c.abs());
            }
        }
    }
    // the factorial form (n−1)!/√n! breaks Bessel's inequality by n = 5
    let norm = check_norm_identity(&g, &phi, 1e-10)?.lhs;
    let factorial_sum: f64 = [1, 3, 5].iter().map(|&n| hermite_factorial_form(n).powi(2)).sum();
    let refuted = factorial_sum > norm;
    pass &= odd < 1e-4 && even < 1e-7 && refuted;
    parts.push(format!(
        "Hermite odd {odd:.1e} even {even:.1e} (|C_n| = ((n-1)/2)!/sqrt(n!); (n-1)!/sqrt(n!) gives sum C_n^2 = {factorial_sum:.2} > {norm:.4})"
    ));

    let x = exponential();
    let t = fourier_coeffs_via_q(&basis(&x, 6)?, 6)?;
    let e = t.expected().unwrap();
    let dev = (1..=6).map(|n| (t.coeffs[n] - e[n]).abs()).fold(0.0, f64::max);
    pass &= dev < 1e-4;
    parts.push(format!("Laguerre {dev:.1e}"));
    outcome(pass, parts.join("; "))
}

fn c5_covariance() -> Result<Outcome> {
    let d = lebesgue01();
    let mu = secondary_density(&d, &ReducerProfile::closed(&d)?)?;
    let mut worst: f64 = 0.0;
    for p in 1..=3 {
        for q in 1..=3 {
            let r = covariance_residual(&d, &mu, |t: f64| t.powi(p), |t: f64| t.powi(q), 1e-8)?;
            worst = worst.max(r.abs());
        }
    }
    let var = mu.mass(1e-12)?;
    let anchor = (var - 1.0 / 12.0).abs();
    outcome(
        worst < 1e-5 && anchor < 1e-8,
        format!("9 pairs max residual {worst:.1e}; <Tx,Tx>_mu = {var:.12} (1/12)"),
    )
}

fn c6_composition() -> Result<Outcome> {
    let d = lebesgue01();
    let phi = ReducerProfile::closed(&d)?;
    let mu = secondary_density(&d, &phi)?;
    let fs: [fn(f64) -> f64; 3] = [|_| 1.0, |t| t, |t| t * t];
    let mut worst: f64 = 0.0;
    for f in fs {
        for x in [0.1, 0.3, 0.5, 0.6, 0.85] {
            worst = worst.max(verify_composition(&d, &phi, &mu, f, x, 1e-8)?.abs());
        }
    }
    outcome(worst < 2e-5, format!("15 evaluations, max residual {worst:.1e}"))
}

fn c7_solver() -> Result<Outcome> {
    let mut round_trip: f64 = 0.0;
    let mut paths: f64 = 0.0;
    for d in [lebesgue01(), chebyshev2()] {
        let phi = ReducerProfile::closed(&d)?;
        let mu = secondary_density(&d, &phi)?;
        let b = basis(&d, 3)?;
        let c1 = b.moments.c1();
        let (lo, hi) = d.interval.bounds();
        let grid = uniform_grid(lo, hi, 19);
        for n in 1..=3 {
            let q = &b.q[n];
            let f = solve_integral_equation(&mu, c1, |t| q.eval(t), &grid, 1e-10)?;
            let alt = solve_via_u(&d, &phi, |t| q.eval(t), &grid, 1e-10)?;
            round_trip = round_trip.max(f.max_deviation(|t| b.p[n].eval(t)));
            let gap = f
                .values
                .iter()
                .zip(&alt.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            paths = paths.max(gap);
        }
    }
    outcome(
        round_trip < 1e-5 && paths < 1e-4,
        format!("max |f - P_n| = {round_trip:.1e}; max path gap = {paths:.1e}"),
    )
}

fn c8_moment_identity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for d in [lebesgue01(), chebyshev2()] {
        let phi = ReducerProfile::closed(&d)?;
        let m = moments(&d, 6, 1e-13)?;
        for r in check_moment_identity(&d, &phi, &m, 6, 1e-10)? {
            worst = worst.max(r.abs());
        }
    }
    outcome(worst < 1e-6, format!("n = 0..6, max residual {worst:.1e}"))
}

fn c9_coupling() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for d in [lebesgue01(), chebyshev2()] {
        let phi = ReducerProfile::closed(&d)?;
        let mu = secondary_density(&d, &phi)?;
        let c1 = moments(&d, 1, 1e-13)?.c1();
        // the sample points are given relative to [0, 1]; map them onto I
        let (a, b) = d.interval.bounds();
        let zs: Vec<f64> = [-3.0, -1.0, 2.0, 5.0].iter().map(|z| a + (b - a) * z).collect();
        for &z in &zs {
            worst = worst.max(verify_coupling(&d, &mu, c1, z, 1e-9)?.abs());
        }
        parts.push(format!("{} z = {:?}", d.name, zs));
    }
    outcome(worst < 1e-6, format!("{}; max residual {worst:.1e}", parts.join(", ")))
}

fn c10_geoharmonic() -> Result<Outcome> {
    let seq = build_sequences(30)?;
    let exact = (1..=30).all(|n| s_from_leibniz_row(n).ok() == Some(seq.s[n].clone()))
        && (1..=30).all(|n| {
            seq.s[n] == &seq.g[n] / BigRational::from_integer(num_bigint::BigInt::from(1u64 << n))
        });
    let g2 = series_g2(1_000_000) - G2_LIMIT;
    let h2 = series_h2(60).residual();
    let gh = series_gh(60).residual();
    let rows = gf_table()?;
    let gf = rows.iter().map(|r| r.check.residual().abs()).fold(0.0, f64::max);
    outcome(
        exact && g2.abs() < 1e-5 && h2.abs() < 1e-10 && gh.abs() < 1e-10 && gf < 1e-8,
        format!(
            "Leibniz rows exact: {exact}; G2 {g2:.1e}; H2 {h2:.1e}; GH {gh:.1e}; {} gf rows max {gf:.1e}",
            rows.len()
        ),
    )
}

fn c11_orthonormality() -> Result<Outcome> {
    let mut p_worst: f64 = 0.0;
    let mut q_worst: f64 = 0.0;
    for d in [lebesgue01(), chebyshev2()] {
        let b = basis(&d, 6)?;
        p_worst = p_worst.max(orthonormality_report(&b, &d, 1e-12)?.max_abs);
        let mu = secondary_density(&d, &ReducerProfile::closed(&d)?)?;
        q_worst = q_worst.max(gram_residuals(&b.q, 1, &mu, 1e-10)?.max_abs);
    }
    outcome(
        p_worst < 1e-7 && q_worst < 1e-5,
        format!("P residual {p_worst:.1e}; Q residual under mu {q_worst:.1e}"),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Result<Outcome>, Option<Duration>);
    let criteria: [Criterion; 11] = [
        ("reducer closed forms", c1_reducer_closed_forms, Some(Duration::from_secs(5))),
        ("chebyshev2 secondary measure", c2_chebyshev2_secondary, None),
        ("norm identity", c3_norm_identity, Some(Duration::from_secs(30))),
        ("fourier coefficients", c4_fourier, None),
        ("covariance formula", c5_covariance, None),
        ("composition formula", c6_composition, Some(Duration::from_secs(60))),
        ("solver round trip", c7_solver, None),
        ("moment identity", c8_moment_identity, None),
        ("stieltjes coupling", c9_coupling, None),
        ("geoharmonic suite", c10_geoharmonic, Some(Duration::from_secs(10))),
        ("orthonormality", c11_orthonormality, None),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!(
            "criterion {:>2} {:<30} {}  [{:.2}s{}] {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            detail
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
