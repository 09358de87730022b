//! Harmonic numbers `H_n`, geoharmonic numbers `G_n = Σ_{k≤n} 2^k/k`, the
//! Leibniz-row sums `s_n = G_n/2ⁿ`, and their generating functions and
//! series.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{dilog, CompensatedSum};

/// Exact sequences, index 0 holding 0 so that `h[n] = H_n`.
#[derive(Debug, Clone)]
pub struct GeoharmonicSeq {
    pub n_max: usize,
    pub h: Vec<BigRational>,
    pub g: Vec<BigRational>,
    pub s: Vec<BigRational>,
}

impl GeoharmonicSeq {
    pub fn s_f64(&self, n: usize) -> f64 {
        self.s[n].to_f64().unwrap_or(f64::NAN)
    }
}

pub fn build_sequences(n_max: usize) -> Result<GeoharmonicSeq> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let mut h = vec![BigRational::zero()];
    let mut g = vec![BigRational::zero()];
    let mut s = vec![BigRational::zero()];
    let mut pow2 = BigInt::one();
    for n in 1..=n_max {
        pow2 *= 2;
        let nn = BigInt::from(n);
        h.push(&h[n - 1] + BigRational::new(BigInt::one(), nn.clone()));
        g.push(&g[n - 1] + BigRational::new(pow2.clone(), nn));
        s.push(&g[n] / BigRational::from_integer(pow2.clone()));
    }
    Ok(GeoharmonicSeq { n_max, h, g, s })
}

/// `(1/n) Σ_{k=0}^{n−1} 1/C(n−1, k)`, the n-th Leibniz-triangle row sum.
pub fn s_from_leibniz_row(n: usize) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::InvalidParameter("row index must be at least 1".into()));
    }
    let mut binom = BigInt::one();
    let mut sum = BigRational::zero();
    for k in 0..n {
        sum += BigRational::new(BigInt::one(), binom.clone());
        // C(n−1, k+1) = C(n−1, k)·(n−1−k)/(k+1)
        binom = binom * BigInt::from(n - 1 - k) / BigInt::from(k + 1);
    }
    Ok(sum / BigRational::from_integer(BigInt::from(n)))
}

/// A partial sum next to the closed-form value it should approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCheck {
    pub partial: f64,
    pub closed: f64,
}

impl SeriesCheck {
    pub fn residual(&self) -> f64 {
        self.partial - self.closed
    }
}

const RADIUS_MARGIN: f64 = 0.05;

fn check_radius(func: &'static str, x: f64, radius: f64) -> Result<()> {
    if !(x.abs() <= radius - RADIUS_MARGIN) {
        return Err(Error::Domain {
            func,
            arg: x,
            reason: "outside the radius of convergence (with margin 0.05)",
        });
    }
    Ok(())
}

/// Float `H_n` and `s_n` for n = 1..=N, index 0 unused.
fn float_sequences(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut h = vec![0.0; n + 1];
    let mut s = vec![0.0; n + 1];
    for k in 1..=n {
        h[k] = h[k - 1] + 1.0 / k as f64;
        s[k] = 0.5 * s[k - 1] + 1.0 / k as f64;
    }
    (h, s)
}

/// Σ c_n yⁿ for n = 1..=N given c_n.
fn power_series(c: &[f64], y: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut p = 1.0;
    for &cn in &c[1..] {
        p *= y;
        acc.add(cn * p);
    }
    acc.value()
}

fn dl(y: f64) -> f64 {
    dilog(y).unwrap_or(f64::NAN)
}

/// `Σ H_n xⁿ = ln(1−x)/(x−1)`.
pub fn gf_h(x: f64, n: usize) -> Result<SeriesCheck> {
    check_radius("gf_h", x, 1.0)?;
    let (h, _) = float_sequences(n);
    Ok(SeriesCheck {
        partial: power_series(&h, x),
        closed: (-x).ln_1p() / (x - 1.0),
    })
}

/// `Σ G_n xⁿ = ln(1−2x)/(x−1)`; summed as `Σ s_n (2x)ⁿ`.
pub fn gf_g(x: f64, n: usize) -> Result<SeriesCheck> {
    check_radius("gf_g", x, 0.5)?;
    let (_, s) = float_sequences(n);
    Ok(SeriesCheck {
        partial: power_series(&s, 2.0 * x),
        closed: (-2.0 * x).ln_1p() / (x - 1.0),
    })
}

/// `Σ (H_n/n) xⁿ = ½ln²(1−x) + dilog(1−x)`.
pub fn gf_h_over_n(x: f64, n: usize) -> Result<SeriesCheck> {
    check_radius("gf_h_over_n", x, 1.0)?;
    let (h, _) = float_sequences(n);
    let c: Vec<f64> = h.iter().enumerate().map(|(k, v)| if k == 0 { 0.0 } else { v / k as f64 }).collect();
    let l = (-x).ln_1p();
    Ok(SeriesCheck {
        partial: power_series(&c, x),
        closed: 0.5 * l * l + dl(1.0 - x),
    })
}

/// `Σ (G_n/n) xⁿ = ½ln²(1−x) + dilog(1−x) + dilog((1−2x)/(1−x))`.
pub fn gf_g_over_n(x: f64, n: usize) -> Result<SeriesCheck> {
    check_radius("gf_g_over_n", x, 0.5)?;
    let (_, s) = float_sequences(n);
    let c: Vec<f64> = s.iter().enumerate().map(|(k, v)| if k == 0 { 0.0 } else { v / k as f64 }).collect();
    let l = (-x).ln_1p();
    Ok(SeriesCheck {
        partial: power_series(&c, 2.0 * x),
        closed: 0.5 * l * l + dl(1.0 - x) + dl((1.0 - 2.0 * x) / (1.0 - x)),
    })
}

const FACT_RANGE: f64 = 20.0;

fn check_fact_range(func: &'static str, x: f64) -> Result<()> {
    if !(x.abs() <= FACT_RANGE) {
        return Err(Error::Range {
            func,
            arg: x,
            cap: FACT_RANGE,
        });
    }
    Ok(())
}

/// `e^x Σ w_n xⁿ/(n·n!)` for n = 1..=N.
fn exp_weighted_series(x: f64, n: usize, w: impl Fn(usize) -> f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut t = 1.0;
    for k in 1..=n {
        t *= x / k as f64;
        acc.add(w(k) * t / k as f64);
    }
    x.exp() * acc.value()
}

/// `Σ (H_n/n!) xⁿ` against `e^x Σ (−1)^{n+1} xⁿ/(n·n!)`.
pub fn gf_h_over_fact(x: f64, n: usize) -> Result<SeriesCheck> {
    check_fact_range("gf_h_over_fact", x)?;
    let (h, _) = float_sequences(n);
    let mut acc = CompensatedSum::default();
    let mut t = 1.0;
    for (k, hk) in h.iter().enumerate().skip(1).take(n) {
        t *= x / k as f64;
        acc.add(hk * t);
    }
    let sign = |k: usize| if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(SeriesCheck {
        partial: acc.value(),
        closed: exp_weighted_series(x, n, sign),
    })
}

/// `Σ (G_n/n!) xⁿ` against `e^x Σ [1 + (−1)^{n+1}] xⁿ/(n·n!)`.
pub fn gf_g_over_fact(x: f64, n: usize) -> Result<SeriesCheck> {
    check_fact_range("gf_g_over_fact", x)?;
    let (_, s) = float_sequences(n);
    let mut acc = CompensatedSum::default();
    let mut t = 1.0;
    for (k, sk) in s.iter().enumerate().skip(1).take(n) {
        t *= 2.0 * x / k as f64;
        acc.add(sk * t);
    }
    let w = |k: usize| if k % 2 == 1 { 2.0 } else { 0.0 };
    Ok(SeriesCheck {
        partial: acc.value(),
        closed: exp_weighted_series(x, n, w),
    })
}

pub const G2_LIMIT: f64 = 4.0 * PI * PI / 9.0;

/// `Σ_{n≤N} G_n²/4ⁿ = Σ s_n²`, with `s_n = s_{n−1}/2 + 1/n` in floats.
/// Converges to 4π²/9 with a tail of about 4/N.
pub fn series_g2(n: usize) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut s = 0.0;
    for k in 1..=n {
        s = 0.5 * s + 1.0 / k as f64;
        acc.add(s * s);
    }
    acc.value()
}

/// Partial sums of `Σ s_n²` at each `n` in `checkpoints` (ascending).
pub fn series_g2_checkpoints(checkpoints: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = CompensatedSum::default();
    let mut s = 0.0;
    let mut k = 0;
    for &n in checkpoints {
        while k < n {
            k += 1;
            s = 0.5 * s + 1.0 / k as f64;
            acc.add(s * s);
        }
        out.push(acc.value());
    }
    out
}

/// `Σ H_n²/4ⁿ` against `2π²/9 + (8/3)[ln2·ln(2/3) − dilog(2/3)]`.
pub fn series_h2(n: usize) -> SeriesCheck {
    let (h, _) = float_sequences(n);
    let mut acc = CompensatedSum::default();
    let mut q = 1.0;
    for hk in &h[1..] {
        q *= 0.25;
        acc.add(hk * hk * q);
    }
    SeriesCheck {
        partial: acc.value(),
        closed: 2.0 * PI * PI / 9.0 + 8.0 / 3.0 * (LN_2 * (2.0f64 / 3.0).ln() - dl(2.0 / 3.0)),
    }
}

/// `Σ G_n H_n/4ⁿ = Σ s_n H_n/2ⁿ` against
/// `(4/3)[π²/6 + dilog(3/2) − ln2·ln(3/2)]`.
pub fn series_gh(n: usize) -> SeriesCheck {
    let (h, s) = float_sequences(n);
    let mut acc = CompensatedSum::default();
    let mut q = 1.0;
    for k in 1..=n {
        q *= 0.5;
        acc.add(s[k] * h[k] * q);
    }
    SeriesCheck {
        partial: acc.value(),
        closed: 4.0 / 3.0 * (PI * PI / 6.0 + dl(1.5) - LN_2 * 1.5f64.ln()),
    }
}

/// One row of the generating-function table, evaluated at `x`.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub label: &'static str,
    pub x: f64,
    pub terms: usize,
    pub check: SeriesCheck,
}

/// Every generating-function row at three sample points each.
pub fn gf_table() -> Result<Vec<TableRow>> {
    type Row = (&'static str, fn(f64, usize) -> Result<SeriesCheck>, [f64; 3], usize);
    let rows: [Row; 6] = [
        ("sum H_n x^n", gf_h, [0.5, -0.4, 0.8], 400),
        ("sum G_n x^n", gf_g, [0.25, -0.3, 0.4], 600),
        ("sum H_n/n x^n", gf_h_over_n, [0.5, -0.5, 0.75], 400),
        ("sum G_n/n x^n", gf_g_over_n, [0.25, -0.3, 0.4], 600),
        ("sum H_n/n! x^n", gf_h_over_fact, [1.0, -2.0, 5.0], 120),
        ("sum G_n/n! x^n", gf_g_over_fact, [2.0, -1.5, 4.0], 120),
    ];
    let mut out = Vec::new();
    for (label, f, xs, terms) in rows {
        for x in xs {
            out.push(TableRow {
                label,
                x,
                terms,
                check: f(x, terms)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values() {
        let s = build_sequences(4).unwrap();
        assert_eq!(s.h[3], q(11, 6));
        assert_eq!(s.g[3], q(20, 3));
        assert_eq!(s.s[3], q(5, 6));
        assert_eq!(s_from_leibniz_row(1).unwrap(), q(1, 1));
        assert_eq!(s_from_leibniz_row(2).unwrap(), q(1, 1));
        assert_eq!(s_from_leibniz_row(3).unwrap(), q(5, 6));
        assert_eq!(s_from_leibniz_row(4).unwrap(), q(2, 3));
        assert!(build_sequences(0).is_err());
        assert!(s_from_leibniz_row(0).is_err());
    }

    #[test]
    fn leibniz_rows_and_recurrence_exact() {
        let seq = build_sequences(64).unwrap();
        let half = q(1, 2);
        for n in 1..=64 {
            assert_eq!(s_from_leibniz_row(n).unwrap(), seq.s[n], "n={n}");
            assert_eq!(seq.s[n], &seq.s[n - 1] * &half + q(1, n as i64));
        }
    }

    #[test]
    fn generating_function_examples() {
        let r = gf_h(0.5, 200).unwrap();
        assert!((r.closed - 2.0 * LN_2).abs() < 1e-15);
        assert!(r.residual().abs() < 1e-10);
        let r = gf_g(0.25, 400).unwrap();
        assert!((r.closed - 4.0 / 3.0 * LN_2).abs() < 1e-15);
        assert!(r.residual().abs() < 1e-10);
        let r = gf_h_over_n(0.5, 400).unwrap();
        assert!((r.closed - PI * PI / 12.0).abs() < 1e-14);
        assert!(r.residual().abs() < 1e-10);
        let r = gf_g_over_n(0.25, 600).unwrap();
        assert!((r.closed - 0.675_246_356_464_872).abs() < 1e-13);
        assert!(r.residual().abs() < 1e-8);
        let r = gf_g_over_n(-0.3, 600).unwrap();
        assert!((r.closed + 0.464_323_286_040_959_3).abs() < 1e-13);
        for f in [gf_h, gf_g, gf_h_over_n, gf_g_over_n, gf_h_over_fact, gf_g_over_fact] {
            let r = f(0.0, 50).unwrap();
            assert_eq!(r.partial, 0.0);
            assert_eq!(r.closed, 0.0);
        }
        assert!(gf_g(0.46, 10).is_err());
        assert!(gf_h(0.96, 10).is_err());
        assert!(gf_h_over_fact(21.0, 10).is_err());
    }

    #[test]
    fn factorial_generating_functions() {
        let r = gf_h_over_fact(1.0, 60).unwrap();
        assert!((r.partial - 2.165_382_215_326_936_4).abs() < 1e-13);
        assert!(r.residual().abs() < 1e-10);
        let r = gf_g_over_fact(2.0, 80).unwrap();
        assert!(r.residual().abs() < 1e-9);
    }

    #[test]
    fn table_rows_agree() {
        for row in gf_table().unwrap() {
            assert!(row.check.residual().abs() < 1e-8, "{row:?}");
        }
    }

    #[test]
    fn squared_series() {
        assert_eq!(series_g2(1), 1.0);
        assert!((series_g2(3) - (2.0 + 25.0 / 36.0)).abs() < 1e-15);
        let r = series_h2(1);
        assert_eq!(r.partial, 0.25);
        assert!((series_h2(2).partial - 0.390_625).abs() < 1e-16);
        let r = series_h2(60);
        assert!((r.closed - 0.467_218_151_857_179_1).abs() < 1e-14);
        assert!(r.residual().abs() < 1e-12);
        assert!((series_gh(2).partial - 0.875).abs() < 1e-16);
        let r = series_gh(60);
        assert!((r.closed - 1.220_630_484_565_296_9).abs() < 1e-14);
        assert!(r.residual().abs() < 1e-12);
    }

    #[test]
    fn wrong_dilog_convention_is_detectable() {
        // Using Li₂(y) in place of Li₂(1−y) shifts the closed form visibly.
        let li = |y: f64| crate::specfun::li2(y).unwrap();
        let h2_wrong = 2.0 * PI * PI / 9.0 + 8.0 / 3.0 * (LN_2 * (2.0f64 / 3.0).ln() - li(2.0 / 3.0));
        assert!((series_h2(60).partial - h2_wrong).abs() > 0.1);
    }

    #[test]
    fn g2_partial_sums_monotone_and_bounded() {
        let cps = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
        let v = series_g2_checkpoints(&cps);
        for w in v.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(v[5] <= G2_LIMIT + 1e-12);
        assert!((v[5] - G2_LIMIT).abs() < 1e-5, "{}", v[5] - G2_LIMIT);
        assert_eq!(v[5], series_g2(1_000_000));
    }
}
