//! Real special functions used by the closed-form reducers and the
//! geoharmonic series table: the exponential integral `Ei`, the imaginary
//! error function `erfi` (and Dawson's integral), the dilogarithm and the
//! `s = 1` slice of the Lerch transcendent.
//!
//! All functions are pure and allocation free.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = f64::EPSILON;

/// Value of a special function together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_abs_error: f64,
}

impl SpecFunResult {
    fn new(value: f64, est_abs_error: f64) -> Self {
        debug_assert!(est_abs_error.is_finite() && est_abs_error >= 0.0);
        SpecFunResult {
            value,
            est_abs_error,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// Above this the power series for Ei loses nothing, but the asymptotic
// expansion is already accurate to working precision and far cheaper.
const EI_SERIES_CAP: f64 = 40.0;

/// Exponential integral `Ei(x)` (principal value for `x > 0`).
pub fn ei(x: f64) -> Result<f64> {
    ei_with_error(x).map(|r| r.value)
}

pub fn ei_with_error(x: f64) -> Result<SpecFunResult> {
    if x == 0.0 || x.is_nan() {
        return Err(Error::Domain {
            func: "ei",
            arg: x,
            reason: "logarithmic singularity at 0",
        });
    }
    if x > 0.0 {
        if x <= EI_SERIES_CAP {
            Ok(ei_series(x))
        } else {
            Ok(ei_asymptotic(x))
        }
    } else if x >= -1.0 {
        Ok(ei_series(x))
    } else {
        let e1 = e1_continued_fraction(-x);
        Ok(SpecFunResult::new(-e1, 4.0 * EPS * e1))
    }
}

fn ei_series(x: f64) -> SpecFunResult {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    let mut max_term: f64 = 0.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= x / kf;
        let contrib = term / kf;
        acc.add(contrib);
        max_term = max_term.max(contrib.abs());
        if contrib.abs() <= 1e-18 * acc.value().abs().max(1e-300) && kf > x.abs() {
            break;
        }
    }
    let value = EULER_GAMMA + x.abs().ln() + acc.value();
    // cancellation in the alternating case scales with the largest term
    let err = 8.0 * EPS * (max_term + value.abs() + x.abs().ln().abs() + 1.0);
    SpecFunResult::new(value, err)
}

fn ei_asymptotic(x: f64) -> SpecFunResult {
    // e^x/x * sum k!/x^k, truncated at the smallest term
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    let mut last = term;
    for k in 1..200 {
        let next = term * k as f64 / x;
        if next >= last {
            break;
        }
        term = next;
        acc.add(term);
        last = term;
        if term < EPS * 1e-3 {
            break;
        }
    }
    let scale = x.exp() / x;
    let value = scale * acc.value();
    SpecFunResult::new(value, scale * (last + 4.0 * EPS * acc.value()))
}

/// `E1(x)` for `x > 1` by the modified Lentz continued fraction.
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h * (-x).exp()
}

/// Largest |x| accepted by [`erfi`]; `e^{x^2}` beyond it leaves the
/// comfortable part of the double range.
pub const ERFI_CAP: f64 = 10.0;

/// Imaginary error function `erfi(x) = (2/√π) ∫_0^x e^{t²} dt`.
pub fn erfi(x: f64) -> Result<f64> {
    erfi_with_error(x).map(|r| r.value)
}

pub fn erfi_with_error(x: f64) -> Result<SpecFunResult> {
    if x.is_nan() || x.abs() > ERFI_CAP {
        return Err(Error::Range {
            func: "erfi",
            arg: x,
            cap: ERFI_CAP,
        });
    }
    let ax = x.abs();
    let x2 = ax * ax;
    let mut acc = CompensatedSum::default();
    // t_k = ax^{2k+1}/k!
    let mut t = ax;
    let mut k = 0usize;
    loop {
        let contrib = t / (2 * k + 1) as f64;
        acc.add(contrib);
        if contrib <= 1e-18 * acc.value() || ax == 0.0 {
            break;
        }
        k += 1;
        t *= x2 / k as f64;
    }
    let value = 2.0 / PI.sqrt() * acc.value();
    let n_terms = (k + 1) as f64;
    Ok(SpecFunResult::new(
        value.copysign(x),
        4.0 * EPS * n_terms.sqrt() * value.abs(),
    ))
}

/// Dawson's integral `F(x) = e^{-x²} ∫_0^x e^{t²} dt`, valid for every real
/// `x`; equals `(√π/2) e^{-x²} erfi(x)`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= ERFI_CAP {
        // within the cap the series for erfi is accurate to a few ulps
        let e = erfi_with_error(ax).map(|r| r.value).unwrap_or(f64::NAN);
        0.5 * PI.sqrt() * (-ax * ax).exp() * e
    } else {
        // F(x) ~ 1/(2x) Σ (2k-1)!!/(2x²)^k
        let inv = 1.0 / (2.0 * ax * ax);
        let mut term = 1.0;
        let mut acc = CompensatedSum::default();
        acc.add(term);
        for k in 1..60 {
            let next = term * (2 * k - 1) as f64 * inv;
            if next >= term || next < 1e-18 {
                break;
            }
            term = next;
            acc.add(term);
        }
        acc.value() / (2.0 * ax)
    };
    v.copysign(x)
}

/// Classical dilogarithm `Li₂(x) = Σ_{k≥1} x^k/k²` for `x ≤ 1`.
pub fn li2(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return Err(Error::Domain {
            func: "li2",
            arg: x,
            reason: "Li2 is real only for x <= 1",
        });
    }
    Ok(li2_real(x))
}

fn li2_real(x: f64) -> f64 {
    const ZETA2: f64 = PI * PI / 6.0;
    if x == 1.0 {
        ZETA2
    } else if x == 0.0 {
        0.0
    } else if x < -1.0 {
        // inversion
        let l = (-x).ln();
        -ZETA2 - 0.5 * l * l - li2_real(1.0 / x)
    } else if x < 0.0 {
        // Landen: maps [-1, 0) onto (0, 1/2]
        let l = (1.0 - x).ln();
        -li2_real(x / (x - 1.0)) - 0.5 * l * l
    } else if x <= 0.5 {
        li2_series(x)
    } else {
        // reflection
        ZETA2 - x.ln() * (1.0 - x).ln() - li2_series(1.0 - x)
    }
}

fn li2_series(x: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut p = 1.0;
    for k in 1..200 {
        p *= x;
        let kf = k as f64;
        let term = p / (kf * kf);
        acc.add(term);
        if term < 1e-18 * acc.value() {
            break;
        }
    }
    acc.value()
}

/// Maple-style `dilog(y) = Li₂(1 − y)` for `y ≥ 0`.
pub fn dilog(y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::Domain {
            func: "dilog",
            arg: y,
            reason: "dilog(y) = Li2(1 - y) requires y >= 0",
        });
    }
    Ok(li2_real(1.0 - y))
}

/// `Φ(x, 1, α) = Σ_{k≥0} x^k/(k + α)` for `0 ≤ x < 1`.
pub fn lerch_phi1(x: f64, alpha: f64) -> Result<f64> {
    lerch_phi1_with_error(x, alpha).map(|r| r.value)
}

pub fn lerch_phi1_with_error(x: f64, alpha: f64) -> Result<SpecFunResult> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            func: "lerch_phi1",
            arg: x,
            reason: "requires 0 <= x < 1",
        });
    }
    if !alpha.is_finite() || (alpha <= 0.0 && alpha.fract() == 0.0) {
        return Err(Error::Domain {
            func: "lerch_phi1",
            arg: alpha,
            reason: "pole at non-positive integer alpha",
        });
    }
    // shift alpha to beta = alpha + m > 0
    let mut head = CompensatedSum::default();
    let mut beta = alpha;
    let mut xp = 1.0;
    while beta <= 0.0 {
        head.add(xp / beta);
        xp *= x;
        beta += 1.0;
    }
    let tail = if x <= 0.5 || beta > LERCH_LOG_BETA_CAP {
        lerch_series(x, beta)
    } else {
        lerch_log_expansion(x, beta)
    };
    Ok(SpecFunResult::new(
        head.value() + xp * tail.value,
        xp * tail.est_abs_error + 4.0 * EPS * head.value().abs(),
    ))
}

/// Above this β the log expansion loses digits to `x^{-β}`-sized terms and
/// the plain series is used instead.
const LERCH_LOG_BETA_CAP: f64 = 4.0;

fn lerch_series(x: f64, beta: f64) -> SpecFunResult {
    let mut acc = CompensatedSum::default();
    let mut p = 1.0;
    // x^k < 1e-18 once k > 41.5/(-ln x)
    let cap = (45.0 / -x.ln()).min(1e8) as usize + 100;
    for k in 0..cap {
        let term = p / (k as f64 + beta);
        acc.add(term);
        if term < 1e-18 * acc.value().abs() {
            break;
        }
        p *= x;
    }
    SpecFunResult::new(acc.value(), 4.0 * EPS * acc.value().abs())
}

/// Bernoulli numbers `B_0..B_{N}` (with `B_1 = −1/2`), exact then rounded.
fn bernoulli_numbers() -> &'static [f64] {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| {
        const N: usize = 48;
        let mut b: Vec<BigRational> = Vec::with_capacity(N + 1);
        b.push(BigRational::from_integer(1.into()));
        for m in 1..=N {
            // Σ_{k=0}^{m} C(m+1, k) B_k = 0
            let mut acc = BigRational::zero();
            let mut binom = BigInt::from(1);
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    })
}

/// Digamma ψ(x) for x > 0: upward recurrence, then the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "digamma",
            arg: x,
            reason: "implemented for positive arguments",
        });
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 12.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let b = bernoulli_numbers();
    let inv2 = 1.0 / (y * y);
    let mut p = inv2;
    let mut tail = 0.0;
    for k in 1..=8 {
        tail += b[2 * k] / (2 * k) as f64 * p;
        p *= inv2;
    }
    Ok(shift + y.ln() - 0.5 / y - tail)
}

/// `Φ(x, 1, β) = x^{−β}[−ln w − γ − ψ(β) − Σ_{n≥1} B_n(β)(−w)ⁿ/(n·n!)]` with
/// `w = −ln x`, convergent for `w < 2π`. Unlike direct summation or
/// quadrature it stays accurate as `x → 1`, where Φ grows like `−ln w`.
fn lerch_log_expansion(x: f64, beta: f64) -> SpecFunResult {
    let w = -x.ln();
    let b = bernoulli_numbers();
    let mut acc = CompensatedSum::default();
    acc.add(-w.ln());
    acc.add(-EULER_GAMMA);
    acc.add(-digamma(beta).unwrap_or(f64::NAN));
    let mut scale = 1.0; // (−w)ⁿ/n!
    let mut bmax: f64 = 0.0;
    let mut small = 0;
    for n in 1..b.len() {
        scale *= -w / n as f64;
        // B_n(β) = Σ_k C(n, k) B_k β^{n−k}
        let mut bp = 0.0;
        let mut binom = 1.0;
        for (k, bk) in b.iter().enumerate().take(n + 1) {
            bp += binom * bk * beta.powi((n - k) as i32);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        let term = -bp / n as f64 * scale;
        bmax = bmax.max(term.abs());
        acc.add(term);
        // odd B_n(β) vanish at β = 1/2, so one tiny term is not enough
        if term.abs() < 1e-18 * acc.value().abs() {
            small += 1;
            if small == 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let value = acc.value() * x.powf(-beta);
    SpecFunResult::new(value, 8.0 * EPS * (value.abs() + bmax))
}
