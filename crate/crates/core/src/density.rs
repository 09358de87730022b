//! Probability densities and the built-in catalog of worked examples, each
//! with whatever closed forms are known: moments, reducer, secondary measure.

use std::f64::consts::{E, PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_range, integrate_weighted, Interval, Weight};
use crate::specfun::{dawson, dilog, ei, lerch_phi1, EULER_GAMMA};

/// Shared real-valued evaluator.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Regularity in the open interval. Every catalog density is smooth inside
/// its interval; the distinction records what happens at the ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    /// Locally Lipschitz inside, possibly with integrable singularities of
    /// the density or its derivative at the ends.
    Lipschitz,
    /// Continuously differentiable up to the (finite) ends.
    C1,
    /// Smooth on the closed interval.
    Smooth,
}

/// Closed-form moment generator.
#[derive(Clone)]
pub enum ClosedMoments {
    Rational(fn(usize) -> BigRational),
    Real(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

/// A probability density on an interval.
#[derive(Clone)]
pub struct Density {
    pub name: String,
    pub interval: Interval,
    pub eval: Evaluator,
    pub deriv: Option<Evaluator>,
    pub boundary_values: Option<(f64, f64)>,
    pub smoothness: Smoothness,
    pub reducible: bool,
    pub closed_moments: Option<ClosedMoments>,
    pub closed_reducer: Option<Evaluator>,
    pub closed_secondary: Option<Evaluator>,
    /// Upper cut-off used for integrals over a semi-infinite support.
    pub truncate_at: Option<f64>,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("smoothness", &self.smoothness)
            .field("reducible", &self.reducible)
            .field("closed_moments", &self.closed_moments.is_some())
            .field("closed_reducer", &self.closed_reducer.is_some())
            .field("closed_secondary", &self.closed_secondary.is_some())
            .finish()
    }
}

impl Density {
    /// Bare density with no closed forms; fields are filled in by the
    /// builder-style setters below.
    pub fn new(
        name: impl Into<String>,
        interval: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Density {
            name: name.into(),
            interval,
            eval: Arc::new(eval),
            deriv: None,
            boundary_values: None,
            smoothness: Smoothness::Lipschitz,
            reducible: true,
            closed_moments: None,
            closed_reducer: None,
            closed_secondary: None,
            truncate_at: None,
        }
    }

    pub fn with_deriv(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_boundary_values(mut self, at_a: f64, at_b: f64) -> Self {
        self.boundary_values = Some((at_a, at_b));
        self
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.smoothness = s;
        self
    }

    pub fn not_reducible(mut self) -> Self {
        self.reducible = false;
        self
    }

    pub fn with_moments(mut self, m: ClosedMoments) -> Self {
        self.closed_moments = Some(m);
        self
    }

    pub fn with_reducer(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_reducer = Some(Arc::new(phi));
        self
    }

    pub fn with_secondary(mut self, mu: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_secondary = Some(Arc::new(mu));
        self
    }

    pub fn density(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Refuses non-reducible densities with a typed error.
    pub fn require_reducible(&self) -> Result<()> {
        if self.reducible {
            Ok(())
        } else {
            Err(Error::NotReducible(self.name.clone()))
        }
    }
}

impl Weight for Density {
    fn support(&self) -> Interval {
        self.interval
    }

    fn weight(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    fn integration_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.interval.bounds();
        match self.truncate_at {
            Some(t) if hi.is_infinite() => (lo, t),
            _ => (lo, hi),
        }
    }
}

/// Stable catalog identifiers, in listing order.
pub const CATALOG_NAMES: [&str; 11] = [
    "lebesgue01",
    "chebyshev2",
    "exponential",
    "gaussian",
    "neg_log",
    "power_a",
    "log_inv_sqrt",
    "arccos",
    "scaled_exp",
    "chebyshev1",
    "jacobi_half",
];

/// Exponent used when `power_a` is requested without a parameter.
pub const POWER_A_DEFAULT: f64 = 0.3;

/// Truncation point for integrals against `e^{-x}`.
pub const EXPONENTIAL_CUTOFF: f64 = 60.0;

/// Look up a catalog density. `power_a` accepts an optional exponent as
/// `power_a(-0.4)`.
pub fn get_density(name: &str) -> Result<Density> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("power_a") {
        if rest.is_empty() {
            return power_a(POWER_A_DEFAULT);
        }
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownDensity(name.to_string()))?;
        let a: f64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::UnknownDensity(name.to_string()))?;
        return power_a(a);
    }
    match name {
        "lebesgue01" => Ok(lebesgue01()),
        "chebyshev2" => Ok(chebyshev2()),
        "exponential" => Ok(exponential()),
        "gaussian" => Ok(gaussian()),
        "neg_log" => Ok(neg_log()),
        "log_inv_sqrt" => Ok(log_inv_sqrt()),
        "arccos" => Ok(arccos()),
        "scaled_exp" => Ok(scaled_exp()),
        "chebyshev1" => Ok(chebyshev1()),
        "jacobi_half" => Ok(jacobi_half()),
        other => Err(Error::UnknownDensity(other.to_string())),
    }
}

/// Every catalog entry, `power_a` at its default exponent.
pub fn catalog() -> Vec<Density> {
    CATALOG_NAMES
        .iter()
        .map(|n| get_density(n).expect("catalog names resolve"))
        .collect()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(2k-1)!!`, with `(-1)!! = 1`.
fn double_factorial_odd(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn pow2(n: usize) -> BigInt {
    BigInt::one() << n
}

fn lebesgue_moment(n: usize) -> BigRational {
    ratio(1, n as i64 + 1)
}

fn exponential_moment(n: usize) -> BigRational {
    BigRational::from_integer(factorial(n))
}

fn gaussian_moment(n: usize) -> BigRational {
    if n % 2 == 1 {
        BigRational::zero()
    } else {
        BigRational::from_integer(double_factorial_odd(n / 2))
    }
}

/// Semicircle on [-1, 1]: `c_{2k} = Catalan(k)/4^k`.
fn chebyshev2_moment(n: usize) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let k = n / 2;
    let catalan = binomial(2 * k, k) / BigInt::from(k + 1);
    BigRational::new(catalan, pow2(2 * k))
}

/// Arcsine law on [-1, 1]: `c_{2k} = binom(2k, k)/4^k`.
fn chebyshev1_moment(n: usize) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let k = n / 2;
    BigRational::new(binomial(2 * k, k), pow2(2 * k))
}

/// Beta(1/2, 3/2): `c_n = (2n-1)!!/(2^n (n+1)!)`.
fn jacobi_half_moment(n: usize) -> BigRational {
    BigRational::new(double_factorial_odd(n), pow2(n) * factorial(n + 1))
}

fn neg_log_moment(n: usize) -> BigRational {
    let d = (n as i64 + 1) * (n as i64 + 1);
    ratio(1, d)
}

pub fn lebesgue01() -> Density {
    Density::new("lebesgue01", Interval::unit(), |_| 1.0)
        .with_deriv(|_| 0.0)
        .with_boundary_values(1.0, 1.0)
        .with_smoothness(Smoothness::Smooth)
        .with_moments(ClosedMoments::Rational(lebesgue_moment))
        .with_reducer(|x| 2.0 * (x / (1.0 - x)).ln())
}

pub fn chebyshev2() -> Density {
    let rho = |x: f64| 2.0 / PI * (1.0 - x * x).max(0.0).sqrt();
    Density::new("chebyshev2", Interval::Bounded { a: -1.0, b: 1.0 }, rho)
        .with_deriv(|x| -2.0 / PI * x / (1.0 - x * x).sqrt())
        .with_boundary_values(0.0, 0.0)
        .with_moments(ClosedMoments::Rational(chebyshev2_moment))
        .with_reducer(|x| 4.0 * x)
        .with_secondary(move |x| 0.25 * rho(x))
}

/// `∫_0^∞ e^{-t} ln|x - t| dt` by quadrature, split at the log singularity.
fn exponential_log_integral(x: f64) -> f64 {
    integrate_range(
        |t: f64| (-t).exp() * (x - t).abs().ln(),
        0.0,
        f64::INFINITY,
        &[x],
        1e-13,
    )
    .map(|r| r.value)
    .unwrap_or(f64::NAN)
}

/// The exponential-density reducer in its integral form
/// `2[ln x − ∫_0^∞ e^{-t} ln|x − t| dt]`.
pub fn exponential_reducer_integral(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    2.0 * (x.ln() - exponential_log_integral(x))
}

/// The same reducer written as `2 e^{-x} Ei(x)`; kept as a diagnostic.
pub fn exponential_reducer_ei(x: f64) -> f64 {
    ei(x).map(|v| 2.0 * (-x).exp() * v).unwrap_or(f64::NAN)
}

pub fn exponential() -> Density {
    let mut d = Density::new("exponential", Interval::SemiInfinite { a: 0.0 }, |x: f64| {
        if x < 0.0 {
            0.0
        } else {
            (-x).exp()
        }
    })
    .with_deriv(|x: f64| -(-x).exp())
    .with_boundary_values(1.0, 0.0)
    .with_smoothness(Smoothness::Smooth)
    .with_moments(ClosedMoments::Rational(exponential_moment))
    .with_reducer(exponential_reducer_integral);
    d.truncate_at = Some(EXPONENTIAL_CUTOFF);
    d
}

pub fn gaussian() -> Density {
    let norm = 1.0 / (2.0 * PI).sqrt();
    Density::new("gaussian", Interval::RealLine, move |x: f64| {
        norm * (-0.5 * x * x).exp()
    })
    .with_deriv(move |x: f64| -x * norm * (-0.5 * x * x).exp())
    .with_smoothness(Smoothness::Smooth)
    .with_moments(ClosedMoments::Rational(gaussian_moment))
    // √(2π) e^{-x²/2} erfi(x/√2) = 2√2 F(x/√2) with F Dawson's integral
    .with_reducer(|x: f64| 2.0 * SQRT_2 * dawson(x / SQRT_2))
}

pub fn neg_log() -> Density {
    Density::new("neg_log", Interval::unit(), |x: f64| -x.ln())
        .with_deriv(|x: f64| -1.0 / x)
        .with_moments(ClosedMoments::Rational(neg_log_moment))
        .with_reducer(|x: f64| {
            let l = x.ln();
            let d = dilog(1.0 - x).unwrap_or(f64::NAN);
            2.0 * PI * PI / 3.0 - l * l - 2.0 * d
        })
}

/// `ρ(x) = (a+1) x^a` on [0, 1], for `a ∈ (−1, 1)` away from 0.
pub fn power_a(a: f64) -> Result<Density> {
    if !(a > -1.0 && a < 1.0) || a.fract() == 0.0 || (a * PI).tan().abs() < 1e-3 {
        return Err(Error::InvalidParameter(format!(
            "power_a exponent must lie in (-1, 1), non-integer, with |tan(a·pi)| >= 1e-3; got {a}"
        )));
    }
    let k = a + 1.0;
    let cot = 1.0 / (a * PI).tan();
    let mut d = Density::new("power_a", Interval::unit(), move |x: f64| k * x.powf(a))
        .with_deriv(move |x: f64| a * k * x.powf(a - 1.0))
        .with_moments(ClosedMoments::Real(Arc::new(move |n| k / (n as f64 + k))))
        .with_reducer(move |x: f64| {
            let l = lerch_phi1(x, -a).unwrap_or(f64::NAN);
            2.0 * k * (PI * x.powf(a) * cot + l)
        });
    if a > 0.0 {
        d = d.with_boundary_values(0.0, k);
    }
    d.name = if a == POWER_A_DEFAULT {
        "power_a".to_string()
    } else {
        format!("power_a({a})")
    };
    Ok(d)
}

pub fn log_inv_sqrt() -> Density {
    Density::new("log_inv_sqrt", Interval::unit(), |x: f64| {
        (1.0 + 1.0 / x.sqrt()).ln()
    })
    .with_deriv(|x: f64| -1.0 / (2.0 * x * (x.sqrt() + 1.0)))
    .with_reducer(|x: f64| {
        let s = 1.0 / x.sqrt();
        -2.0 * (s + 1.0).ln() * (s - 1.0).ln()
    })
}

pub fn arccos() -> Density {
    Density::new("arccos", Interval::unit(), |x: f64| {
        2.0 / PI * (1.0 - 2.0 * x).clamp(-1.0, 1.0).acos()
    })
    .with_deriv(|x: f64| 2.0 / (PI * (x * (1.0 - x)).sqrt()))
    .with_boundary_values(0.0, 2.0)
    .with_reducer(|x: f64| -4.0 * (4.0 - 4.0 * x).ln())
}

pub fn scaled_exp() -> Density {
    let k = 1.0 / (E - 1.0);
    Density::new("scaled_exp", Interval::unit(), move |x: f64| k * x.exp())
        .with_deriv(move |x: f64| k * x.exp())
        .with_boundary_values(k, E * k)
        .with_smoothness(Smoothness::Smooth)
        .with_reducer(move |x: f64| {
            match (ei(1.0 - x), ei(-x)) {
                (Ok(p), Ok(q)) => -2.0 * x.exp() * k * (p - q),
                _ => f64::NAN,
            }
        })
}

pub fn chebyshev1() -> Density {
    Density::new("chebyshev1", Interval::Bounded { a: -1.0, b: 1.0 }, |x: f64| {
        1.0 / (PI * (1.0 - x * x).sqrt())
    })
    .with_deriv(|x: f64| x / (PI * (1.0 - x * x).powf(1.5)))
    .with_moments(ClosedMoments::Rational(chebyshev1_moment))
    .not_reducible()
}

pub fn jacobi_half() -> Density {
    Density::new("jacobi_half", Interval::unit(), |x: f64| {
        2.0 / PI * ((1.0 - x) / x).sqrt()
    })
    .with_deriv(|x: f64| -1.0 / (PI * x * x * ((1.0 - x) / x).sqrt()))
    .with_moments(ClosedMoments::Rational(jacobi_half_moment))
    .not_reducible()
}

/// Moments `c_0..c_N` of a density.
#[derive(Debug, Clone, Serialize)]
pub struct MomentTable {
    pub source: String,
    pub c: Vec<f64>,
    #[serde(skip)]
    pub exact: Option<Vec<BigRational>>,
}

/// Largest moment order served from exact closed forms.
pub const EXACT_MOMENT_CAP: usize = 60;
/// Largest moment order computed by quadrature.
pub const NUMERIC_MOMENT_CAP: usize = 16;

impl MomentTable {
    pub fn from_exact(source: impl Into<String>, exact: Vec<BigRational>) -> Self {
        let c = exact.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
        MomentTable {
            source: source.into(),
            c,
            exact: Some(exact),
        }
    }

    pub fn from_values(source: impl Into<String>, c: Vec<f64>) -> Self {
        MomentTable {
            source: source.into(),
            c,
            exact: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn c1(&self) -> f64 {
        self.c.get(1).copied().unwrap_or(f64::NAN)
    }

    /// Cholesky test of `[c_{i+j}]_{0≤i,j≤m}`.
    pub fn hankel_positive(&self, m: usize) -> bool {
        if 2 * m >= self.c.len() {
            return false;
        }
        let n = m + 1;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.c[i + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return false;
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        true
    }
}

/// Moments `c_0..c_N`: exact when the density carries a rational closed
/// form, otherwise closed-form reals or quadrature to `tol`.
pub fn moments(rho: &Density, n: usize, tol: f64) -> Result<MomentTable> {
    match &rho.closed_moments {
        Some(ClosedMoments::Rational(gen)) => {
            if n > EXACT_MOMENT_CAP {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: EXACT_MOMENT_CAP,
                });
            }
            Ok(MomentTable::from_exact(
                rho.name.clone(),
                (0..=n).map(gen).collect(),
            ))
        }
        Some(ClosedMoments::Real(gen)) => {
            if n > EXACT_MOMENT_CAP {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: EXACT_MOMENT_CAP,
                });
            }
            Ok(MomentTable::from_values(
                rho.name.clone(),
                (0..=n).map(|k| gen(k)).collect(),
            ))
        }
        None => {
            if n > NUMERIC_MOMENT_CAP {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: NUMERIC_MOMENT_CAP,
                });
            }
            let mut c = Vec::with_capacity(n + 1);
            c.push(1.0);
            for k in 1..=n {
                let r = integrate_weighted(|t: f64| t.powi(k as i32), rho, tol)?;
                c.push(r.value);
            }
            Ok(MomentTable::from_values(rho.name.clone(), c))
        }
    }
}

/// `∫_I μ`, the total mass of a secondary measure.
pub fn secondary_mass<F: Fn(f64) -> f64>(rho: &Density, mu: F, tol: f64) -> Result<f64> {
    let (lo, hi) = rho.integration_bounds();
    integrate_range(mu, lo, hi, &[], tol).map(|r| r.value)
}

/// `∫_x^∞ e^{-t} ln(t − x) dt = −γ e^{-x}`; used only to cross-check the
/// quadrature behind [`exponential_reducer_integral`].
pub fn exponential_right_log_integral(x: f64) -> f64 {
    -EULER_GAMMA * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_weighted;

    fn interior_grid(d: &Density, n: usize) -> Vec<f64> {
        let (lo, hi) = match d.interval {
            Interval::Bounded { a, b } => (a, b),
            Interval::SemiInfinite { a } => (a, a + 20.0),
            Interval::RealLine => (-8.0, 8.0),
        };
        (1..=n)
            .map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64)
            .collect()
    }

    #[test]
    fn every_catalog_density_is_normalised_and_nonnegative() {
        for d in catalog() {
            let mass = integrate_weighted(|_| 1.0, &d, 1e-11).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-9, "{}: mass {mass}", d.name);
            for x in interior_grid(&d, 40) {
                assert!(d.density(x) >= 0.0, "{} negative at {x}", d.name);
                if let Some(mu) = &d.closed_secondary {
                    assert!(mu(x) >= 0.0);
                }
            }
        }
    }

    #[test]
    fn names_and_lookup() {
        assert_eq!(catalog().len(), 11);
        assert!(matches!(get_density("nosuch"), Err(Error::UnknownDensity(_))));
        let d = get_density("power_a(-0.4)").unwrap();
        assert_eq!(d.name, "power_a(-0.4)");
        assert!(get_density("power_a(1)").is_err());
        assert!(get_density("power_a(0.0002)").is_err());
        assert!(!get_density("chebyshev1").unwrap().reducible);
        assert!(!get_density("jacobi_half").unwrap().reducible);
        assert!(matches!(
            chebyshev1().require_reducible(),
            Err(Error::NotReducible(_))
        ));
    }

    #[test]
    fn closed_reducer_spot_values() {
        let phi = lebesgue01().closed_reducer.unwrap();
        assert_eq!(phi(0.5), 0.0);
        assert!((phi(0.75) - 2.0 * 3f64.ln()).abs() < 1e-15);
        let phi = chebyshev2().closed_reducer.unwrap();
        assert_eq!(phi(0.25), 1.0);
    }

    #[test]
    fn chebyshev2_secondary_is_quarter_density() {
        let d = chebyshev2();
        let mu = d.closed_secondary.clone().unwrap();
        for x in interior_grid(&d, 50) {
            assert!((mu(x) - d.density(x) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_moments() {
        let m = moments(&lebesgue01(), 4, 1e-12).unwrap();
        assert!(m.is_exact());
        assert_eq!(
            m.exact.as_ref().unwrap(),
            &vec![ratio(1, 1), ratio(1, 2), ratio(1, 3), ratio(1, 4), ratio(1, 5)]
        );
        let m = moments(&exponential(), 3, 1e-12).unwrap();
        assert_eq!(m.c, vec![1.0, 1.0, 2.0, 6.0]);
        let m = moments(&gaussian(), 4, 1e-12).unwrap();
        assert_eq!(m.c, vec![1.0, 0.0, 1.0, 0.0, 3.0]);
        let m = moments(&chebyshev2(), 4, 1e-12).unwrap();
        assert_eq!(m.c, vec![1.0, 0.0, 0.25, 0.0, 0.125]);
        assert!(moments(&lebesgue01(), 61, 1e-12).is_err());
    }

    #[test]
    fn closed_moments_agree_with_quadrature() {
        for d in catalog() {
            if d.closed_moments.is_none() {
                continue;
            }
            let m = moments(&d, 8, 1e-12).unwrap();
            assert_eq!(m.c[0], 1.0);
            for (k, ck) in m.c.iter().enumerate() {
                let q = integrate_weighted(|t: f64| t.powi(k as i32), &d, 1e-11)
                    .unwrap()
                    .value;
                assert!((q - ck).abs() < 1e-8 * ck.abs().max(1.0), "{} c_{k}: {q} vs {ck}", d.name);
            }
        }
    }

    #[test]
    fn numeric_moments_and_hankel_positivity() {
        let m = moments(&arccos(), 10, 1e-13).unwrap();
        assert!(!m.is_exact());
        assert_eq!(m.c[0], 1.0);
        assert!(m.hankel_positive(5));
        assert!(moments(&arccos(), 17, 1e-12).is_err());
        let m = moments(&lebesgue01(), 20, 1e-12).unwrap();
        assert!(m.hankel_positive(6));
        // a fake sequence with negative variance
        let bad = MomentTable::from_values("bad", vec![1.0, 1.0, 0.5, 0.5, 0.5]);
        assert!(!bad.hankel_positive(1));
    }

    #[test]
    fn exponential_reducer_forms_agree() {
        for &x in &[0.05, 0.3, 1.0, 2.5, 7.0, 20.0] {
            let a = exponential_reducer_integral(x);
            let b = exponential_reducer_ei(x);
            assert!((a - b).abs() < 1e-10, "x={x}: {a} vs {b}");
            let right = integrate_range(
                |t: f64| (-t).exp() * (t - x).ln(),
                x,
                f64::INFINITY,
                &[],
                1e-13,
            )
            .unwrap()
            .value;
            assert!((right - exponential_right_log_integral(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn secondary_mass_examples() {
        let leb = lebesgue01();
        let mu = |x: f64| {
            let l = (x / (1.0 - x)).ln();
            1.0 / (l * l + PI * PI)
        };
        assert!((secondary_mass(&leb, mu, 1e-12).unwrap() - 1.0 / 12.0).abs() < 1e-9);
        let c2 = chebyshev2();
        let mu = c2.closed_secondary.clone().unwrap();
        assert!((secondary_mass(&c2, |x| mu(x), 1e-12).unwrap() - 0.25).abs() < 1e-9);
    }
}
