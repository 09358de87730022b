//! The difference-quotient operator `T(f)(x) = ∫ (f(t) − f(x))/(t − x) w(t) dt`,
//! its companion `U(f) = φf − T(f)`, the composition identity, and the two
//! solution formulas for `T_ρ f = g`.

use serde::Serialize;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::orthopoly::Polynomial;
use crate::quadrature::{difference_quotient_integral, integrate_weighted, Weight, WeightFn};
use crate::reducer::{ReducerProfile, SecondaryMeasure};

/// Sampled function on strictly increasing interior points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(GridFunction { points, values })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest `|values[i] − f(points[i])|`.
    pub fn max_deviation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| (v - f(x)).abs())
            .fold(0.0, f64::max)
    }

    /// Piecewise-linear interpolant, held constant outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let p = &self.points;
        match p.len() {
            0 => f64::NAN,
            1 => self.values[0],
            n => {
                if x <= p[0] {
                    return self.values[0];
                }
                if x >= p[n - 1] {
                    return self.values[n - 1];
                }
                let i = p.partition_point(|&q| q <= x) - 1;
                let s = (x - p[i]) / (p[i + 1] - p[i]);
                self.values[i] + s * (self.values[i + 1] - self.values[i])
            }
        }
    }
}

/// Barycentric form of the polynomial through a [`GridFunction`]'s samples.
/// Well conditioned on Chebyshev points; exact (to rounding) for
/// polynomials of degree below the number of points.
#[derive(Debug, Clone)]
pub struct PolyInterpolant {
    points: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
    scale: f64,
}

impl PolyInterpolant {
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = (self.points[0], self.points[self.points.len() - 1]);
        if x < lo || x > hi {
            // the quotient form cancels badly off the hull; use ℓ(x)·Σ w v/(x − p)
            let mut ell = 1.0;
            let mut acc = 0.0;
            for ((&p, &v), &w) in self.points.iter().zip(&self.values).zip(&self.weights) {
                let d = self.scale * (x - p);
                ell *= d;
                acc += w * v / d;
            }
            return ell * acc;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&p, &v), &w) in self.points.iter().zip(&self.values).zip(&self.weights) {
            let d = x - p;
            if d == 0.0 {
                return v;
            }
            let c = w / d;
            num += c * v;
            den += c;
        }
        num / den
    }
}

impl GridFunction {
    pub fn polynomial(&self) -> Result<PolyInterpolant> {
        if self.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        let (lo, hi) = (self.points[0], self.points[self.len() - 1]);
        // distances scaled by the capacity of the hull keep the products in range
        let scale = if hi > lo { 4.0 / (hi - lo) } else { 1.0 };
        let weights = self
            .points
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let prod: f64 = self
                    .points
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &xk)| scale * (xj - xk))
                    .product();
                1.0 / prod
            })
            .collect();
        Ok(PolyInterpolant {
            points: self.points.clone(),
            values: self.values.clone(),
            weights,
            scale,
        })
    }
}

/// `n` Chebyshev-spaced points strictly inside `(a, b)`.
pub fn chebyshev_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (1..=n)
        .map(|k| {
            let c = ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * c
        })
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// `n` evenly spaced points strictly inside `(a, b)`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| a + (b - a) * k as f64 / (n + 1) as f64)
        .collect()
}

pub fn apply_t<W, F>(w: &W, f: F, x: f64, tol: f64) -> Result<f64>
where
    W: Weight + ?Sized,
    F: Fn(f64) -> f64,
{
    difference_quotient_integral(f, x, w, tol).map(|r| r.value)
}

/// `U(f)(x) = φ(x)f(x) − T_ρ(f)(x)`.
pub fn apply_u<F: Fn(f64) -> f64>(
    rho: &Density,
    phi: &ReducerProfile,
    f: F,
    x: f64,
    tol: f64,
) -> Result<f64> {
    let fx = f(x);
    let t = apply_t(rho, &f, x, tol)?;
    Ok(phi.eval(x) * fx - t)
}

/// `μ/ρ = 1/(φ²/4 + π²ρ²)`, written so that it stays finite where ρ vanishes.
pub fn mu_over_rho(rho: &Density, phi: &ReducerProfile, x: f64) -> f64 {
    let r = rho.density(x);
    let p = phi.eval(x);
    1.0 / (0.25 * p * p + std::f64::consts::PI.powi(2) * r * r)
}

/// `T_ρ(φf − T_ρ f)(x) − (ρ/μ)(x) f(x)`.
///
/// `tol` bounds the outer integral; the inner `T_ρ f` evaluations run at
/// `tol/10` (error in the inner values enters the outer integral linearly).
pub fn verify_composition<F: Fn(f64) -> f64>(
    rho: &Density,
    phi: &ReducerProfile,
    mu: &SecondaryMeasure,
    f: F,
    x: f64,
    tol: f64,
) -> Result<f64> {
    let inner_tol = tol / 10.0;
    let u = |t: f64| apply_u(rho, phi, &f, t, inner_tol).unwrap_or(f64::NAN);
    let lhs = apply_t(rho, u, x, tol)?;
    let r = rho.density(x);
    Ok(lhs - r / mu.eval(x) * f(x))
}

/// `f(x) = (x − c₁)g(x) − T_μ(g)(x)` on the grid; μ enters unnormalised.
pub fn solve_integral_equation<G: Fn(f64) -> f64>(
    mu: &SecondaryMeasure,
    c1: f64,
    g: G,
    grid: &[f64],
    tol: f64,
) -> Result<GridFunction> {
    let values = grid
        .iter()
        .map(|&x| Ok((x - c1) * g(x) - apply_t(mu, &g, x, tol)?))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(grid.to_vec(), values)
}

/// `f(x) = φ(x)(μ/ρ)(x)g(x) − T_ρ((μ/ρ)g)(x)` on the grid.
pub fn solve_via_u<G: Fn(f64) -> f64>(
    rho: &Density,
    phi: &ReducerProfile,
    g: G,
    grid: &[f64],
    tol: f64,
) -> Result<GridFunction> {
    let h = |t: f64| mu_over_rho(rho, phi, t) * g(t);
    let values = grid
        .iter()
        .map(|&x| apply_u(rho, phi, h, x, tol))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(grid.to_vec(), values)
}

/// `T_ρ(f)(x) − g(x)` at each point; the back-substitution check of a solve.
pub fn back_substitution<F, G>(rho: &Density, f: F, g: G, points: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    points
        .iter()
        .map(|&x| Ok(apply_t(rho, &f, x, tol)? - g(x)))
        .collect()
}

/// `⟨U f, g⟩_ρ − ⟨f, T g⟩_ρ`.
pub fn adjoint_residual<F, G>(
    rho: &Density,
    phi: &ReducerProfile,
    f: F,
    g: G,
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let inner = tol / 10.0;
    let lhs = integrate_weighted(
        |t| apply_u(rho, phi, &f, t, inner).unwrap_or(f64::NAN) * g(t),
        rho,
        tol / 2.0,
    )?;
    let rhs = integrate_weighted(
        |t| f(t) * apply_t(rho, &g, t, inner).unwrap_or(f64::NAN),
        rho,
        tol / 2.0,
    )?;
    Ok(lhs.value - rhs.value)
}

/// `⟨f, g⟩_ρ − ⟨f, 1⟩_ρ⟨g, 1⟩_ρ − ⟨T f, T g⟩_μ`.
pub fn covariance_residual<F, G>(
    rho: &Density,
    mu: &SecondaryMeasure,
    f: F,
    g: G,
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let q = tol / 4.0;
    let fg = integrate_weighted(|t| f(t) * g(t), rho, q)?.value;
    let f1 = integrate_weighted(&f, rho, q)?.value;
    let g1 = integrate_weighted(&g, rho, q)?.value;
    let inner = q / 10.0;
    let tt = integrate_weighted(
        |t| {
            let a = apply_t(rho, &f, t, inner).unwrap_or(f64::NAN);
            let b = apply_t(rho, &g, t, inner).unwrap_or(f64::NAN);
            a * b
        },
        mu,
        q,
    )?
    .value;
    Ok(fg - f1 * g1 - tt)
}

/// `∫ U(f)² ρ − ∫ f² ρ²/μ`.
pub fn isometry_residual<F: Fn(f64) -> f64>(
    rho: &Density,
    phi: &ReducerProfile,
    f: F,
    tol: f64,
) -> Result<f64> {
    let inner = tol / 20.0;
    let lhs = integrate_weighted(
        |t| apply_u(rho, phi, &f, t, inner).unwrap_or(f64::NAN).powi(2),
        rho,
        tol / 2.0,
    )?;
    let rhs = integrate_weighted(
        |t| f(t).powi(2) / mu_over_rho(rho, phi, t),
        rho,
        tol / 2.0,
    )?;
    Ok(lhs.value - rhs.value)
}

/// `⟨U f, 1⟩_ρ`; zero because `U f` lies in the hyperplane orthogonal to 1.
pub fn hyperplane_residual<F: Fn(f64) -> f64>(
    rho: &Density,
    phi: &ReducerProfile,
    f: F,
    tol: f64,
) -> Result<f64> {
    integrate_weighted(
        |t| apply_u(rho, phi, &f, t, tol / 10.0).unwrap_or(f64::NAN),
        rho,
        tol,
    )
    .map(|r| r.value)
}

/// `∫T(f P)ρ − ∫T(f) P ρ − ∫ f T(P) ρ` for a polynomial `P`.
pub fn product_rule_residual<F: Fn(f64) -> f64>(
    rho: &Density,
    f: F,
    p: &Polynomial,
    tol: f64,
) -> Result<f64> {
    let inner = tol / 30.0;
    let q = tol / 3.0;
    let fp = |t: f64| f(t) * p.eval(t);
    let a = integrate_weighted(|t| apply_t(rho, fp, t, inner).unwrap_or(f64::NAN), rho, q)?;
    let b = integrate_weighted(
        |t| apply_t(rho, &f, t, inner).unwrap_or(f64::NAN) * p.eval(t),
        rho,
        q,
    )?;
    let c = integrate_weighted(
        |t| f(t) * apply_t(rho, |s| p.eval(s), t, inner).unwrap_or(f64::NAN),
        rho,
        q,
    )?;
    Ok(a.value - b.value - c.value)
}

/// Unit weight on an interval, handy for `T` with respect to Lebesgue measure.
pub fn lebesgue_on(interval: crate::quadrature::Interval) -> WeightFn<fn(f64) -> f64> {
    fn one(_: f64) -> f64 {
        1.0
    }
    WeightFn::new(interval, one as fn(f64) -> f64)
}
