//! Adaptive Gauss–Legendre integration on bounded, semi-infinite and
//! doubly infinite intervals, and the regularised difference-quotient
//! integral `∫ (f(t) − f(x))/(t − x) w(t) dt` that underlies the
//! secondary-polynomial operator.
//!
//! Panels use a 15-point Gauss–Legendre rule. Each half of a bisected panel
//! is charged the full discrepancy between the parent rule and the sum of the
//! two halves (near an endpoint singularity the singular half carries almost
//! all of it); the panel with the largest estimate is bisected until the
//! summed estimate meets the (absolute) tolerance. Final sums are formed in
//! increasing panel order with compensated accumulation, so results do not
//! depend on the refinement history.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

/// Number of nodes of the base Gauss–Legendre rule.
pub const GL_ORDER: usize = 15;
/// Maximum bisection depth of any panel.
pub const MAX_DEPTH: u32 = 40;
/// Hard cap on the number of live panels.
pub const MAX_PANELS: usize = 60_000;
/// Relative half-width of the window around the removable singularity.
pub const H_SWITCH_REL: f64 = 1e-6;

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interval {
    Bounded { a: f64, b: f64 },
    SemiInfinite { a: f64 },
    RealLine,
}

impl Interval {
    pub fn bounded(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!(
                "bounded interval needs finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval::Bounded { a, b })
    }

    pub fn unit() -> Self {
        Interval::Bounded { a: 0.0, b: 1.0 }
    }

    /// Lower and upper end, with infinities for unbounded ends.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Interval::Bounded { a, b } => (a, b),
            Interval::SemiInfinite { a } => (a, f64::INFINITY),
            Interval::RealLine => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Interval::Bounded { .. })
    }

    pub fn width(&self) -> Option<f64> {
        match *self {
            Interval::Bounded { a, b } => Some(b - a),
            _ => None,
        }
    }

    /// True when `x` lies strictly inside the interval.
    pub fn contains_interior(&self, x: f64) -> bool {
        let (lo, hi) = self.bounds();
        x > lo && x < hi
    }

    /// True when `z` lies in the closure of the interval.
    pub fn contains_closure(&self, z: f64) -> bool {
        let (lo, hi) = self.bounds();
        z >= lo && z <= hi
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Interval::Bounded { a, b } => write!(f, "[{a}, {b}]"),
            Interval::SemiInfinite { a } => write!(f, "[{a}, inf)"),
            Interval::RealLine => write!(f, "(-inf, inf)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    fn combine(parts: &[QuadResult]) -> QuadResult {
        let mut acc = CompensatedSum::default();
        let mut err = 0.0;
        let mut evals = 0;
        for p in parts {
            acc.add(p.value);
            err += p.est_abs_error;
            evals += p.evaluations;
        }
        QuadResult {
            value: acc.value(),
            est_abs_error: err,
            evaluations: evals,
        }
    }
}

/// A nonnegative weight function carried by an interval: a density, a
/// secondary measure, or any ad-hoc closure wrapped in [`WeightFn`].
pub trait Weight {
    fn support(&self) -> Interval;
    fn weight(&self, t: f64) -> f64;

    /// Range actually integrated over. Defaults to the support; a weight
    /// with negligible tail mass may truncate it.
    fn integration_bounds(&self) -> (f64, f64) {
        self.support().bounds()
    }
}

/// Closure-backed weight.
pub struct WeightFn<F> {
    pub interval: Interval,
    pub f: F,
}

impl<F: Fn(f64) -> f64> WeightFn<F> {
    pub fn new(interval: Interval, f: F) -> Self {
        WeightFn { interval, f }
    }
}

impl<F: Fn(f64) -> f64> Weight for WeightFn<F> {
    fn support(&self) -> Interval {
        self.interval
    }
    fn weight(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

impl<W: Weight + ?Sized> Weight for &W {
    fn support(&self) -> Interval {
        (**self).support()
    }
    fn weight(&self, t: f64) -> f64 {
        (**self).weight(t)
    }
    fn integration_bounds(&self) -> (f64, f64) {
        (**self).integration_bounds()
    }
}

struct GaussRule {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

fn gauss_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Newton iteration on P_n from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussRule { nodes, weights }
    })
}

#[derive(Debug, Clone, Copy)]
enum Map {
    /// `t = a + w(3u² − 2u³)`, u in [0, 1]: flattens algebraic and
    /// logarithmic singularities at both ends of a bounded range.
    Smooth { a: f64, b: f64 },
    /// `t = a + u/(1-u)`, u in [0, 1)
    Up(f64),
    /// `t = b - u/(1-u)`, u in [0, 1)
    Down(f64),
    /// `t = u/(1-u²)`, u in (-1, 1)
    Whole,
}

impl Map {
    fn t(&self, u: f64) -> f64 {
        match *self {
            Map::Smooth { a, b } => {
                let w = b - a;
                if u <= 0.5 {
                    a + w * u * u * (3.0 - 2.0 * u)
                } else {
                    let v = 1.0 - u;
                    b - w * v * v * (1.0 + 2.0 * u)
                }
            }
            Map::Up(a) => a + u / (1.0 - u),
            Map::Down(b) => b - u / (1.0 - u),
            Map::Whole => u / (1.0 - u * u),
        }
    }

    fn jac(&self, u: f64) -> f64 {
        match *self {
            Map::Smooth { a, b } => 6.0 * (b - a) * u * (1.0 - u),
            Map::Up(_) | Map::Down(_) => {
                let s = 1.0 - u;
                1.0 / (s * s)
            }
            Map::Whole => {
                let s = 1.0 - u * u;
                (1.0 + u * u) / (s * s)
            }
        }
    }

    fn at_end(&self, t: f64) -> bool {
        match *self {
            Map::Smooth { a, b } => t <= a || t >= b,
            Map::Up(a) => t <= a,
            Map::Down(b) => t >= b,
            Map::Whole => false,
        }
    }

    fn inverse(&self, t: f64) -> f64 {
        match *self {
            Map::Smooth { a, b } => {
                let s = (t - a) / (b - a);
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid * mid * (3.0 - 2.0 * mid) < s {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= f64::EPSILON {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
            Map::Up(a) => (t - a) / (1.0 + t - a),
            Map::Down(b) => (b - t) / (1.0 + b - t),
            Map::Whole => 2.0 * t / (1.0 + (1.0 + 4.0 * t * t).sqrt()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Engine<'a, G> {
    g: &'a G,
    map: Map,
    evaluations: usize,
}

impl<G: Fn(f64) -> f64> Engine<'_, G> {
    fn eval(&mut self, u: f64) -> Result<f64> {
        self.evaluations += 1;
        let t = self.map.t(u);
        let v = (self.g)(t);
        if v == 0.0 {
            return Ok(0.0);
        }
        if !v.is_finite() && self.map.at_end(t) {
            // node rounded onto a singular end point: zero-measure contribution
            return Ok(0.0);
        }
        let out = v * self.map.jac(u);
        if !out.is_finite() {
            return Err(Error::NonFinite { at: t });
        }
        Ok(out)
    }

    fn rule(&mut self, a: f64, b: f64) -> Result<f64> {
        let gr = gauss_rule();
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = CompensatedSum::default();
        for (x, w) in gr.nodes.iter().zip(gr.weights.iter()) {
            acc.add(w * self.eval(c + h * x)?);
        }
        Ok(h * acc.value())
    }

    fn split(&mut self, a: f64, b: f64, parent: f64, depth: u32) -> Result<(Panel, Panel, f64)> {
        let m = 0.5 * (a + b);
        let l = self.rule(a, m)?;
        let r = self.rule(m, b)?;
        let est = (parent - (l + r)).abs();
        let left = Panel {
            a,
            b: m,
            value: l,
            err: est,
            depth: depth + 1,
        };
        let right = Panel {
            a: m,
            b,
            value: r,
            err: est,
            depth: depth + 1,
        };
        Ok((left, right, est))
    }

    fn run(&mut self, breaks: &[f64], tol: f64) -> Result<QuadResult> {
        let mut heap = BinaryHeap::new();
        let mut frozen: Vec<Panel> = Vec::new();
        let mut total_err = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let whole = self.rule(a, b)?;
            let (l, r, est) = self.split(a, b, whole, 0)?;
            total_err += 2.0 * est;
            heap.push(l);
            heap.push(r);
        }
        let mut iterations = 0usize;
        loop {
            iterations += 1;
            if iterations.is_multiple_of(256) {
                total_err = heap.iter().chain(frozen.iter()).map(|p| p.err).sum();
            }
            let magnitude: f64 = if iterations % 64 == 1 || total_err <= tol {
                heap.iter().chain(frozen.iter()).map(|p| p.value.abs()).sum()
            } else {
                0.0
            };
            let floor = 64.0 * f64::EPSILON * magnitude;
            if total_err <= tol.max(floor) {
                break;
            }
            let Some(p) = heap.pop() else {
                return Err(Error::NonConvergence {
                    est_error: total_err,
                    tol,
                    evaluations: self.evaluations,
                });
            };
            if p.depth >= MAX_DEPTH || (p.b - p.a) <= 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
                frozen.push(p);
                continue;
            }
            if heap.len() + frozen.len() >= MAX_PANELS {
                return Err(Error::NonConvergence {
                    est_error: total_err,
                    tol,
                    evaluations: self.evaluations,
                });
            }
            let (l, r, est) = self.split(p.a, p.b, p.value, p.depth)?;
            total_err += 2.0 * est - p.err;
            heap.push(l);
            heap.push(r);
        }
        let mut panels: Vec<Panel> = heap.into_vec();
        panels.extend(frozen);
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut acc = CompensatedSum::default();
        let mut err = 0.0;
        for p in &panels {
            acc.add(p.value);
            err += p.err;
        }
        Ok(QuadResult {
            value: acc.value(),
            est_abs_error: err,
            evaluations: self.evaluations,
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Integrate `f` over `interval` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, interval: Interval, tol: f64) -> Result<QuadResult> {
    let (lo, hi) = interval.bounds();
    integrate_range(f, lo, hi, &[], tol)
}

/// Integrate over `[lo, hi]`, either end possibly infinite, with optional
/// interior break points (places where the integrand is singular or kinked).
pub fn integrate_range<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<QuadResult> {
    check_tol(tol)?;
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidParameter("NaN integration limit".into()));
    }
    if lo >= hi {
        return Ok(QuadResult {
            value: 0.0,
            est_abs_error: 0.0,
            evaluations: 0,
        });
    }
    let (map, u_lo, u_hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (Map::Smooth { a: lo, b: hi }, 0.0, 1.0),
        (true, false) => (Map::Up(lo), 0.0, 1.0),
        (false, true) => (Map::Down(hi), 0.0, 1.0),
        (false, false) => (Map::Whole, -1.0, 1.0),
    };
    let mut us: Vec<f64> = breaks
        .iter()
        .filter(|&&t| t > lo && t < hi)
        .map(|&t| map.inverse(t))
        .collect();
    us.push(u_lo);
    us.push(u_hi);
    us.sort_by(f64::total_cmp);
    us.dedup();
    let mut engine = Engine {
        g: &f,
        map,
        evaluations: 0,
    };
    engine.run(&us, tol)
}

/// `∫ f(t) w(t) dt` over the weight's integration range.
pub fn integrate_weighted<F: Fn(f64) -> f64, W: Weight + ?Sized>(
    f: F,
    weight: &W,
    tol: f64,
) -> Result<QuadResult> {
    let (lo, hi) = weight.integration_bounds();
    integrate_range(
        |t| {
            let w = weight.weight(t);
            if w == 0.0 {
                0.0
            } else {
                f(t) * w
            }
        },
        lo,
        hi,
        &[],
        tol,
    )
}

/// Half-width of the window in which the difference quotient is replaced by
/// a derivative estimate.
pub fn h_switch(interval: Interval) -> f64 {
    match interval.width() {
        Some(w) => H_SWITCH_REL * w,
        None => H_SWITCH_REL,
    }
}

/// `∫ (f(t) − f(x))/(t − x) w(t) dt` for `x` inside the support of `w`.
///
/// Within `|t − x| < h` (see [`h_switch`]) the kernel is replaced by a
/// central-difference estimate of `f'(x)`, so the quotient is never formed
/// across catastrophic cancellation.
pub fn difference_quotient_integral<F: Fn(f64) -> f64, W: Weight + ?Sized>(
    f: F,
    x: f64,
    weight: &W,
    tol: f64,
) -> Result<QuadResult> {
    check_tol(tol)?;
    let support = weight.support();
    if !support.contains_interior(x) {
        return Err(Error::Domain {
            func: "difference_quotient_integral",
            arg: x,
            reason: "x must lie in the interior of the support",
        });
    }
    let (lo, hi) = weight.integration_bounds();
    // keep the window inside the support; weights may be undefined beyond it
    let h = h_switch(support).min(0.5 * (x - lo)).min(0.5 * (hi - x));
    let fx = f(x);
    let quotient = |t: f64| (f(t) - fx) / (t - x);

    // Lipschitz sentinel: the quotient must not blow up as t -> x.
    for side in [-1.0, 1.0] {
        let far = x + side * 100.0 * h;
        if far > lo && far < hi {
            let q_near = quotient(x + side * h);
            let q_far = quotient(far);
            if !q_near.is_finite() || q_near.abs() > 4.0 * q_far.abs() + 1.0 {
                return Err(Error::NonLipschitz { at: x });
            }
        }
    }

    let kernel = |t: f64| {
        let w = weight.weight(t);
        if w == 0.0 {
            0.0
        } else {
            quotient(t) * w
        }
    };
    let left = integrate_range(kernel, lo, (x - h).max(lo), &[], tol / 3.0)?;
    let right = integrate_range(kernel, (x + h).min(hi), hi, &[], tol / 3.0)?;

    let deriv = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    let gr = gauss_rule();
    let mut mass = CompensatedSum::default();
    for (node, wgt) in gr.nodes.iter().zip(gr.weights.iter()) {
        mass.add(wgt * weight.weight(x + h * node));
    }
    let window = deriv * h * mass.value();
    if !window.is_finite() {
        return Err(Error::NonFinite { at: x });
    }
    let mut out = QuadResult::combine(&[left, right]);
    out.value += window;
    out.evaluations += 2 + GL_ORDER + 1;
    Ok(out)
}
