//! The reducer φ = 2 p.v.∫ ρ(t)/(x − t) dt, the secondary measure μ built
//! from it, the secondary reducer ψ, and Stieltjes-transform coupling.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::density::{Density, Evaluator};
use crate::error::{Error, Result};
use crate::quadrature::{
    difference_quotient_integral, integrate_range, integrate_weighted, Interval, Weight, WeightFn,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    LipschitzFormula,
    C1Formula,
    BoundsFormula,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::LipschitzFormula => "lipschitz_formula",
            Provenance::C1Formula => "c1_formula",
            Provenance::BoundsFormula => "bounds_formula",
        })
    }
}

/// A reducer evaluator and where it came from.
#[derive(Clone)]
pub struct ReducerProfile {
    pub phi: Evaluator,
    pub provenance: Provenance,
    pub density_name: String,
}

impl fmt::Debug for ReducerProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducerProfile")
            .field("provenance", &self.provenance)
            .field("density_name", &self.density_name)
            .finish()
    }
}

/// Tolerance used inside numeric reducer evaluators.
pub const NUMERIC_REDUCER_TOL: f64 = 1e-11;

impl ReducerProfile {
    pub fn eval(&self, x: f64) -> f64 {
        (self.phi)(x)
    }

    /// The catalog closed form.
    pub fn closed(rho: &Density) -> Result<Self> {
        rho.require_reducible()?;
        let phi = rho.closed_reducer.clone().ok_or_else(|| Error::MissingData {
            density: rho.name.clone(),
            what: "a closed-form reducer",
        })?;
        Ok(ReducerProfile {
            phi,
            provenance: Provenance::ClosedForm,
            density_name: rho.name.clone(),
        })
    }

    /// A quadrature-backed reducer; points where the formula fails
    /// evaluate to NaN.
    pub fn numeric(rho: &Density, provenance: Provenance, tol: f64) -> Result<Self> {
        rho.require_reducible()?;
        let d = rho.clone();
        let phi: Evaluator = match provenance {
            Provenance::ClosedForm => return Self::closed(rho),
            Provenance::LipschitzFormula => {
                if !rho.interval.is_bounded() {
                    return Err(Error::MissingData {
                        density: rho.name.clone(),
                        what: "a bounded interval for the Lipschitz formula",
                    });
                }
                Arc::new(move |x| numeric_reducer(&d, x, tol).unwrap_or(f64::NAN))
            }
            Provenance::C1Formula => {
                Arc::new(move |x| reducer_c1(&d, x, tol).unwrap_or(f64::NAN))
            }
            Provenance::BoundsFormula => {
                Arc::new(move |x| reducer_bounds(&d, x, tol).unwrap_or(f64::NAN))
            }
        };
        Ok(ReducerProfile {
            phi,
            provenance,
            density_name: rho.name.clone(),
        })
    }

    /// Closed form when the catalog has one, otherwise the Lipschitz formula.
    pub fn default_for(rho: &Density) -> Result<Self> {
        if rho.closed_reducer.is_some() {
            Self::closed(rho)
        } else {
            Self::numeric(rho, Provenance::LipschitzFormula, NUMERIC_REDUCER_TOL)
        }
    }
}

fn require_unit<W: Weight + ?Sized>(rho: &W, func: &'static str, x: f64) -> Result<()> {
    match rho.support() {
        Interval::Bounded { a, b } if a == 0.0 && b == 1.0 => {}
        _ => {
            return Err(Error::Domain {
                func,
                arg: x,
                reason: "formula is stated on [0, 1]; rescale first",
            })
        }
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            func,
            arg: x,
            reason: "x must lie in (0, 1)",
        });
    }
    Ok(())
}

/// `φ(x) = 2ρ(x) ln(x/(1−x)) − 2∫_0^1 (ρ(t) − ρ(x))/(t − x) dt` for a weight
/// supported on [0, 1]. Works for any weight, normalised or not.
pub fn reducer_lipschitz<W: Weight + ?Sized>(rho: &W, x: f64, tol: f64) -> Result<f64> {
    require_unit(rho, "reducer_lipschitz", x)?;
    let lebesgue = WeightFn::new(Interval::unit(), |_| 1.0);
    let dq = difference_quotient_integral(|t| rho.weight(t), x, &lebesgue, tol / 2.0)?;
    Ok(2.0 * rho.weight(x) * (x / (1.0 - x)).ln() - 2.0 * dq.value)
}

/// `φ(x) = 2[∫_0^1 ρ′(t) ln|1 − t/x| dt + ρ(1) ln(x/(1−x))]`, needs ρ′.
///
/// When ρ′ blows up at 1 and x is within ~1e-3 of it, rounding in `1 − t`
/// caps the attainable absolute tolerance around 1e-10.
pub fn reducer_c1(rho: &Density, x: f64, tol: f64) -> Result<f64> {
    require_unit(rho, "reducer_c1", x)?;
    let deriv = rho.deriv.as_ref().ok_or_else(|| Error::MissingData {
        density: rho.name.clone(),
        what: "a derivative",
    })?;
    let rho1 = match rho.boundary_values {
        Some((_, b)) => b,
        None => rho.density(1.0),
    };
    let r = integrate_range(
        |t| {
            let d = deriv(t);
            if d == 0.0 || t == x {
                0.0
            } else {
                d * (1.0 - t / x).abs().ln()
            }
        },
        0.0,
        1.0,
        &[x],
        tol / 2.0,
    )?;
    Ok(2.0 * (r.value + rho1 * (x / (1.0 - x)).ln()))
}

/// `φ(x) = 2[∫_a^b ρ′(t) ln|x − t| dt − ρ(b) ln|b − x| + ρ(a) ln|x − a|]`.
///
/// Integrating by parts against `ln|x − t|` rather than `ln|1 − t/x|` gives
/// the same value (the constant `ln|x|` multiplies `ρ(b) − ρ(a) − ∫ρ′ = 0`)
/// and stays defined at `x = 0`. A semi-infinite support is accepted when
/// the density vanishes at infinity.
pub fn reducer_bounds(rho: &Density, x: f64, tol: f64) -> Result<f64> {
    let deriv = rho.deriv.as_ref().ok_or_else(|| Error::MissingData {
        density: rho.name.clone(),
        what: "a derivative",
    })?;
    let (ra, rb) = rho.boundary_values.ok_or_else(|| Error::MissingData {
        density: rho.name.clone(),
        what: "boundary values",
    })?;
    let (a, b) = rho.interval.bounds();
    if a.is_infinite() || (b.is_infinite() && rb != 0.0) {
        return Err(Error::MissingData {
            density: rho.name.clone(),
            what: "finite boundary terms",
        });
    }
    if !rho.interval.contains_interior(x) {
        return Err(Error::Domain {
            func: "reducer_bounds",
            arg: x,
            reason: "x must lie inside the interval",
        });
    }
    let (lo, hi) = rho.integration_bounds();
    let r = integrate_range(
        |t| {
            let d = deriv(t);
            if d == 0.0 {
                0.0
            } else {
                d * (x - t).abs().ln()
            }
        },
        lo,
        hi,
        &[x],
        tol / 2.0,
    )?;
    let upper = if b.is_finite() { rb * (b - x).ln() } else { 0.0 };
    Ok(2.0 * (r.value - upper + ra * (x - a).ln()))
}

/// The Lipschitz formula on any bounded interval: the density is rescaled
/// affinely onto [0, 1] and `φ(x) = φ̃(s)/(b − a)`.
pub fn numeric_reducer(rho: &Density, x: f64, tol: f64) -> Result<f64> {
    match rho.interval {
        Interval::Bounded { a, b } if a == 0.0 && b == 1.0 => reducer_lipschitz(rho, x, tol),
        Interval::Bounded { a, b } => {
            let w = b - a;
            let scaled = WeightFn::new(Interval::unit(), |s: f64| w * rho.density(a + w * s));
            Ok(reducer_lipschitz(&scaled, (x - a) / w, tol * w)? / w)
        }
        _ => Err(Error::MissingData {
            density: rho.name.clone(),
            what: "a bounded interval for the numeric reducer",
        }),
    }
}

/// `μ = ρ/(φ²/4 + π²ρ²)`.
#[derive(Clone)]
pub struct SecondaryMeasure {
    pub mu: Evaluator,
    pub interval: Interval,
    pub bounds: (f64, f64),
    pub source: ReducerProfile,
}

impl fmt::Debug for SecondaryMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecondaryMeasure")
            .field("interval", &self.interval)
            .field("source", &self.source)
            .finish()
    }
}

impl SecondaryMeasure {
    pub fn eval(&self, x: f64) -> f64 {
        (self.mu)(x)
    }

    /// `∫ μ`; equals the variance `c_2 − c_1²` of ρ.
    pub fn mass(&self, tol: f64) -> Result<f64> {
        integrate_weighted(|_| 1.0, self, tol).map(|r| r.value)
    }
}

impl Weight for SecondaryMeasure {
    fn support(&self) -> Interval {
        self.interval
    }
    fn weight(&self, t: f64) -> f64 {
        (self.mu)(t)
    }
    fn integration_bounds(&self) -> (f64, f64) {
        self.bounds
    }
}

pub fn secondary_value(rho: f64, phi: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    rho / (0.25 * phi * phi + PI * PI * rho * rho)
}

pub fn secondary_density(rho: &Density, phi: &ReducerProfile) -> Result<SecondaryMeasure> {
    rho.require_reducible()?;
    let eval = rho.eval.clone();
    let p = phi.phi.clone();
    Ok(SecondaryMeasure {
        mu: Arc::new(move |x| secondary_value(eval(x), p(x))),
        interval: rho.interval,
        bounds: rho.integration_bounds(),
        source: phi.clone(),
    })
}

/// Below this density value ψ is not evaluated.
pub const RHO_FLOOR: f64 = 1e-12;

/// `ψ(x) = 2(x − c₁) − φ(x)μ(x)/ρ(x)`, the reducer of μ.
pub fn secondary_reducer(
    rho: &Density,
    phi: &ReducerProfile,
    mu: &SecondaryMeasure,
    c1: f64,
    x: f64,
) -> Result<f64> {
    let r = rho.density(x);
    if !(r >= RHO_FLOOR) {
        return Err(Error::Domain {
            func: "secondary_reducer",
            arg: x,
            reason: "density below 1e-12",
        });
    }
    Ok(2.0 * (x - c1) - phi.eval(x) * mu.eval(x) / r)
}

/// `S(z) = ∫ w(t)/(z − t) dt` for `z` off the closed support.
pub fn stieltjes<W: Weight + ?Sized>(w: &W, z: f64, tol: f64) -> Result<f64> {
    if !z.is_finite() || w.support().contains_closure(z) {
        return Err(Error::Domain {
            func: "stieltjes",
            arg: z,
            reason: "z must lie outside the closed interval",
        });
    }
    integrate_weighted(|t| 1.0 / (z - t), w, tol).map(|r| r.value)
}

/// `S_μ(z) − (z − c₁ − 1/S_ρ(z))`.
pub fn verify_coupling<W: Weight + ?Sized>(
    rho: &W,
    mu: &SecondaryMeasure,
    c1: f64,
    z: f64,
    tol: f64,
) -> Result<f64> {
    let s_rho = stieltjes(rho, z, tol / 10.0)?;
    let s_mu = stieltjes(mu, z, tol / 10.0)?;
    Ok(s_mu - (z - c1 - 1.0 / s_rho))
}
