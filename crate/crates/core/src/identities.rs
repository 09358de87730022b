//! Checks of the reducer identities: norm, triplet, Fourier coefficients,
//! the sum formula and the moment identity.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::{Density, MomentTable};
use crate::error::{Error, Result};
use crate::geoharmonic::build_sequences;
use crate::operator::apply_t;
use crate::orthopoly::OrthoBasis;
use crate::quadrature::{integrate_range, integrate_weighted, Interval};
use crate::reducer::ReducerProfile;

/// `C_n(φ)` for n = 0..=n_max, optionally beside closed-form reference values and
/// the sign bridge `(−1)ⁿ` between the two polynomial conventions.
#[derive(Debug, Clone, Serialize)]
pub struct FourierTable {
    pub basis_name: String,
    pub n_max: usize,
    pub coeffs: Vec<f64>,
    pub reference: Option<Vec<f64>>,
    pub convention_bridge: Vec<f64>,
}

impl FourierTable {
    fn new(basis_name: &str, coeffs: Vec<f64>) -> Self {
        let n_max = coeffs.len() - 1;
        FourierTable {
            basis_name: basis_name.to_string(),
            n_max,
            reference: reference_values(basis_name, n_max),
            convention_bridge: (0..=n_max).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect(),
            coeffs,
        }
    }

    /// `bridge[n]·reference[n]`, the reference values in this library's
    /// positive-leading convention.
    pub fn expected(&self) -> Option<Vec<f64>> {
        self.reference.as_ref().map(|p| {
            p.iter()
                .zip(&self.convention_bridge)
                .map(|(v, b)| v * b)
                .collect()
        })
    }

    /// Largest `|C_n − bridge·reference|` over n ≥ 1.
    pub fn max_deviation(&self) -> Option<f64> {
        self.expected().map(|e| {
            self.coeffs
                .iter()
                .zip(&e)
                .skip(1)
                .map(|(c, v)| (c - v).abs())
                .fold(0.0, f64::max)
        })
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Reference `C_n(φ)` for the Legendre (lebesgue01), Hermite (gaussian) and
/// Laguerre (exponential) systems, in the Rodrigues sign convention.
///
/// Hermite magnitudes are `((n−1)/2)!/√n!`. The form `(n−1)!/√n!` that
/// circulates for this case agrees only at n = 1; its squares already
/// exceed `∫φ²ρ` by n = 5 (see [`hermite_factorial_form`]).
pub fn reference_values(name: &str, n_max: usize) -> Option<Vec<f64>> {
    match name {
        "lebesgue01" => Some(
            (0..=n_max)
                .map(|n| {
                    if n % 2 == 1 {
                        let nf = n as f64;
                        -4.0 * (2.0 * nf + 1.0).sqrt() / (nf * (nf + 1.0))
                    } else {
                        0.0
                    }
                })
                .collect(),
        ),
        "gaussian" => Some(
            (0..=n_max)
                .map(|n| {
                    if n % 2 == 1 {
                        let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
                        sign * factorial((n - 1) / 2) / factorial(n).sqrt()
                    } else {
                        0.0
                    }
                })
                .collect(),
        ),
        "exponential" => {
            let seq = build_sequences(n_max.max(1)).ok()?;
            Some(
                (0..=n_max)
                    .map(|n| if n == 0 { 0.0 } else { -seq.s_f64(n) })
                    .collect(),
            )
        }
        _ => None,
    }
}

/// `(n−1)!/√n!` for odd n, zero otherwise: the factorial form of the Hermite
/// coefficients, kept so the inconsistency can be demonstrated.
pub fn hermite_factorial_form(n: usize) -> f64 {
    if n % 2 == 1 {
        factorial(n - 1) / factorial(n).sqrt()
    } else {
        0.0
    }
}

fn check_n(basis: &OrthoBasis, n_max: usize) -> Result<()> {
    if n_max > basis.n_max() {
        return Err(Error::InsufficientMoments {
            needed: n_max,
            available: basis.n_max(),
        });
    }
    Ok(())
}

/// `C_n(φ) = ∫ Q_n ρ = Σ q_k c_k`.
pub fn fourier_coeffs_via_q(basis: &OrthoBasis, n_max: usize) -> Result<FourierTable> {
    check_n(basis, n_max)?;
    let coeffs = basis.q[..=n_max]
        .iter()
        .map(|q| q.integrate_against(&basis.moments))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierTable::new(&basis.density_name, coeffs))
}

/// `C_n(φ) = ∫ φ P_n ρ` by quadrature.
pub fn fourier_coeffs_direct(
    phi: &ReducerProfile,
    basis: &OrthoBasis,
    rho: &Density,
    n_max: usize,
    tol: f64,
) -> Result<FourierTable> {
    check_n(basis, n_max)?;
    let coeffs = basis.p[..=n_max]
        .iter()
        .map(|p| integrate_weighted(|t| phi.eval(t) * p.eval(t), rho, tol).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierTable::new(&basis.density_name, coeffs))
}

/// `Σ_{n≤N} C_n²` subtracted from `∫φ²ρ`, for N = 1..=len−1; nonnegative
/// and decreasing.
pub fn parseval_gaps(table: &FourierTable, phi_norm2: f64) -> Vec<f64> {
    let mut acc = 0.0;
    table.coeffs[1..]
        .iter()
        .map(|c| {
            acc += c * c;
            phi_norm2 - acc
        })
        .collect()
}

/// Both sides of `∫φ²ρ = (4π²/3)∫ρ³`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl NormCheck {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn check_norm_identity(rho: &Density, phi: &ReducerProfile, tol: f64) -> Result<NormCheck> {
    rho.require_reducible()?;
    let lhs = integrate_weighted(|t| phi.eval(t).powi(2), rho, tol / 2.0)?.value;
    let r3 = integrate_weighted(|t| rho.density(t).powi(2), rho, tol / 2.0)?.value;
    Ok(NormCheck {
        lhs,
        rhs: 4.0 * PI * PI / 3.0 * r3,
    })
}

/// `∫[φ₁φ₂ρ₃ + φ₁φ₃ρ₂ + φ₂φ₃ρ₁] − 4π²∫ρ₁ρ₂ρ₃` for three densities on [0, 1].
pub fn check_triplet_identity(rhos: [&Density; 3], phis: [&ReducerProfile; 3], tol: f64) -> Result<f64> {
    for r in rhos {
        r.require_reducible()?;
        if r.interval != Interval::unit() {
            return Err(Error::InvalidParameter(format!(
                "triplet identity needs densities on [0, 1], '{}' is on {}",
                r.name, r.interval
            )));
        }
    }
    let [r1, r2, r3] = rhos;
    let [p1, p2, p3] = phis;
    let lhs = integrate_range(
        |t| {
            let (a, b, c) = (p1.eval(t), p2.eval(t), p3.eval(t));
            a * b * r3.density(t) + a * c * r2.density(t) + b * c * r1.density(t)
        },
        0.0,
        1.0,
        &[],
        tol / 2.0,
    )?;
    let rhs = integrate_range(
        |t| r1.density(t) * r2.density(t) * r3.density(t),
        0.0,
        1.0,
        &[],
        tol / 2.0,
    )?;
    Ok(lhs.value - 4.0 * PI * PI * rhs.value)
}

/// `∬ (f(y) − f(x))/(y − x) ρ(x)ρ(y) dx dy` and `Σ_{n=1}^{N} C_n(φ)C_n(f)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SumCheck {
    pub lhs: f64,
    pub partial_rhs: f64,
}

impl SumCheck {
    pub fn residual(&self) -> f64 {
        self.lhs - self.partial_rhs
    }
}

pub fn check_sum_formula<F: Fn(f64) -> f64>(
    rho: &Density,
    basis: &OrthoBasis,
    phi: &ReducerProfile,
    f: F,
    n: usize,
    tol: f64,
) -> Result<SumCheck> {
    check_n(basis, n)?;
    // the inner integral is T_ρ(f)(x); its kernel is the symmetric quotient
    let lhs = integrate_weighted(
        |x| apply_t(rho, &f, x, tol / 20.0).unwrap_or(f64::NAN),
        rho,
        tol / 2.0,
    )?
    .value;
    let q = fourier_coeffs_direct(phi, basis, rho, n, tol / (4.0 * n.max(1) as f64))?;
    let mut rhs = 0.0;
    for k in 1..=n {
        let p = &basis.p[k];
        let cf = integrate_weighted(|t| f(t) * p.eval(t), rho, tol / (4.0 * n.max(1) as f64))?.value;
        rhs += q.coeffs[k] * cf;
    }
    Ok(SumCheck {
        lhs,
        partial_rhs: rhs,
    })
}

/// `∫ φ tⁿ ρ − Σ_{k<n} c_k c_{n−1−k}` for n = 0..=n_max.
pub fn check_moment_identity(
    rho: &Density,
    phi: &ReducerProfile,
    moments: &MomentTable,
    n_max: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if moments.len() < n_max {
        return Err(Error::InsufficientMoments {
            needed: n_max,
            available: moments.len(),
        });
    }
    let c = &moments.c;
    (0..=n_max)
        .map(|n| {
            let lhs = integrate_weighted(|t| phi.eval(t) * t.powi(n as i32), rho, tol)?.value;
            let rhs: f64 = (0..n).map(|k| c[k] * c[n - 1 - k]).sum();
            Ok(lhs - rhs)
        })
        .collect()
}
