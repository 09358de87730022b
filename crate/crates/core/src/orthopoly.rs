//! Orthonormal polynomials built from moments, their secondary polynomials,
//! and the exact action of the difference-quotient operator on polynomials.
//!
//! The basis is fixed by requiring positive leading coefficients. When the
//! moments are exact rationals, Gram–Schmidt runs entirely in rational
//! arithmetic on the monic polynomials and only the final normalisation
//! `P_n = π_n / √⟨π_n, π_n⟩` happens in floating point.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::density::MomentTable;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_weighted, Weight};

/// Real polynomial, coefficients lowest degree first. Serialises as a bare
/// JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(c: Vec<f64>) -> Self {
        Polynomial::new(c)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    /// Trailing zeros are dropped, so the zero polynomial has no
    /// coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Polynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Polynomial::new(c)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }

    /// `∫ p ρ` from the moment table.
    pub fn integrate_against(&self, moments: &MomentTable) -> Result<f64> {
        if self.coeffs.len() > moments.len() {
            return Err(Error::InsufficientMoments {
                needed: self.coeffs.len(),
                available: moments.len(),
            });
        }
        Ok(self.coeffs.iter().zip(&moments.c).map(|(a, c)| a * c).sum())
    }
}

/// Orthonormal basis `P_0..P_N` of a density together with the secondary
/// polynomials `Q_n = T(P_n)`.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoBasis {
    pub density_name: String,
    pub p: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    pub moments: MomentTable,
    /// Always true: every `P_n` has a positive leading coefficient.
    pub positive_leading: bool,
}

impl OrthoBasis {
    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }
}

/// Largest basis degree for floating-point moment tables.
pub const FLOAT_BASIS_CAP: usize = 12;
/// Largest basis degree for exact moment tables.
pub const EXACT_BASIS_CAP: usize = 40;

/// Build `P_0..P_N` (and `Q_0..Q_N`) from moments `c_0..c_{2N}`.
pub fn build_basis(moments: &MomentTable, n: usize) -> Result<OrthoBasis> {
    let needed = 2 * n + 1;
    if moments.len() < needed {
        return Err(Error::InsufficientMoments {
            needed,
            available: moments.len(),
        });
    }
    let (p, q) = match &moments.exact {
        Some(exact) => {
            if n > EXACT_BASIS_CAP {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: EXACT_BASIS_CAP,
                });
            }
            exact_basis(exact, n)?
        }
        None => {
            if n > FLOAT_BASIS_CAP {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: FLOAT_BASIS_CAP,
                });
            }
            let p = float_basis(&moments.c, n)?;
            let q = p
                .iter()
                .map(|pn| apply_t_poly(moments, pn))
                .collect::<Result<Vec<_>>>()?;
            (p, q)
        }
    };
    Ok(OrthoBasis {
        density_name: moments.source.clone(),
        p,
        q,
        moments: moments.clone(),
        positive_leading: true,
    })
}

fn rational_inner(p: &[BigRational], q: &[BigRational], c: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                s += a * b * &c[i + j];
            }
        }
    }
    s
}

fn rational_apply_t(c: &[BigRational], p: &[BigRational]) -> Vec<BigRational> {
    let deg = p.len().saturating_sub(1);
    let mut out = vec![BigRational::zero(); deg];
    for (k, pk) in p.iter().enumerate().skip(1) {
        if pk.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate().take(k) {
            *slot += pk * &c[k - 1 - j];
        }
    }
    out
}

fn to_float_poly(p: &[BigRational], scale: f64) -> Polynomial {
    Polynomial::new(
        p.iter()
            .map(|q| q.to_f64().unwrap_or(f64::NAN) * scale)
            .collect(),
    )
}

fn exact_basis(c: &[BigRational], n: usize) -> Result<(Vec<Polynomial>, Vec<Polynomial>)> {
    let mut monic: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut pk = vec![BigRational::zero(); k + 1];
        pk[k] = BigRational::one();
        for (j, pj) in monic.iter().enumerate() {
            // <x^k, π_j> = Σ_i π_j[i] c_{k+i}
            let proj: BigRational = pj
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| a * &c[k + i])
                .sum();
            if proj.is_zero() {
                continue;
            }
            let factor = proj / &norms[j];
            for (i, a) in pj.iter().enumerate() {
                pk[i] -= &factor * a;
            }
        }
        let d = rational_inner(&pk, &pk, c);
        if !d.is_positive() {
            return Err(Error::Conditioning { order: k });
        }
        monic.push(pk);
        norms.push(d);
    }
    let mut p = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    for (pk, d) in monic.iter().zip(&norms) {
        let inv_norm = 1.0 / d.to_f64().unwrap_or(f64::NAN).sqrt();
        p.push(to_float_poly(pk, inv_norm));
        q.push(to_float_poly(&rational_apply_t(c, pk), inv_norm));
    }
    Ok((p, q))
}

fn float_basis(c: &[f64], n: usize) -> Result<Vec<Polynomial>> {
    let m = n + 1;
    // Cholesky of the Hankel matrix
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = c[i + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if !(s.is_finite() && s > 1e-14 * c[2 * i].abs()) {
                    return Err(Error::Conditioning { order: i });
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    // rows of L^{-1} hold the monomial coefficients of P_0..P_N
    let mut inv = vec![0.0; m * m];
    for col in 0..m {
        for i in col..m {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                s -= l[i * m + k] * inv[k * m + col];
            }
            inv[i * m + col] = s / l[i * m + i];
        }
    }
    Ok((0..m)
        .map(|i| Polynomial::new(inv[i * m..i * m + i + 1].to_vec()))
        .collect())
}

/// `T(p)(x) = ∫ (p(t) − p(x))/(t − x) ρ(t) dt`, exactly, from the moments:
/// `x^k ↦ Σ_{j<k} c_{k−1−j} x^j`.
pub fn apply_t_poly(moments: &MomentTable, p: &Polynomial) -> Result<Polynomial> {
    let Some(deg) = p.degree() else {
        return Ok(Polynomial::zero());
    };
    if deg > moments.len() {
        return Err(Error::InsufficientMoments {
            needed: deg,
            available: moments.len(),
        });
    }
    let c = &moments.c;
    let mut out = vec![0.0; deg];
    for (k, &pk) in p.coeffs().iter().enumerate().skip(1) {
        if pk == 0.0 {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate().take(k) {
            *slot += pk * c[k - 1 - j];
        }
    }
    Ok(Polynomial::new(out))
}

/// The secondary polynomials `Q_0..Q_N` of a basis.
pub fn secondary_polynomials(basis: &OrthoBasis) -> Vec<Polynomial> {
    basis.q.clone()
}

/// Gram residuals `⟨P_m, P_n⟩_ρ − δ_{mn}` computed by quadrature.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoReport {
    pub residuals: Vec<Vec<f64>>,
    pub max_abs: f64,
}

pub fn orthonormality_report<W: Weight + ?Sized>(
    basis: &OrthoBasis,
    rho: &W,
    tol: f64,
) -> Result<OrthoReport> {
    gram_residuals(&basis.p, 0, rho, tol)
}

/// Gram residuals of `polys[from..]` under an arbitrary weight.
pub fn gram_residuals<W: Weight + ?Sized>(
    polys: &[Polynomial],
    from: usize,
    weight: &W,
    tol: f64,
) -> Result<OrthoReport> {
    let idx: Vec<usize> = (from..polys.len()).collect();
    let mut residuals = vec![vec![0.0; idx.len()]; idx.len()];
    let mut max_abs: f64 = 0.0;
    for (a, &m) in idx.iter().enumerate() {
        for (b, &n) in idx.iter().enumerate().skip(a) {
            let (pm, pn) = (&polys[m], &polys[n]);
            let v = integrate_weighted(|t| pm.eval(t) * pn.eval(t), weight, tol)?.value;
            let r = v - if m == n { 1.0 } else { 0.0 };
            residuals[a][b] = r;
            residuals[b][a] = r;
            max_abs = max_abs.max(r.abs());
        }
    }
    Ok(OrthoReport { residuals, max_abs })
}
