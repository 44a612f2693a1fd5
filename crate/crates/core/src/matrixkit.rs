//! Upper-triangular shift matrices and residues of multiple Hurwitz zeta
//! functions along their polar hyperplanes.
//!
//! The matrices act on columns of shifted values (f(s_1), f(s_1 + 1), ...).
//! Everything is generic over [`Scalar`], so the same code runs in exact
//! rational arithmetic (used for all zero/nonzero decisions) and in complex
//! floating point.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{NumOps, One, Zero};
use serde::{Deserialize, Serialize};

use crate::bernoulli::{bernoulli_poly, Rational};
use crate::domain::{hyperplane_offset, rational_to_f64, region_index, EvalPoint, Hyperplane, Real, TwistParams};
use crate::error::{Result, ZetaError};
use crate::evaluator::{eval_continued, Diagnostics, EvalResult, TruncationPolicy};

/// Field of matrix entries.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Zero + One + NumOps + Neg<Output = Self> {
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self;

    fn magnitude(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
}

impl Scalar for Complex64 {
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    A1,
    A2,
    Delta,
    M,
    B,
    Product,
}

/// Leading q×q block of an infinite upper-triangular matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMatrix<S> {
    kind: MatrixKind,
    q: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> TruncatedMatrix<S> {
    fn from_fn(kind: MatrixKind, q: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let rows = (0..q)
            .map(|i| (0..q).map(|j| if j < i { S::zero() } else { f(i, j) }).collect())
            .collect();
        TruncatedMatrix { kind, q, rows }
    }

    pub fn identity(q: usize) -> Self {
        Self::from_fn(MatrixKind::Product, q, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.rows[i]
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(Zero::is_zero))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "truncation orders differ");
        Self::from_fn(MatrixKind::Product, self.q, |i, j| {
            (i..=j).fold(S::zero(), |acc, l| acc + self.rows[i][l].clone() * other.rows[l][j].clone())
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "truncation orders differ");
        Self::from_fn(MatrixKind::Product, self.q, |i, j| {
            self.rows[i][j].clone() - other.rows[i][j].clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Leading p×p block.
    pub fn leading(&self, p: usize) -> Self {
        assert!(p <= self.q);
        Self::from_fn(self.kind, p, |i, j| self.rows[i][j].clone())
    }

    /// Σ_n coeffs[n] · self^n; exact for strictly upper-triangular input once
    /// `coeffs` has q terms, since the q-th power vanishes.
    pub fn power_series(&self, coeffs: &[S]) -> Self {
        let mut out = Self::from_fn(MatrixKind::Product, self.q, |_, _| S::zero());
        let mut power = Self::identity(self.q);
        for c in coeffs {
            for i in 0..self.q {
                for j in i..self.q {
                    out.rows[i][j] = out.rows[i][j].clone() + c.clone() * power.rows[i][j].clone();
                }
            }
            power = power.mul(self);
        }
        out
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for TruncatedMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn factorial<S: Scalar>(n: usize) -> S {
    (1..=n as i64).fold(S::one(), |acc, j| acc * S::from_i64(j))
}

/// (t + from)(t + from + 1)...(t + to - 1); empty products are one.
fn rising<S: Scalar>(t: &S, from: usize, to: usize) -> S {
    (from..to).fold(S::one(), |acc, u| acc * (t.clone() + S::from_i64(u as i64)))
}

/// Normalized Pochhammer (s)_k = s(s+1)...(s+k)/(k+1)!, with (s)_{-1} = 1.
pub fn pochhammer_scalar<S: Scalar>(s: &S, k: i64) -> S {
    assert!(k >= -1, "pochhammer index must be at least -1");
    if k < 0 {
        return S::one();
    }
    rising(s, 0, k as usize + 1) / factorial(k as usize + 1)
}

/// B_n(d) for a scalar argument.
pub fn bernoulli_at<S: Scalar>(n: usize, d: &S) -> S {
    let p = bernoulli_poly(n);
    p.coeffs()
        .iter()
        .rev()
        .fold(S::zero(), |acc, c| acc * d.clone() + S::from_rational(c))
}

/// Coefficients of f(x) = (e^x - 1)/x up to x^{q-1}.
pub fn f_series<S: Scalar>(q: usize) -> Vec<S> {
    (0..q).map(|n| S::one() / factorial(n + 1)).collect()
}

/// Coefficients of h(x) = e^{dx} up to x^{q-1}.
pub fn h_series<S: Scalar>(d: &S, q: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(q);
    let mut p = S::one();
    for n in 0..q {
        out.push(p.clone() / factorial(n));
        p = p * d.clone();
    }
    out
}

/// Coefficients B_n(d)/n! of h/f = x e^{dx}/(e^x - 1) up to x^{q-1}.
pub fn bernoulli_series<S: Scalar>(d: &S, q: usize) -> Vec<S> {
    (0..q).map(|n| bernoulli_at(n, d) / factorial(n)).collect()
}

fn check_diagonal<S: Scalar>(t: &S, q: usize) -> Result<()> {
    for j in 0..q {
        if (t.clone() + S::from_i64(j as i64)).is_zero() {
            return Err(ZetaError::InvalidParameter(format!(
                "singular diagonal: t + {j} = 0"
            )));
        }
    }
    Ok(())
}

/// Leading q×q block of A_1(t), A_2(d; t), Δ(t), M(t) or B(d; t).
///
/// `d` is ignored for A_1, Δ and M. Entries come from the closed forms, so
/// no inversion is performed for B.
pub fn build_matrix<S: Scalar>(kind: MatrixKind, d: &S, t: &S, q: usize) -> Result<TruncatedMatrix<S>> {
    if q == 0 {
        return Err(ZetaError::InvalidParameter("truncation order q must be at least 1".into()));
    }
    let m = match kind {
        MatrixKind::A1 => TruncatedMatrix::from_fn(kind, q, |i, j| {
            rising(t, i, j + 1) / factorial(j - i + 1)
        }),
        MatrixKind::A2 => {
            let powers = h_series(d, q);
            TruncatedMatrix::from_fn(kind, q, |i, j| rising(t, i, j) * powers[j - i].clone())
        }
        MatrixKind::Delta => TruncatedMatrix::from_fn(kind, q, |i, j| {
            if i == j {
                t.clone() + S::from_i64(i as i64)
            } else {
                S::zero()
            }
        }),
        MatrixKind::M => TruncatedMatrix::from_fn(kind, q, |i, j| {
            if j == i + 1 {
                t.clone() + S::from_i64(i as i64)
            } else {
                S::zero()
            }
        }),
        MatrixKind::B => {
            check_diagonal(t, q)?;
            let bern = bernoulli_series(d, q);
            TruncatedMatrix::from_fn(kind, q, |i, j| {
                if i == j {
                    S::one() / (t.clone() + S::from_i64(i as i64))
                } else {
                    rising(t, i + 1, j) * bern[j - i].clone()
                }
            })
        }
        MatrixKind::Product => {
            return Err(ZetaError::InvalidParameter("products are formed with TruncatedMatrix::mul".into()))
        }
    };
    Ok(m)
}

/// Largest entry of A_1(t) B(d; t) - A_2(d; t) on the leading q×q block.
pub fn verify_inverse_pair<S: Scalar>(d: &S, t: &S, q: usize) -> Result<f64> {
    let a1 = build_matrix(MatrixKind::A1, d, t, q)?;
    let a2 = build_matrix(MatrixKind::A2, d, t, q)?;
    let b = build_matrix(MatrixKind::B, d, t, q)?;
    Ok(a1.mul(&b).sub(&a2).max_abs())
}

/// (0, k) entry of Π_{d=1}^{i-1} B(α_{d+1} - α_d; t_d), truncated at order q.
pub fn first_row_chain_truncated<S: Scalar>(alphas: &[S], i: usize, t_values: &[S], k: usize, q: usize) -> Result<S> {
    if i < 2 || alphas.len() < i || t_values.len() != i - 1 {
        return Err(ZetaError::InvalidParameter(format!(
            "chain of index {i} needs {i} offsets and {} shift values",
            i.saturating_sub(1)
        )));
    }
    if q <= k {
        return Err(ZetaError::InvalidParameter(format!("truncation order {q} must exceed k = {k}")));
    }
    // Only the first row is needed: push a row vector through the chain.
    let mut row = vec![S::zero(); q];
    row[0] = S::one();
    for dd in 0..i - 1 {
        let delta = alphas[dd + 1].clone() - alphas[dd].clone();
        let b = build_matrix(MatrixKind::B, &delta, &t_values[dd], q)?;
        row = (0..q)
            .map(|j| (0..=j).fold(S::zero(), |acc, l| acc + row[l].clone() * b.entry(l, j).clone()))
            .collect();
    }
    Ok(row[k].clone())
}

/// (0, k) entry of the B-chain with the minimal truncation q = k + 1.
pub fn first_row_chain<S: Scalar>(alphas: &[S], i: usize, t_values: &[S], k: usize) -> Result<S> {
    first_row_chain_truncated(alphas, i, t_values, k, k + 1)
}

/// Closed form of the (0, k) entry of B(β - α; x) B(γ - β; y):
/// x (y + k) a_{0,k} = Σ_{i=0}^{k} (x)_{i-1} (y+i+1)_{k-i-1} B_i(β-α) B_{k-i}(γ-β).
pub fn two_prod_oracle<S: Scalar>(x: &S, y: &S, alpha: &S, beta: &S, gamma: &S, k: usize) -> Result<S> {
    let yk = y.clone() + S::from_i64(k as i64);
    if x.is_zero() || yk.is_zero() {
        return Err(ZetaError::InvalidParameter("x = 0 or y = -k".into()));
    }
    let d1 = beta.clone() - alpha.clone();
    let d2 = gamma.clone() - beta.clone();
    let mut sum = S::zero();
    for i in 0..=k {
        let yi = y.clone() + S::from_i64(i as i64 + 1);
        sum = sum
            + pochhammer_scalar(x, i as i64 - 1)
                * pochhammer_scalar(&yi, k as i64 - i as i64 - 1)
                * bernoulli_at(i, &d1)
                * bernoulli_at(k - i, &d2);
    }
    Ok(sum / (x.clone() * yk))
}

fn exact_real(z: Complex64) -> Option<Rational> {
    if z.im != 0.0 {
        return None;
    }
    Rational::from_float(z.re)
}

/// Residue of ζ_r(s; α) along `h` at a point of `h`, i.e. the restriction of
/// (s_1 + ... + s_i - i + k) ζ_r(s; α) to the hyperplane.
///
/// On H_{1,0} this is ζ_{r-1}(s_2, ...; α_2, ...). On H_{i,k} with i >= 2 it
/// is the (0, k) entry of the B-chain at t_d = s_1 + ... + s_d - d, times
/// ζ_{r-i}(s_{i+1}, ...; α_{i+1}, ...), where ζ_0 = 1. The chain is computed
/// exactly when the offsets are exact and the point is real.
pub fn residue_hurwitz(alphas: &[Real], h: Hyperplane, point: &EvalPoint, policy: &TruncationPolicy) -> Result<EvalResult> {
    let r = alphas.len();
    if point.depth() != r {
        return Err(ZetaError::InvalidParameter(format!(
            "{r} offsets but the point has {} coordinates",
            point.depth()
        )));
    }
    if h.i > r {
        return Err(ZetaError::InvalidParameter(format!("{h} does not exist at depth {r}")));
    }
    let offset = hyperplane_offset(point, h).norm();
    if offset > policy.pole_tolerance {
        return Err(ZetaError::OffHyperplane { hyperplane: h, offset });
    }
    let region = region_index(point).m;
    let zero = || EvalResult {
        value: Complex64::new(0.0, 0.0),
        error_bound: 0.0,
        region_index: region,
        diagnostics: Diagnostics::default(),
    };
    if h.i == 1 && h.k > 0 {
        return Ok(zero());
    }

    let coords = point.coords();
    let factor = if h.i == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        chain_factor(alphas, h, &coords)?
    };
    if factor == Complex64::new(0.0, 0.0) {
        return Ok(zero());
    }

    if h.i == r {
        return Ok(EvalResult {
            value: factor,
            error_bound: 4.0 * f64::EPSILON * factor.norm() * (h.k as f64 + 1.0),
            region_index: region,
            diagnostics: Diagnostics::default(),
        });
    }
    let tail = TwistParams::hurwitz(alphas[h.i..].to_vec())?;
    let tail_point = EvalPoint::new(coords[h.i..].to_vec());
    let mut scaled = policy.clone();
    scaled.eps = policy.eps / factor.norm().max(1.0);
    let inner = eval_continued(&tail, &tail_point, &scaled)?;
    let value = factor * inner.value;
    Ok(EvalResult {
        value,
        error_bound: factor.norm() * inner.error_bound + 4.0 * f64::EPSILON * value.norm() * (h.k as f64 + 1.0),
        region_index: region,
        diagnostics: inner.diagnostics,
    })
}

fn chain_factor(alphas: &[Real], h: Hyperplane, coords: &[Complex64]) -> Result<Complex64> {
    let i = h.i;
    let k = h.k as usize;
    let singular = |d: usize, j: usize, dist: f64| ZetaError::PoleProximity {
        hyperplane: Hyperplane::new(d, j as u32),
        distance: dist,
    };
    let exact_alphas: Option<Vec<Rational>> = alphas[..i].iter().map(|a| a.exact().cloned()).collect();
    let exact_coords: Option<Vec<Rational>> = coords[..i - 1].iter().map(|&z| exact_real(z)).collect();
    if let (Some(a), Some(c)) = (exact_alphas, exact_coords) {
        let mut ts = Vec::with_capacity(i - 1);
        let mut partial = Rational::zero();
        for (d, x) in c.iter().enumerate() {
            partial += x;
            let t = partial.clone() - Rational::from_i64(d as i64 + 1);
            for j in 0..=k {
                if (t.clone() + Rational::from_i64(j as i64)).is_zero() {
                    return Err(singular(d + 1, j, 0.0));
                }
            }
            ts.push(t);
        }
        let v = first_row_chain(&a, i, &ts, k)?;
        return Ok(Complex64::new(rational_to_f64(&v), 0.0));
    }
    let a: Vec<Complex64> = alphas[..i].iter().map(|x| Complex64::new(x.value(), 0.0)).collect();
    let mut ts = Vec::with_capacity(i - 1);
    let mut partial = Complex64::new(0.0, 0.0);
    for (d, x) in coords[..i - 1].iter().enumerate() {
        partial += x;
        let t = partial - (d + 1) as f64;
        for j in 0..=k {
            let dist = (t + j as f64).norm();
            if dist < 1e-12 {
                return Err(singular(d + 1, j, dist));
            }
        }
        ts.push(t);
    }
    first_row_chain(&a, i, &ts, k)
}

/// Residue for a general parameter tuple; only the Hurwitz case (λ = 0) is
/// available.
pub fn residue(params: &TwistParams, h: Hyperplane, point: &EvalPoint, policy: &TruncationPolicy) -> Result<EvalResult> {
    if !params.is_hurwitz() {
        return Err(ZetaError::Unsupported(
            "residues of twisted (λ != 0) functions are not implemented".into(),
        ));
    }
    residue_hurwitz(params.alphas(), h, point, policy)
}
