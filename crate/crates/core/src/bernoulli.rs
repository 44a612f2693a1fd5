//! Exact Bernoulli polynomials, their zero-index sets, and the Apostol-type
//! polynomials P_n(a, c) defined by e^{ax}/(e^x - c) = sum P_n(a, c) x^n / n!.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::{rational_to_f64, Real};
use crate::error::{Result, ZetaError};

/// Exact rational scalar used throughout the exact code paths.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Dense polynomial with rational coefficients; index j holds the t^j term.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigInt::from(j))
            .collect();
        RatPoly::new(coeffs)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        let coeffs = (0..n)
            .map(|j| self.coeffs.get(j).unwrap_or(&zero) + other.coeffs.get(j).unwrap_or(&zero))
            .collect();
        RatPoly::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::new(coeffs)
    }

    /// The polynomial t -> p(a + b t).
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> RatPoly {
        let lin = RatPoly::new(vec![a.clone(), b.clone()]);
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&RatPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Quotient and remainder of Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[top - dd + j] -= &c * dc;
                }
            }
            quot[top - dd] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor over the rationals (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Rational roots, found by testing every candidate p/q allowed by the
    /// rational root theorem (p | constant term, q | leading coefficient after
    /// clearing denominators). Returns them sorted, without multiplicity.
    pub fn rational_roots(&self) -> Result<Vec<Rational>> {
        let Some(_) = self.degree() else {
            return Err(ZetaError::InvalidParameter("zero polynomial has every root".into()));
        };
        let mut roots = Vec::new();
        let mut start = 0;
        while self.coeffs[start].is_zero() {
            start += 1;
        }
        if start > 0 {
            roots.push(Rational::zero());
        }
        let ints = integer_coefficients(&self.coeffs[start..]);
        if ints.len() == 1 {
            return Ok(roots);
        }
        let a0 = to_u128(ints[0].abs())?;
        let an = to_u128(ints.last().unwrap().abs())?;
        let ps = divisors(a0);
        let qs = divisors(an);
        let floats: Vec<f64> = ints.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
        let deg = floats.len() - 1;
        for &q in &qs {
            for &p in &ps {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for sign in [1i32, -1] {
                    let x = sign as f64 * p as f64 / q as f64;
                    if !float_root_possible(&floats, deg, x) {
                        continue;
                    }
                    let cand = Rational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                    let val: BigInt = ints
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            c * num_traits::pow(cand.numer().clone(), i)
                                * num_traits::pow(cand.denom().clone(), deg - i)
                        })
                        .sum();
                    if val.is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

fn integer_coefficients(coeffs: &[Rational]) -> Vec<BigInt> {
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn to_u128(x: BigInt) -> Result<u128> {
    x.to_u128()
        .ok_or_else(|| ZetaError::Unsupported("coefficient too large for the root sieve".into()))
}

fn divisors(n: u128) -> Vec<u128> {
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2u128;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut out = vec![1u128];
    for (p, e) in primes {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Floating prefilter with a Horner rounding bound; only rejects candidates
/// that certainly are not roots.
fn float_root_possible(coeffs: &[f64], deg: usize, x: f64) -> bool {
    let mut v = 0.0f64;
    let mut a = 0.0f64;
    for c in coeffs.iter().rev() {
        v = v * x + c;
        a = a * x.abs() + c.abs();
    }
    if !v.is_finite() || !a.is_finite() {
        return true;
    }
    let gamma = 4.0 * (2 * deg + 4) as f64 * f64::EPSILON;
    v.abs() <= gamma * a
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{j}")?,
                (_, false) => write!(f, "{mag}*t^{j}")?,
            }
        }
        Ok(())
    }
}

/// B_n(t) with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPoly {
    pub n: usize,
    pub poly: RatPoly,
}

impl BernoulliPoly {
    pub fn coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.poly.eval(t)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.poly.eval_complex(t)
    }
}

#[derive(Default)]
struct Cache {
    numbers: Vec<Rational>,
    polys: Vec<Arc<BernoulliPoly>>,
}

fn cache() -> &'static RwLock<Cache> {
    static CACHE: OnceLock<RwLock<Cache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Cache::default()))
}

fn extend_cache(c: &mut Cache, n: usize) {
    // b_m = -1/(m+1) * sum_{j<m} C(m+1, j) b_j, with b_1 = -1/2.
    while c.numbers.len() <= n {
        let m = c.numbers.len();
        if m == 0 {
            c.numbers.push(Rational::one());
            continue;
        }
        let row = binomial_row(m + 1);
        let s: Rational = (0..m)
            .map(|j| &c.numbers[j] * &row[j])
            .fold(Rational::zero(), |a, b| a + b);
        c.numbers.push(-s / BigInt::from(m + 1));
    }
    while c.polys.len() <= n {
        let m = c.polys.len();
        let row = binomial_row(m);
        let coeffs = (0..=m).map(|k| &c.numbers[m - k] * &row[k]).collect();
        c.polys.push(Arc::new(BernoulliPoly {
            n: m,
            poly: RatPoly::new(coeffs),
        }));
    }
}

fn ensure(n: usize) {
    if cache().read().expect("cache poisoned").polys.len() > n {
        return;
    }
    let mut w = cache().write().expect("cache poisoned");
    extend_cache(&mut w, n);
}

/// The n-th Bernoulli number b_n = B_n(0), so b_1 = -1/2.
pub fn bernoulli_number(n: usize) -> Rational {
    ensure(n);
    cache().read().expect("cache poisoned").numbers[n].clone()
}

pub fn bernoulli_poly(n: usize) -> Arc<BernoulliPoly> {
    ensure(n);
    cache().read().expect("cache poisoned").polys[n].clone()
}

/// B_0, ..., B_n.
pub fn bernoulli_polys(n: usize) -> Vec<Arc<BernoulliPoly>> {
    ensure(n);
    cache().read().expect("cache poisoned").polys[..=n].to_vec()
}

pub fn bernoulli_eval(n: usize, t: &Rational) -> Rational {
    bernoulli_poly(n).eval(t)
}

pub fn bernoulli_eval_complex(n: usize, t: Complex64) -> Complex64 {
    bernoulli_poly(n).eval_complex(t)
}

/// The set K = { n >= 1 : B_n(d) = 0 }.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroIndexSet {
    Empty,
    /// All odd n >= 3 (d = 0).
    OddFrom3,
    /// All odd n >= 1 (d = 1/2).
    OddFrom1,
    /// Floating d: indices up to `nmax` where |B_n(d)| fell below the
    /// threshold. Nothing is claimed beyond `nmax`.
    Numeric { nmax: usize, indeterminate: Vec<usize> },
}

impl ZeroIndexSet {
    /// `Some(true)` if B_n(d) = 0, `Some(false)` if it is certainly nonzero,
    /// `None` if undecided.
    pub fn contains(&self, n: usize) -> Option<bool> {
        match self {
            ZeroIndexSet::Empty => Some(false),
            ZeroIndexSet::OddFrom3 => Some(n % 2 == 1 && n >= 3),
            ZeroIndexSet::OddFrom1 => Some(n % 2 == 1),
            ZeroIndexSet::Numeric { nmax, indeterminate } => {
                if n > *nmax || indeterminate.contains(&n) {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ZeroIndexSet::Numeric { .. })
    }
}

impl fmt::Display for ZeroIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroIndexSet::Empty => write!(f, "{{}}"),
            ZeroIndexSet::OddFrom3 => write!(f, "{{odd n >= 3}}"),
            ZeroIndexSet::OddFrom1 => write!(f, "{{odd n >= 1}}"),
            ZeroIndexSet::Numeric { nmax, indeterminate } => {
                write!(f, "{{indeterminate: {indeterminate:?}; checked n <= {nmax}}}")
            }
        }
    }
}

/// Zero-index set for a rational d in (-1, 1). The only rational zeros of
/// Bernoulli polynomials are 0, 1/2 and 1, so the answer is one of three forms.
pub fn zero_index_set(d: &Rational) -> Result<ZeroIndexSet> {
    let one = Rational::one();
    if d >= &one || d <= &-one {
        return Err(ZetaError::InvalidParameter(format!("d = {d} is outside (-1, 1)")));
    }
    Ok(if d.is_zero() {
        ZeroIndexSet::OddFrom3
    } else if d == &rat(1, 2) {
        ZeroIndexSet::OddFrom1
    } else {
        ZeroIndexSet::Empty
    })
}

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;

/// Zero-index set for a floating d. Short dyadic inputs are exact and go to
/// [`zero_index_set`]; otherwise |B_n(d)| is evaluated exactly at the binary
/// value of d and small values are reported as indeterminate.
pub fn zero_index_set_numeric(d: f64, nmax: usize, threshold: f64) -> Result<ZeroIndexSet> {
    if !(d > -1.0 && d < 1.0) {
        return Err(ZetaError::InvalidParameter(format!("d = {d} is outside (-1, 1)")));
    }
    let r = Real::from_f64(d);
    if let Some(q) = r.exact() {
        return zero_index_set(q);
    }
    let exact = Rational::from_float(d).expect("finite float");
    let indeterminate = (1..=nmax)
        .filter(|&n| rational_to_f64(&bernoulli_eval(n, &exact).abs()) < threshold)
        .collect();
    Ok(ZeroIndexSet::Numeric { nmax, indeterminate })
}

/// Dispatch on whether the real carries an exact value.
pub fn zero_index_set_real(d: &Real, nmax: usize, threshold: f64) -> Result<ZeroIndexSet> {
    match d.exact() {
        Some(q) => zero_index_set(q),
        None => zero_index_set_numeric(d.value(), nmax, threshold),
    }
}

/// P_n(a, c) as a polynomial in a with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ApostolPoly {
    pub n: usize,
    pub c: Complex64,
    /// Coefficient of a^j at index j.
    pub coeffs: Vec<Complex64>,
}

impl ApostolPoly {
    pub fn eval(&self, a: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * a + c)
    }
}

/// P_0, ..., P_n for the parameter c, from
/// P_n = (a^n - sum_{j<n} C(n, j) P_j) / (1 - c).
pub fn apostol_polys(n: usize, c: Complex64) -> Result<Vec<ApostolPoly>> {
    if c == Complex64::new(1.0, 0.0) {
        return Err(ZetaError::InvalidParameter(
            "c = 1 has no Apostol generating series".into(),
        ));
    }
    let inv = (Complex64::new(1.0, 0.0) - c).inv();
    let mut out: Vec<ApostolPoly> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let row = binomial_row(m);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m + 1];
        coeffs[m] = Complex64::new(1.0, 0.0);
        for (j, p) in out.iter().enumerate() {
            let b = row[j].to_f64().unwrap_or(f64::INFINITY);
            for (i, pc) in p.coeffs.iter().enumerate() {
                coeffs[i] -= pc * b;
            }
        }
        for x in coeffs.iter_mut() {
            *x *= inv;
        }
        out.push(ApostolPoly { n: m, c, coeffs });
    }
    Ok(out)
}

/// Values P_0(a, c), ..., P_n(a, c).
pub fn apostol_values(n: usize, a: f64, c: Complex64) -> Result<Vec<Complex64>> {
    let a = Complex64::new(a, 0.0);
    Ok(apostol_polys(n, c)?.iter().map(|p| p.eval(a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_of(coeffs: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn first_polynomials() {
        let ps = bernoulli_polys(3);
        assert_eq!(ps[0].poly, poly_of(&[(1, 1)]));
        assert_eq!(ps[1].poly, poly_of(&[(-1, 2), (1, 1)]));
        assert_eq!(ps[2].poly, poly_of(&[(1, 6), (-1, 1), (1, 1)]));
        assert!(ps[3].eval(&rat(1, 2)).is_zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(bernoulli_eval(1, &rat(0, 1)), rat(-1, 2));
        assert_eq!(bernoulli_eval(2, &rat(0, 1)), rat(1, 6));
        assert_eq!(bernoulli_eval(5, &rat(0, 1)), rat(0, 1));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        let z = bernoulli_eval_complex(2, Complex64::new(0.5, 0.0));
        assert!((z.re + 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn monic_and_symmetric() {
        let one = Rational::one();
        for p in bernoulli_polys(25) {
            assert!(p.poly.leading().unwrap().is_one());
            let reflected = p.poly.compose_linear(&one, &-one.clone());
            let sign = if p.n % 2 == 0 { one.clone() } else { -one.clone() };
            assert_eq!(reflected, p.poly.scale(&sign));
        }
    }

    #[test]
    fn zero_sets() {
        assert_eq!(zero_index_set(&rat(0, 1)).unwrap(), ZeroIndexSet::OddFrom3);
        assert_eq!(zero_index_set(&rat(1, 2)).unwrap(), ZeroIndexSet::OddFrom1);
        assert_eq!(zero_index_set(&rat(1, 3)).unwrap(), ZeroIndexSet::Empty);
        assert_eq!(zero_index_set(&rat(-1, 2)).unwrap(), ZeroIndexSet::Empty);
        assert!(zero_index_set(&rat(1, 1)).is_err());
        assert!(zero_index_set(&rat(-3, 2)).is_err());
    }

    #[test]
    fn numeric_zero_sets() {
        match zero_index_set_numeric(0.123456, 10, DEFAULT_ZERO_THRESHOLD).unwrap() {
            ZeroIndexSet::Numeric { indeterminate, .. } => assert!(indeterminate.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
        match zero_index_set_numeric(0.5 + 1e-15, 3, 1e-12).unwrap() {
            ZeroIndexSet::Numeric { indeterminate, .. } => assert_eq!(indeterminate, vec![1, 3]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            zero_index_set_numeric(0.25, 10, DEFAULT_ZERO_THRESHOLD).unwrap(),
            ZeroIndexSet::Empty
        );
        assert_eq!(
            zero_index_set_numeric(0.5, 10, DEFAULT_ZERO_THRESHOLD).unwrap(),
            ZeroIndexSet::OddFrom1
        );
    }

    #[test]
    fn membership() {
        assert_eq!(ZeroIndexSet::OddFrom3.contains(1), Some(false));
        assert_eq!(ZeroIndexSet::OddFrom3.contains(3), Some(true));
        assert_eq!(ZeroIndexSet::OddFrom1.contains(1), Some(true));
        let num = ZeroIndexSet::Numeric { nmax: 4, indeterminate: vec![3] };
        assert_eq!(num.contains(3), None);
        assert_eq!(num.contains(2), Some(false));
        assert_eq!(num.contains(9), None);
    }

    #[test]
    fn gcd_and_division() {
        // (t - 1)(t - 2) and (t - 1)(t + 3) share t - 1.
        let a = poly_of(&[(2, 1), (-3, 1), (1, 1)]);
        let b = poly_of(&[(-3, 1), (2, 1), (1, 1)]);
        assert_eq!(a.gcd(&b), poly_of(&[(-1, 1), (1, 1)]));
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn root_sieve_small_cases() {
        let p = poly_of(&[(0, 1), (-1, 3), (1, 1)]); // t^2 - t/3
        assert_eq!(p.rational_roots().unwrap(), vec![rat(0, 1), rat(1, 3)]);
        let b3 = bernoulli_poly(3);
        assert_eq!(
            b3.poly.rational_roots().unwrap(),
            vec![rat(0, 1), rat(1, 2), rat(1, 1)]
        );
        assert!(bernoulli_poly(2).poly.rational_roots().unwrap().is_empty());
        assert_eq!(bernoulli_poly(1).poly.rational_roots().unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn apostol_examples() {
        let c = Complex64::new(-1.0, 0.0);
        let v = apostol_values(4, 0.0, c).unwrap();
        assert!((v[0] - 0.5).norm() < 1e-15);
        let w = apostol_values(6, 0.7, Complex64::new(0.0, 0.0)).unwrap();
        for (n, x) in w.iter().enumerate() {
            assert!((x - (-0.3f64).powi(n as i32)).norm() < 1e-13);
        }
        assert!(apostol_polys(3, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn apostol_generating_identity() {
        // e^{ax} = (e^x - c) * sum P_n x^n / n!, coefficient of x^n times n!:
        // a^n = sum_{j<=n} C(n,j) P_j - c P_n.
        let c = Complex64::new(0.3, -0.8);
        let a = Complex64::new(0.4, 0.0);
        let ps = apostol_polys(12, c).unwrap();
        let vals: Vec<Complex64> = ps.iter().map(|p| p.eval(a)).collect();
        for n in 0..=12 {
            let row = binomial_row(n);
            let s: Complex64 = (0..=n).map(|j| vals[j] * row[j].to_f64().unwrap()).sum();
            let scale: f64 = (0..=n).map(|j| vals[j].norm() * row[j].to_f64().unwrap()).sum();
            let lhs = a.powu(n as u32);
            assert!((s - c * vals[n] - lhs).norm() < 1e-12 * (1.0 + scale));
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(bernoulli_poly(2).poly.to_string(), "t^2 - t + 1/6");
        assert_eq!(ZeroIndexSet::OddFrom3.to_string(), "{odd n >= 3}");
    }

    proptest! {
        #[test]
        fn derivative_relation(n in 0usize..30) {
            let lhs = bernoulli_poly(n + 1).poly.derivative();
            let rhs = bernoulli_poly(n).poly.scale(&Rational::from_integer(BigInt::from(n + 1)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn difference_relation(n in 1usize..30) {
            let p = &bernoulli_poly(n).poly;
            let shifted = p.compose_linear(&Rational::one(), &Rational::one());
            let expect = RatPoly::monomial(Rational::from_integer(BigInt::from(n)), n - 1);
            prop_assert_eq!(shifted.sub(p), expect);
        }

        #[test]
        fn horner_matches_power_sum(n in 0usize..20, num in -20i64..20, den in 1i64..20) {
            let t = rat(num, den);
            let p = bernoulli_poly(n);
            let direct: Rational = p.coeffs().iter().enumerate()
                .map(|(j, c)| c * num_traits::pow(t.clone(), j))
                .fold(Rational::zero(), |a, b| a + b);
            prop_assert_eq!(p.eval(&t), direct);
        }
    }
}
