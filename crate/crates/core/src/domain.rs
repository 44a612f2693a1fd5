//! Parameter tuples, evaluation points, hyperplanes and the elementary
//! coefficient functions shared by every other module.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// Floats whose binary expansion terminates within this many fractional bits
/// are treated as exact rationals (0.5, 0.25, 0.375, ...).
pub const DYADIC_EXACT_BITS: i32 = 20;

/// A real parameter that remembers an exact rational value when one is known.
///
/// Parameters typed as fractions (`1/3`) are exact; decimal inputs stay
/// floating point unless they are short dyadic rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    value: f64,
    exact: Option<BigRational>,
}

impl Real {
    pub fn from_f64(value: f64) -> Self {
        let exact = short_dyadic(value);
        Real { value, exact }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let value = rational_to_f64(&q);
        Real { value, exact: Some(q) }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// True when the parameter is exactly zero (a float 0.0 counts).
    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(q) => q.is_zero(),
            None => self.value == 0.0,
        }
    }

    /// Integer test: exact for rationals, within `tol` for floats.
    pub fn is_integer(&self, tol: f64) -> bool {
        match &self.exact {
            Some(q) => q.is_integer(),
            None => (self.value - self.value.round()).abs() <= tol,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Real::from_rational(a + b),
            _ => Real::from_f64(self.value + other.value),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Real::from_rational(a - b),
            _ => Real::from_f64(self.value - other.value),
        }
    }

    /// Representative in [0, 1), snapping values within `tol` of an integer
    /// to exactly zero.
    pub fn frac(&self, tol: f64) -> Real {
        match &self.exact {
            Some(q) => Real::from_rational(q - q.floor()),
            None => {
                if (self.value - self.value.round()).abs() <= tol {
                    Real::zero()
                } else {
                    Real::from_f64(self.value - self.value.floor())
                }
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) if !q.is_integer() && self.value.to_string().len() > 12 => write!(f, "{q}"),
            _ => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Real {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| ZetaError::InvalidParameter(format!("bad numerator in '{s}'")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| ZetaError::InvalidParameter(format!("bad denominator in '{s}'")))?;
            if den.is_zero() {
                return Err(ZetaError::InvalidParameter(format!("zero denominator in '{s}'")));
            }
            return Ok(Real::from_rational(BigRational::new(num, den)));
        }
        let v: f64 = s
            .parse()
            .map_err(|_| ZetaError::InvalidParameter(format!("cannot parse real '{s}'")))?;
        if !v.is_finite() {
            return Err(ZetaError::InvalidParameter(format!("non-finite real '{s}'")));
        }
        Ok(Real::from_f64(v))
    }
}

fn short_dyadic(v: f64) -> Option<BigRational> {
    if !v.is_finite() || v.abs() >= (1u64 << 40) as f64 {
        return None;
    }
    let scaled = v * (1u64 << DYADIC_EXACT_BITS) as f64;
    if scaled.fract() != 0.0 {
        return None;
    }
    BigRational::from_float(v)
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down both parts for very large numerators/denominators.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Twist and shift parameters (λ, α) of one multiple Lerch zeta function.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistParams {
    lambdas: Vec<Real>,
    alphas: Vec<Real>,
    mus: Vec<Real>,
}

impl TwistParams {
    pub fn new(lambdas: Vec<Real>, alphas: Vec<Real>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(ZetaError::InvalidParameter("depth must be at least 1".into()));
        }
        if lambdas.len() != alphas.len() {
            return Err(ZetaError::InvalidParameter(format!(
                "{} lambdas but {} alphas",
                lambdas.len(),
                alphas.len()
            )));
        }
        for (name, list) in [("lambda", &lambdas), ("alpha", &alphas)] {
            for (i, x) in list.iter().enumerate() {
                let v = x.value();
                if !(0.0..1.0).contains(&v) {
                    return Err(ZetaError::InvalidParameter(format!(
                        "{name}_{} = {v} is outside [0, 1)",
                        i + 1
                    )));
                }
            }
        }
        let mut mus = Vec::with_capacity(lambdas.len());
        let mut acc = Real::zero();
        for l in &lambdas {
            acc = acc.add(l);
            mus.push(acc.clone());
        }
        Ok(TwistParams { lambdas, alphas, mus })
    }

    /// Multiple Hurwitz zeta parameters (all twists zero).
    pub fn hurwitz(alphas: Vec<Real>) -> Result<Self> {
        let lambdas = vec![Real::zero(); alphas.len()];
        Self::new(lambdas, alphas)
    }

    /// The multiple zeta function of depth `r`.
    pub fn zeta(r: usize) -> Self {
        Self::hurwitz(vec![Real::zero(); r]).expect("depth must be positive")
    }

    pub fn from_f64(lambdas: &[f64], alphas: &[f64]) -> Result<Self> {
        Self::new(
            lambdas.iter().map(|&x| Real::from_f64(x)).collect(),
            alphas.iter().map(|&x| Real::from_f64(x)).collect(),
        )
    }

    pub fn depth(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Real] {
        &self.lambdas
    }

    pub fn alphas(&self) -> &[Real] {
        &self.alphas
    }

    /// Partial sums μ_i = λ_1 + ... + λ_i.
    pub fn mus(&self) -> &[Real] {
        &self.mus
    }

    pub fn is_hurwitz(&self) -> bool {
        self.lambdas.iter().all(Real::is_zero)
    }

    /// Parameters of the trailing function of depth r - i (drops the first i
    /// entries). Returns `None` when nothing is left.
    pub fn suffix(&self, i: usize) -> Option<TwistParams> {
        if i >= self.depth() {
            return None;
        }
        Some(
            TwistParams::new(self.lambdas[i..].to_vec(), self.alphas[i..].to_vec())
                .expect("suffix of valid parameters is valid"),
        )
    }
}

/// A point of C^r stored as a base plus integer shifts, so points produced by
/// shifting coordinates compare and hash exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalPoint {
    base: Vec<Complex64>,
    shift: Vec<i64>,
}

impl EvalPoint {
    pub fn new(base: Vec<Complex64>) -> Self {
        let shift = vec![0; base.len()];
        EvalPoint { base, shift }
    }

    pub fn real(coords: &[f64]) -> Self {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn with_shift(base: Vec<Complex64>, shift: Vec<i64>) -> Self {
        assert_eq!(base.len(), shift.len(), "base and shift lengths differ");
        EvalPoint { base, shift }
    }

    pub fn depth(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Complex64] {
        &self.base
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// The represented point base + shift.
    pub fn coords(&self) -> Vec<Complex64> {
        self.base
            .iter()
            .zip(&self.shift)
            .map(|(b, &k)| b + k as f64)
            .collect()
    }

    pub fn coord(&self, i: usize) -> Complex64 {
        self.base[i] + self.shift[i] as f64
    }

    /// Same base, first coordinate shifted by a further `k`.
    pub fn shifted_first(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.shift[0] += k;
        out
    }

    /// Real part of s_1 + ... + s_i.
    pub fn partial_real_sum(&self, i: usize) -> f64 {
        (0..i).map(|j| self.coord(j).re).sum()
    }

    pub fn partial_sum(&self, i: usize) -> Complex64 {
        (0..i).map(|j| self.coord(j)).sum()
    }
}

impl PartialEq for EvalPoint {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift
            && self.base.len() == other.base.len()
            && self
                .base
                .iter()
                .zip(&other.base)
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits())
    }
}

impl Eq for EvalPoint {}

impl Hash for EvalPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in &self.base {
            b.re.to_bits().hash(state);
            b.im.to_bits().hash(state);
        }
        self.shift.hash(state);
    }
}

/// The hyperplane H_{i,k} = { s : s_1 + ... + s_i = i - k }.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    pub i: usize,
    pub k: u32,
}

impl Hyperplane {
    pub fn new(i: usize, k: u32) -> Self {
        assert!(i >= 1, "hyperplane index i starts at 1");
        Hyperplane { i, k }
    }

    /// Value of s_1 + ... + s_i on this hyperplane.
    pub fn level(&self) -> f64 {
        self.i as f64 - self.k as f64
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{{{},{}}}", self.i, self.k)
    }
}

/// Index m of the region U_r(m) = { Re(s_1 + ... + s_i) > i - m for all i }.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionIndex {
    pub m: u32,
}

impl RegionIndex {
    pub fn contains(&self, s: &EvalPoint) -> bool {
        (1..=s.depth()).all(|i| s.partial_real_sum(i) > i as f64 - self.m as f64)
    }
}

/// Normalized Pochhammer symbol (s)_k = s(s+1)...(s+k)/(k+1)!, with (s)_{-1} = 1.
pub fn pochhammer(s: Complex64, k: i64) -> Complex64 {
    assert!(k >= -1, "pochhammer index must be at least -1");
    let mut acc = Complex64::one();
    for j in 0..=k {
        acc = acc * (s + j as f64) / (j + 1) as f64;
    }
    acc
}

/// Values (s)_{-1}, (s)_0, ..., (s)_{kmax}; element j holds (s)_{j-1}.
pub fn pochhammer_table(s: Complex64, kmax: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(kmax + 2);
    let mut acc = Complex64::one();
    out.push(acc);
    for j in 0..=kmax {
        acc = acc * (s + j as f64) / (j + 1) as f64;
        out.push(acc);
    }
    out
}

/// e(a) = exp(2 pi i a).
pub fn unit_twist(a: f64) -> Complex64 {
    let f = a - a.floor();
    let quarter = f * 4.0;
    if quarter.fract() == 0.0 {
        return match quarter as u8 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * f)
}

/// Smallest m >= 0 with s in U_r(m).
pub fn region_index(s: &EvalPoint) -> RegionIndex {
    let mut m: i64 = 0;
    for i in 1..=s.depth() {
        let need = (i as f64 - s.partial_real_sum(i)).floor() as i64 + 1;
        m = m.max(need);
    }
    RegionIndex { m: m as u32 }
}

/// s_1 + ... + s_i - (i - k); zero exactly on H_{i,k}.
pub fn hyperplane_offset(s: &EvalPoint, h: Hyperplane) -> Complex64 {
    assert!(h.i <= s.depth(), "hyperplane index exceeds depth");
    s.partial_sum(h.i) - h.level()
}
