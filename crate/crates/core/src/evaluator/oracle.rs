//! Independent Hurwitz zeta reference: Euler-Maclaurin summation of
//! sum_{n >= 0} (n + a)^{-s}.

use num_complex::Complex64;

use super::direct::neg_pow;
use crate::bernoulli::bernoulli_number;
use crate::domain::{rational_to_f64, Hyperplane};
use crate::error::{Result, ZetaError};

const MAX_TERMS: usize = 60;

/// Hurwitz zeta ζ(s, a) = sum_{n >= 0} (n + a)^{-s}, continued to s != 1.
pub fn euler_maclaurin_hurwitz(s: Complex64, a: f64, eps: f64) -> Result<Complex64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(ZetaError::InvalidParameter(format!("a = {a} must be positive")));
    }
    let dist = (s - 1.0).norm();
    if dist < 1e-14 {
        return Err(ZetaError::PoleProximity {
            hyperplane: Hyperplane::new(1, 0),
            distance: dist,
        });
    }
    // Smallest head for which the correction series still reaches full
    // precision; a longer head only adds cancellation when Re s < 0.
    let n = (((40.0 + s.norm()) / (2.0 * std::f64::consts::PI) - a).ceil()).max(1.0) as usize;
    let mut head = Complex64::new(0.0, 0.0);
    for j in 0..n {
        head += neg_pow(j as f64 + a, s);
    }
    let x = n as f64 + a;
    let mut total = head + neg_pow(x, s - 1.0) / (s - 1.0) + neg_pow(x, s) * 0.5;
    // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}.
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut xpow = neg_pow(x, s + 1.0);
    let mut last = f64::INFINITY;
    for j in 1..=MAX_TERMS {
        let b = rational_to_f64(&bernoulli_number(2 * j));
        let term = rising * xpow * (b / fact);
        total += term;
        let mag = term.norm();
        if mag <= eps * total.norm().max(1e-300) * 1e-2 || mag > last {
            break;
        }
        last = mag;
        let k = 2 * j as u32;
        rising = rising * (s + (k - 1) as f64) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
        xpow /= x * x;
    }
    Ok(total)
}
