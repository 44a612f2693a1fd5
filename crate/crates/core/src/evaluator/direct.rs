//! Truncated nested sums with explicit tail majorants.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::domain::{unit_twist, Real};

const EPS: f64 = f64::EPSILON;

/// Twist e(λ n), evaluated with exact integer reduction when λ is a rational
/// with a small denominator.
#[derive(Clone, Debug)]
pub(crate) struct Twist {
    value: f64,
    ratio: Option<(u64, u64)>,
}

impl Twist {
    pub fn new(lambda: &Real) -> Self {
        let ratio = lambda.exact().and_then(|q| {
            let num = q.numer().to_u64()?;
            let den = q.denom().to_u64()?;
            (den <= 1 << 32).then_some((num % den, den))
        });
        Twist { value: lambda.value(), ratio }
    }

    pub fn at(&self, n: u64) -> Complex64 {
        if let Some((p, q)) = self.ratio {
            let r = ((p as u128 * n as u128) % q as u128) as u64;
            return unit_twist(r as f64 / q as f64);
        }
        if self.value == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let x = n as f64;
        let p = self.value * x;
        let lo = self.value.mul_add(x, -p);
        unit_twist((p - p.floor()) + lo)
    }
}

/// (x)^{-s} for x > 0, via the real logarithm.
pub(crate) fn neg_pow(x: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        return Complex64::new(x.powf(-s.re), 0.0);
    }
    let l = x.ln();
    Complex64::from_polar(x.powf(-s.re), -s.im * l)
}

/// Upper bound for the absolute nested sum, as a function of the real part
/// of the first coordinate, built from the remaining coordinates.
///
/// For the trailing coordinates j >= 2 the partial sums satisfy
/// P_j(n) <= c_j (n + a_j)^{e_j}; together they give
/// |terms with n_1 = n| <= C (n + a_1)^{E - Re s_1}.
#[derive(Clone, Debug)]
pub(crate) struct CrudeBound {
    ln_c: f64,
    e: f64,
    a1: f64,
    n0: f64,
}

impl CrudeBound {
    /// `rest` holds (Re s_j, a_j) for j >= 2; `n0` is the smallest admissible n_1.
    pub fn new(a1: f64, rest: &[(f64, f64)], n0: u64) -> Self {
        let mut ln_c = 0.0;
        let mut e = 0.0;
        for &(sig, a) in rest {
            let (c, ej) = if sig > 1.1 {
                ((1.0 + a).powf(-sig) + (1.0 + a).powf(1.0 - sig) / (sig - 1.0), 0.0)
            } else {
                let s = sig.min(0.9);
                (1.0 + 1.0 / (1.0 - s), 1.0 - s)
            };
            let kappa = ((1.0 + a) / (1.0 + a1)).max(1.0);
            ln_c += c.ln() + ej * kappa.ln();
            e += ej;
        }
        CrudeBound { ln_c, e, a1, n0: n0 as f64 }
    }

    /// Exponent D = Re s_1 - E - 1 of the tail; positive means summable.
    pub fn decay(&self, sigma1: f64) -> f64 {
        sigma1 - self.e - 1.0
    }

    /// Bound on the terms with n_1 > m.
    pub fn tail(&self, sigma1: f64, m: u64) -> f64 {
        let d = self.decay(sigma1);
        if d <= 0.0 {
            return f64::INFINITY;
        }
        (self.ln_c - d * (m as f64 + self.a1).ln()).exp() / d
    }

    /// Smallest cutoff whose tail is at most `target`, if one below 1e15 exists.
    pub fn cutoff(&self, sigma1: f64, target: f64) -> Option<u64> {
        let d = self.decay(sigma1);
        if d <= 0.0 || target <= 0.0 {
            return None;
        }
        let x = ((self.ln_c - (target * d).ln()) / d).exp() - self.a1;
        if !(x < 1e15) {
            return None;
        }
        Some((((x * (1.0 + 1e-9)).floor() + 1.0).max(self.n0)) as u64)
    }

    /// Cutoff making the tail at most `eta` times [`Self::majorant`]; works in
    /// logarithms so tiny majorants do not underflow.
    pub fn cutoff_relative(&self, sigma1: f64, eta: f64) -> Option<u64> {
        let d = self.decay(sigma1);
        if d <= 0.0 || eta <= 0.0 {
            return None;
        }
        let b = self.n0 + self.a1;
        let ln_x = (-eta.ln() - d.ln() + (d + 1.0) * b.ln() - (1.0 + b / d).ln()) / d;
        let x = ln_x.exp() - self.a1;
        if !(x < 1e15) {
            return None;
        }
        Some((((x * (1.0 + 1e-9)).floor() + 1.0).max(self.n0)) as u64)
    }

    /// Bound on the whole absolute sum, finite when D > 0.
    pub fn majorant(&self, sigma1: f64) -> f64 {
        let dp = sigma1 - self.e;
        if dp <= 1.0 {
            return f64::INFINITY;
        }
        let base = self.n0 + self.a1;
        (self.ln_c - dp * base.ln()).exp() * (1.0 + base / (dp - 1.0))
    }

    /// Geometric decay factor of the majorant per unit shift of Re s_1.
    pub fn ratio(&self) -> f64 {
        1.0 / (self.n0 + self.a1)
    }
}

/// Running nested partial sums. After `n` steps, `partial[j]` holds
/// sum over n >= n_{j+1} > ... > n_d >= 1 of the trailing product, with the
/// optional restriction n_1 >= 2 on the outermost index.
pub(crate) struct NestedSums {
    pub partial: Vec<Complex64>,
    pub abs: Vec<f64>,
    pub rel_err: f64,
}

/// Plain truncation to absolute accuracy `target`; returns the value, its
/// error bound and the number of outer terms.
pub(crate) fn truncated_sum(
    twists: &[Twist],
    offsets: &[f64],
    s: &[Complex64],
    target: f64,
    outer_from_two: bool,
    max_terms: u64,
) -> Option<(Complex64, f64, u64)> {
    let rest: Vec<(f64, f64)> = s[1..].iter().zip(&offsets[1..]).map(|(x, &a)| (x.re, a)).collect();
    let n0 = if outer_from_two { 2 } else { s.len() as u64 };
    let bound = CrudeBound::new(offsets[0], &rest, n0);
    let m = bound.cutoff(s[0].re, target)?;
    if m > max_terms {
        return None;
    }
    let sums = nested_sums(twists, offsets, s, m, outer_from_two);
    let err = bound.tail(s[0].re, m) + sums.rel_err * sums.abs[0];
    Some((sums.partial[0], err, m))
}

pub(crate) fn nested_sums(
    twists: &[Twist],
    offsets: &[f64],
    s: &[Complex64],
    m: u64,
    outer_from_two: bool,
) -> NestedSums {
    let d = s.len();
    // Compensated (Neumaier) running sums; the compensation is folded in
    // before a partial sum feeds the next outer level.
    let mut sum = vec![Complex64::new(0.0, 0.0); d + 1];
    let mut comp = vec![Complex64::new(0.0, 0.0); d + 1];
    let mut abs = vec![0.0; d + 1];
    sum[d] = Complex64::new(1.0, 0.0);
    abs[d] = 1.0;
    let mut max_rel = 0.0f64;
    for n in 1..=m {
        for j in 0..d {
            if j == 0 && outer_from_two && n == 1 {
                continue;
            }
            let x = n as f64 + offsets[j];
            let term = twists[j].at(n) * neg_pow(x, s[j]);
            let prev = sum[j + 1] + comp[j + 1];
            let v = term * prev;
            neumaier(&mut sum[j].re, &mut comp[j].re, v.re);
            neumaier(&mut sum[j].im, &mut comp[j].im, v.im);
            abs[j] += term.norm() * abs[j + 1];
            if n == m {
                max_rel = max_rel.max(s[j].norm() * (1.0 + x.ln()));
            }
        }
    }
    let mf = m as f64;
    let rel_err = (12.0 * d as f64 + 4.0 * max_rel + mf * mf * EPS) * EPS;
    let partial = (0..d).map(|j| sum[j] + comp[j]).collect();
    abs.truncate(d);
    NestedSums { partial, abs, rel_err }
}

fn neumaier(acc: &mut f64, comp: &mut f64, x: f64) {
    let t = *acc + x;
    if acc.abs() >= x.abs() {
        *comp += (*acc - t) + x;
    } else {
        *comp += (x - t) + *acc;
    }
    *acc = t;
}
