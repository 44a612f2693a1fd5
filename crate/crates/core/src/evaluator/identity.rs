//! Residual of the shift identity, with every term summed directly.

use num_complex::Complex64;

use super::direct::{neg_pow, truncated_sum, Twist};
use super::oracle::euler_maclaurin_hurwitz;
use crate::domain::{pochhammer, unit_twist, EvalPoint, Real, TwistParams};
use crate::error::{Result, ZetaError};

/// Absolute accuracy requested from each directly summed term.
const TERM_TARGET: f64 = 1e-12;
const MAX_TERMS: u64 = 20_000_000;

struct DirectFn {
    twists: Vec<Twist>,
    offsets: Vec<f64>,
    tail_only: bool,
}

impl DirectFn {
    fn eval(&self, s: &[Complex64], target: f64) -> Result<Complex64> {
        truncated_sum(&self.twists, &self.offsets, s, target, self.tail_only, MAX_TERMS)
            .map(|(v, _, _)| v)
            .ok_or_else(|| {
                ZetaError::Region(format!(
                    "direct sum at {s:?} needs more than {MAX_TERMS} terms for the identity check"
                ))
            })
    }
}

/// |LHS - RHS| of the shift identity at `s`, summing k up to `max_k` and
/// evaluating every function value by plain truncated summation (for depth
/// one with λ = 0 the Euler-Maclaurin reference is used instead).
pub fn identity_residual(params: &TwistParams, s: &EvalPoint, max_k: usize) -> Result<f64> {
    let r = params.depth();
    if s.depth() != r {
        return Err(ZetaError::InvalidParameter("depth mismatch".into()));
    }
    for i in 1..=r {
        if s.partial_real_sum(i) <= i as f64 {
            return Err(ZetaError::Region(format!(
                "identity check needs Re(s_1 + ... + s_{i}) > {i}"
            )));
        }
    }
    let x = s.coords();
    let lam = params.lambdas()[0].frac(1e-12);
    let alphas: Vec<f64> = params.alphas().iter().map(Real::value).collect();
    let e1 = unit_twist(lam.value());
    let top = DirectFn {
        twists: params.lambdas().iter().map(Twist::new).collect(),
        offsets: alphas.clone(),
        tail_only: r == 1,
    };
    let k_max = max_k as i64;
    let shifted = |k: i64| -> Vec<Complex64> {
        let mut y = x.clone();
        y[0] += k as f64;
        y
    };
    let stop = |coef: Complex64, sigma: f64, base: f64| -> bool {
        // Majorant of the remaining terms is far below the target.
        coef.norm() * base.powf(-sigma) < 1e-20
    };

    if r == 1 {
        let a = alphas[0];
        let t_val = |k: i64| -> Result<Complex64> {
            let y = shifted(k);
            if lam.is_zero() {
                // T(σ) = ζ(σ, 2 + a)
                euler_maclaurin_hurwitz(y[0], 2.0 + a, 1e-15)
            } else {
                top.eval(&y, TERM_TARGET)
            }
        };
        let sigma = x[0];
        if lam.is_zero() {
            let mut lhs = Complex64::new(0.0, 0.0);
            for k in 0..=k_max {
                let c = pochhammer(sigma - 1.0, k);
                if stop(c, sigma.re + k as f64, 2.0 + a) {
                    break;
                }
                lhs += c * t_val(k)?;
            }
            let rhs = neg_pow(1.0 + a, sigma - 1.0);
            return Ok((lhs - rhs).norm());
        }
        let lhs = (e1 - 1.0) * t_val(0)?;
        let mut rhs = -e1 * e1 * neg_pow(1.0 + a, sigma);
        for k in 0..=k_max {
            let c = pochhammer(sigma, k);
            if stop(c, sigma.re + k as f64 + 1.0, 2.0 + a) {
                break;
            }
            rhs += c * t_val(k + 1)?;
        }
        return Ok((lhs - rhs).norm());
    }

    let child_lams: Vec<Real> = {
        let mut v = vec![params.mus()[1].frac(1e-12)];
        v.extend_from_slice(&params.lambdas()[2..]);
        v
    };
    let child = DirectFn {
        twists: child_lams.iter().map(Twist::new).collect(),
        offsets: alphas[1..].to_vec(),
        tail_only: false,
    };
    let delta = alphas[1] - alphas[0];
    let child_point = |shift: i64| -> Vec<Complex64> {
        let mut y = vec![x[0] + x[1] + shift as f64];
        y.extend_from_slice(&x[2..]);
        y
    };
    let child_base = (r - 1) as f64 + alphas[1];
    let top_base = r as f64 + alphas[0];

    if lam.is_zero() {
        let sp = x[0] - 1.0;
        let mut lhs = Complex64::new(0.0, 0.0);
        for k in -1..=k_max {
            let c = pochhammer(sp, k) * delta.powi((k + 1) as i32);
            if k >= 0 && (c == Complex64::new(0.0, 0.0) || stop(c, x[0].re + x[1].re + k as f64, child_base)) {
                break;
            }
            lhs += c * child.eval(&child_point(k), TERM_TARGET)?;
        }
        let mut rhs = Complex64::new(0.0, 0.0);
        for k in 0..=k_max {
            let c = pochhammer(sp, k);
            if stop(c, x[0].re + k as f64, top_base) {
                break;
            }
            rhs += c * top.eval(&shifted(k), TERM_TARGET)?;
        }
        Ok((lhs - rhs).norm())
    } else {
        let sp = x[0];
        let lhs = (1.0 - e1) * top.eval(&x, TERM_TARGET)?;
        let mut rhs = Complex64::new(0.0, 0.0);
        for k in -1..=k_max {
            let c = pochhammer(sp, k) * delta.powi((k + 1) as i32);
            if k >= 0 && (c == Complex64::new(0.0, 0.0) || stop(c, x[0].re + x[1].re + k as f64 + 1.0, child_base)) {
                break;
            }
            rhs += e1 * c * child.eval(&child_point(k + 1), TERM_TARGET)?;
        }
        for k in 0..=k_max {
            let c = pochhammer(sp, k);
            if stop(c, x[0].re + k as f64 + 1.0, top_base) {
                break;
            }
            rhs -= c * top.eval(&shifted(k + 1), TERM_TARGET)?;
        }
        Ok((lhs - rhs).norm())
    }
}
