//! Numerical evaluation of multiple Lerch zeta functions.
//!
//! Inside the region of absolute convergence the nested series is summed
//! directly. Everywhere else the value is obtained from the shift identities
//! that express L_r at s in terms of L_r at s_1 + 1, s_1 + 2, ... and L_{r-1}
//! at merged coordinates; see [`column`] for the bookkeeping.

mod column;
mod direct;
mod identity;
mod oracle;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classifier::nearest_polar;
use crate::domain::{region_index, EvalPoint, Hyperplane, Real, TwistParams};
use crate::error::{Result, ZetaError};

use direct::{nested_sums, truncated_sum, Twist};

pub use identity::identity_residual;
pub use oracle::euler_maclaurin_hurwitz;

/// Number of leading outer terms summed explicitly by [`eval_direct`] before
/// the remainder is handled with shifted offsets.
pub const HEAD_TERMS: u64 = 256;

/// Numerical knobs shared by all evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Target absolute accuracy of the returned value.
    pub eps: f64,
    /// Direct summation requires Re(s_1 + ... + s_i) >= i + direct_margin.
    pub direct_margin: f64,
    /// Cap on outer terms of a plainly truncated nested sum.
    pub max_terms: u64,
    /// Cap on terms of each k-series.
    pub max_k: usize,
    pub pole_tolerance: f64,
    /// Smallest admissible |1 - e(λ)| divisor.
    pub conditioning_floor: f64,
    /// Largest direct sum (terms times depth) used for a single column entry.
    pub direct_budget: u64,
    /// Distance to an integer below which a float μ_i counts as an integer.
    pub integer_test_eps: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            eps: 1e-10,
            direct_margin: 0.5,
            max_terms: 10_000_000,
            max_k: 200,
            pole_tolerance: 1e-8,
            conditioning_floor: 1e-8,
            direct_budget: 2000,
            integer_test_eps: 1e-12,
        }
    }
}

impl TruncationPolicy {
    pub fn with_eps(eps: f64) -> Self {
        TruncationPolicy { eps, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eps", self.eps),
            ("direct_margin", self.direct_margin),
            ("pole_tolerance", self.pole_tolerance),
            ("conditioning_floor", self.conditioning_floor),
            ("integer_test_eps", self.integer_test_eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ZetaError::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.max_terms == 0 || self.max_k == 0 || self.direct_budget == 0 {
            return Err(ZetaError::InvalidParameter(
                "max_terms, max_k and direct_budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Work counters of one evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub levels: usize,
    /// Largest shift of a first coordinate that had to be solved recursively.
    pub recursion_depth: usize,
    pub cache_hits: usize,
    /// Outer terms of all truncated direct sums.
    pub terms_summed: usize,
    pub direct_evaluations: usize,
    pub series_terms: usize,
}

impl Diagnostics {
    fn absorb(&mut self, other: &Diagnostics) {
        self.levels = self.levels.max(other.levels);
        self.recursion_depth = self.recursion_depth.max(other.recursion_depth);
        self.cache_hits += other.cache_hits;
        self.terms_summed += other.terms_summed;
        self.direct_evaluations += other.direct_evaluations;
        self.series_terms += other.series_terms;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub region_index: u32,
    pub diagnostics: Diagnostics,
}

fn check_depth(params: &TwistParams, s: &EvalPoint) -> Result<()> {
    if params.depth() != s.depth() {
        return Err(ZetaError::InvalidParameter(format!(
            "parameters have depth {} but the point has {} coordinates",
            params.depth(),
            s.depth()
        )));
    }
    Ok(())
}

fn alphas_f64(params: &TwistParams) -> Vec<f64> {
    params.alphas().iter().map(Real::value).collect()
}

fn twists(params: &TwistParams) -> Vec<Twist> {
    params.lambdas().iter().map(Twist::new).collect()
}

/// Direct nested summation, for points with Re(s_1 + ... + s_i) >= i + margin.
///
/// Cheap cases are plainly truncated with an integral-comparison tail bound.
/// Otherwise the first [`HEAD_TERMS`] outer indices are summed and the
/// remainder, a finite combination of functions with offsets α + N, is added
/// with its own certified bound.
pub fn eval_direct(params: &TwistParams, s: &EvalPoint, policy: &TruncationPolicy) -> Result<EvalResult> {
    policy.validate()?;
    check_depth(params, s)?;
    let r = params.depth();
    for i in 1..=r {
        let re = s.partial_real_sum(i);
        if re < i as f64 + policy.direct_margin {
            return Err(ZetaError::Region(format!(
                "Re(s_1 + ... + s_{i}) = {re} is below {} + margin {}",
                i, policy.direct_margin
            )));
        }
    }
    let coords = s.coords();
    let alphas = alphas_f64(params);
    let tw = twists(params);
    let region = region_index(s).m;
    let mut diag = Diagnostics { levels: r, ..Diagnostics::default() };

    let plain_cap = policy.direct_budget.saturating_mul(16).min(policy.max_terms);
    if let Some((value, err, m)) = truncated_sum(&tw, &alphas, &coords, policy.eps / 2.0, false, plain_cap) {
        if err <= policy.eps {
            diag.terms_summed = m as usize;
            diag.direct_evaluations = 1;
            return Ok(EvalResult { value, error_bound: err, region_index: region, diagnostics: diag });
        }
    }

    let n = HEAD_TERMS;
    let sums = nested_sums(&tw, &alphas, &coords, n, false);
    let mut value = sums.partial[0];
    let mut err = sums.rel_err * sums.abs[0];
    diag.terms_summed += n as usize;
    diag.direct_evaluations += 1;
    let shifted: Vec<f64> = alphas.iter().map(|a| a + n as f64).collect();
    for j in 1..=r {
        let (inner, inner_abs) = if j < r {
            (sums.partial[j], sums.abs[j])
        } else {
            (Complex64::new(1.0, 0.0), 1.0)
        };
        let eps_j = policy.eps / (4.0 * r as f64 * inner_abs.max(1.0));
        let (v, e, d) = column::evaluate(&params.lambdas()[..j], &shifted[..j], &coords[..j], policy, eps_j)?;
        diag.absorb(&d);
        let phase = Twist::new(&params.mus()[j - 1]).at(n);
        let term = inner * phase * v;
        value += term;
        err += inner_abs * e + sums.rel_err * inner_abs * v.norm() + 4.0 * f64::EPSILON * term.norm();
    }
    if !(err <= policy.eps) {
        return Err(ZetaError::Accuracy { value, error_bound: err, eps: policy.eps });
    }
    Ok(EvalResult { value, error_bound: err, region_index: region, diagnostics: diag })
}

/// Depth-one continuation L_1(λ; α; s) for any s (s != 1 when λ = 0).
pub fn eval_depth1(params: &TwistParams, s: Complex64, policy: &TruncationPolicy) -> Result<EvalResult> {
    policy.validate()?;
    if params.depth() != 1 {
        return Err(ZetaError::InvalidParameter("eval_depth1 needs depth 1".into()));
    }
    let lam = params.lambdas()[0].frac(policy.integer_test_eps);
    if lam.is_zero() {
        let dist = (s - 1.0).norm();
        if dist < policy.pole_tolerance {
            return Err(ZetaError::PoleProximity { hyperplane: Hyperplane::new(1, 0), distance: dist });
        }
    }
    let point = EvalPoint::new(vec![s]);
    let (value, error_bound, diagnostics) =
        column::evaluate(params.lambdas(), &alphas_f64(params), &[s], policy, policy.eps)?;
    Ok(EvalResult { value, error_bound, region_index: region_index(&point).m, diagnostics })
}

/// Evaluation anywhere off the polar hyperplanes by the shift recursion.
///
/// The recursion descends to direct sums wherever those are cheap, so points
/// inside the convergence region are handled by the same code path.
pub fn eval_continued(params: &TwistParams, s: &EvalPoint, policy: &TruncationPolicy) -> Result<EvalResult> {
    policy.validate()?;
    check_depth(params, s)?;
    if let Some((hyperplane, distance)) =
        nearest_polar(params, s, policy.pole_tolerance, policy.integer_test_eps)
    {
        return Err(ZetaError::PoleProximity { hyperplane, distance });
    }
    let (value, error_bound, diagnostics) =
        column::evaluate(params.lambdas(), &alphas_f64(params), &s.coords(), policy, policy.eps)?;
    Ok(EvalResult { value, error_bound, region_index: region_index(s).m, diagnostics })
}
