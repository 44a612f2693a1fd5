//! Shift-column recursion.
//!
//! Level l of the engine holds the depth r - l function obtained by merging
//! the first l + 1 coordinates, with twist ν_l = μ_{l+1} mod 1 on its first
//! index. Each level keeps one column of values indexed by an integer shift t
//! of its first coordinate. An entry is either a truncated direct sum (when
//! that is cheap) or is solved from the shift identity in terms of entries at
//! larger shifts and entries of the next level.
//!
//! Stored quantities:
//! * depth >= 2: X(t) = L(b_1 + t, b_2, ...);
//! * depth 1: the tail T(t) = sum_{n >= 2} e(ν n) (n + a)^{-(b_1 + t)};
//! * when ν = 0 the column stores R(t) = (b_1 + t - 1) times the above, which
//!   stays finite where the first coordinate hits 1.

use std::collections::HashMap;

use num_complex::Complex64;

use super::direct::{nested_sums, neg_pow, CrudeBound, Twist};
use super::{Diagnostics, TruncationPolicy};
use crate::domain::{unit_twist, Hyperplane, Real};
use crate::error::{Result, ZetaError};

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const SCAN_LIMIT: i64 = 1_000_000;
const ATTEMPTS: usize = 4;

#[derive(Clone, Copy, Debug)]
struct Entry {
    val: Complex64,
    err: f64,
}

struct Level {
    depth: usize,
    lam_zero: bool,
    /// e(ν)
    tw: Complex64,
    twists: Vec<Twist>,
    offsets: Vec<f64>,
    base: Vec<Complex64>,
    bound: CrudeBound,
    zeros_above: usize,
    t_direct: Option<i64>,
    memo: HashMap<i64, Entry>,
}

impl Level {
    fn majorant(&self, u: i64) -> f64 {
        self.bound.majorant(self.base[0].re + u as f64)
    }
}

pub(crate) struct Engine<'p> {
    levels: Vec<Level>,
    policy: &'p TruncationPolicy,
    eta: f64,
    budget: u64,
    pub diag: Diagnostics,
}

/// Neumaier-compensated complex accumulator that also tracks the absolute
/// sum and propagated errors of its terms.
#[derive(Default)]
struct Acc {
    sum: Complex64,
    comp: Complex64,
    abs: f64,
    err: f64,
    terms: usize,
}

fn two_sum(acc: &mut f64, comp: &mut f64, x: f64) {
    let t = *acc + x;
    if acc.abs() >= x.abs() {
        *comp += (*acc - t) + x;
    } else {
        *comp += (x - t) + *acc;
    }
    *acc = t;
}

impl Acc {
    fn add(&mut self, v: Complex64, err: f64) {
        two_sum(&mut self.sum.re, &mut self.comp.re, v.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, v.im);
        self.abs += v.norm();
        self.err += err;
        self.terms += 1;
    }

    fn merge(&mut self, other: &Acc, factor: Complex64) {
        let v = other.value() * factor;
        two_sum(&mut self.sum.re, &mut self.comp.re, v.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, v.im);
        self.abs += other.abs * factor.norm();
        self.err += other.err * factor.norm() + other.rounding() * factor.norm();
        self.terms += 1;
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    fn target(&self, eta: f64) -> f64 {
        eta * self.abs.max(TINY)
    }

    /// Rounding of the products feeding the sum plus the compensated
    /// summation error.
    fn rounding(&self) -> f64 {
        let n = self.terms as f64;
        (6.0 + n * n * EPS) * EPS * self.abs + 2.0 * EPS * self.value().norm()
    }
}

impl<'p> Engine<'p> {
    /// `lambdas` and `offsets` describe the function (offsets may exceed 1),
    /// `s` the evaluation point.
    pub fn new(
        lambdas: &[Real],
        offsets: &[f64],
        s: &[Complex64],
        policy: &'p TruncationPolicy,
        eta: f64,
        budget: u64,
    ) -> Result<Self> {
        let r = lambdas.len();
        assert!(r >= 1 && offsets.len() == r && s.len() == r);
        let tol = policy.integer_test_eps;
        let mut levels = Vec::with_capacity(r);
        let mut nu = lambdas[0].frac(tol);
        let mut base = s.to_vec();
        let mut zeros_above = 0;
        for l in 0..r {
            if l > 0 {
                nu = nu.add(&lambdas[l]).frac(tol);
            }
            let depth = r - l;
            let lam_zero = nu.is_zero();
            let tw = unit_twist(nu.value());
            if !lam_zero {
                let mag = (Complex64::new(1.0, 0.0) - tw).norm();
                if mag < policy.conditioning_floor {
                    return Err(ZetaError::Conditioning {
                        quantity: format!("1 - e(μ_{})", l + 1),
                        magnitude: mag,
                        floor: policy.conditioning_floor,
                    });
                }
            }
            let mut twists = vec![Twist::new(&nu)];
            twists.extend(lambdas[l + 1..].iter().map(Twist::new));
            let offs = offsets[l..].to_vec();
            let rest: Vec<(f64, f64)> = base[1..]
                .iter()
                .zip(&offs[1..])
                .map(|(b, &a)| (b.re, a))
                .collect();
            let n0 = if depth == 1 { 2 } else { depth as u64 };
            let bound = CrudeBound::new(offs[0], &rest, n0);
            let next_base = if depth >= 2 {
                let merged = base[0] + base[1] - if lam_zero { 1.0 } else { 0.0 };
                let mut nb = vec![merged];
                nb.extend_from_slice(&base[2..]);
                Some(nb)
            } else {
                None
            };
            levels.push(Level {
                depth,
                lam_zero,
                tw,
                twists,
                offsets: offs,
                base: base.clone(),
                bound,
                zeros_above,
                t_direct: None,
                memo: HashMap::new(),
            });
            if lam_zero {
                zeros_above += 1;
            }
            if let Some(nb) = next_base {
                base = nb;
            }
        }
        let diag = Diagnostics { levels: r, ..Diagnostics::default() };
        Ok(Engine { levels, policy, eta, budget, diag })
    }

    /// Value of the function at the engine's point, with an error bound.
    pub fn value(&mut self) -> Result<(Complex64, f64)> {
        let y = self.get_y(0, 0)?;
        let lv = &self.levels[0];
        if lv.depth == 1 {
            let head = lv.tw * neg_pow(1.0 + lv.offsets[0], lv.base[0]);
            let rel = (lv.base[0].norm() * (1.0 + lv.offsets[0]).ln() + 4.0) * EPS;
            Ok((head + y.val, y.err + rel * head.norm() + 2.0 * EPS * (head + y.val).norm()))
        } else {
            Ok((y.val, y.err))
        }
    }

    fn pole_error(&self, l: usize, u: i64, distance: f64) -> ZetaError {
        let lv = &self.levels[l];
        let i = l + 1;
        let k = i as i64 - 1 - lv.zeros_above as i64 + u;
        ZetaError::PoleProximity {
            hyperplane: Hyperplane::new(i, k.max(0) as u32),
            distance,
        }
    }

    /// Unregularized column value at level l, shift u.
    fn get_y(&mut self, l: usize, u: i64) -> Result<Entry> {
        let e = self.entry(l, u)?;
        let lv = &self.levels[l];
        if !lv.lam_zero {
            return Ok(e);
        }
        let den = lv.base[0] + (u as f64 - 1.0);
        let dist = den.norm();
        if dist < self.policy.pole_tolerance {
            return Err(self.pole_error(l, u, dist));
        }
        Ok(Entry { val: e.val / den, err: e.err / dist + 2.0 * EPS * (e.val / den).norm() })
    }

    fn entry(&mut self, l: usize, u: i64) -> Result<Entry> {
        if let Some(e) = self.levels[l].memo.get(&u) {
            self.diag.cache_hits += 1;
            return Ok(*e);
        }
        let td = self.t_direct(l)?;
        if u >= td {
            let e = self.direct(l, u);
            self.levels[l].memo.insert(u, e);
            return Ok(e);
        }
        for v in (u..td).rev() {
            if !self.levels[l].memo.contains_key(&v) {
                let e = self.recursive(l, v)?;
                self.levels[l].memo.insert(v, e);
            }
        }
        Ok(self.levels[l].memo[&u])
    }

    fn direct_cutoff(&self, l: usize, t: i64) -> Option<u64> {
        let lv = &self.levels[l];
        let sigma = lv.base[0].re + t as f64;
        lv.bound.cutoff_relative(sigma, self.eta)
    }

    fn t_direct(&mut self, l: usize) -> Result<i64> {
        if let Some(t) = self.levels[l].t_direct {
            return Ok(t);
        }
        let depth = self.levels[l].depth as u64;
        let budget = self.budget;
        let mut t = 0;
        loop {
            if let Some(m) = self.direct_cutoff(l, t) {
                if m.saturating_mul(depth) <= budget {
                    break;
                }
            }
            t += 1;
            if t > SCAN_LIMIT {
                return Err(ZetaError::Unsupported(
                    "real part too negative for the shift recursion".into(),
                ));
            }
        }
        self.levels[l].t_direct = Some(t);
        self.diag.recursion_depth = self.diag.recursion_depth.max(t as usize);
        Ok(t)
    }

    fn direct(&mut self, l: usize, t: i64) -> Entry {
        let m = self.direct_cutoff(l, t).expect("direct entry has a cutoff");
        let lv = &self.levels[l];
        let mut s = lv.base.clone();
        s[0] += t as f64;
        let sums = nested_sums(&lv.twists, &lv.offsets, &s, m, lv.depth == 1);
        let mut val = sums.partial[0];
        let mut err = lv.bound.tail(s[0].re, m) + sums.rel_err * sums.abs[0];
        if lv.lam_zero {
            let f = s[0] - 1.0;
            val *= f;
            err = err * f.norm() + 2.0 * EPS * val.norm();
        }
        self.diag.terms_summed += m as usize;
        self.diag.direct_evaluations += 1;
        Entry { val, err }
    }

    fn recursive(&mut self, l: usize, t: i64) -> Result<Entry> {
        let (depth, lam_zero, tw, sigma, a1, b2, a2) = {
            let lv = &self.levels[l];
            (
                lv.depth,
                lv.lam_zero,
                lv.tw,
                lv.base[0] + t as f64,
                lv.offsets[0],
                lv.base.get(1).copied(),
                lv.offsets.get(1).copied(),
            )
        };
        let eta = self.eta;
        let max_k = self.policy.max_k as i64;
        let mut acc = Acc::default();

        // Inhomogeneous part.
        if depth == 1 {
            let x = 1.0 + a1;
            let g = if lam_zero {
                neg_pow(x, sigma - 1.0)
            } else {
                tw * tw * neg_pow(x, sigma)
            };
            let rel = (sigma.norm() * x.ln() + 4.0) * EPS;
            acc.add(g, rel * g.norm());
        } else {
            let (b2, a2) = (b2.unwrap(), a2.unwrap());
            let delta = a2 - a1;
            let sp = if lam_zero { sigma - 1.0 } else { sigma };
            let mut g = Acc::default();
            if depth == 2 {
                let child_tw = self.levels[l + 1].tw;
                let head = child_tw * neg_pow(1.0 + a2, b2) * neg_pow(1.0 + a1, sp);
                let rel = (b2.norm() * (1.0 + a2).ln() + sp.norm() * (1.0 + a1).ln() + 6.0) * EPS;
                g.add(head, rel * head.norm());
            }
            let child_ratio = self.levels[l + 1].bound.ratio() * delta.abs();
            let mut coef = Complex64::new(1.0, 0.0);
            let mut k: i64 = -1;
            loop {
                let y = self.get_y(l + 1, t + k + 1)?;
                g.add(coef * y.val, coef.norm() * y.err);
                self.diag.series_terms += 1;
                if delta == 0.0 {
                    break;
                }
                let next = coef * (sp + (k + 1) as f64) / (k + 2) as f64 * delta;
                if next == Complex64::new(0.0, 0.0) {
                    break;
                }
                let ab = self.levels[l + 1].majorant(t + k + 2);
                let q = child_ratio * (1.0f64).max((sp.norm() + (k + 2) as f64) / (k + 3) as f64);
                let tail = if ab.is_finite() && q < 1.0 {
                    next.norm() * ab / (1.0 - q)
                } else {
                    f64::INFINITY
                };
                let target = eta * (g.abs + acc.abs).max(TINY);
                if tail <= target {
                    g.err += tail;
                    break;
                }
                k += 1;
                if k + 1 >= max_k {
                    g.err += tail;
                    break;
                }
                coef = next;
            }
            let factor = if lam_zero { Complex64::new(1.0, 0.0) } else { tw };
            acc.merge(&g, factor);
        }

        // Shift series, subtracted.
        let ratio = self.levels[l].bound.ratio();
        if lam_zero {
            // sum_{k >= 1} c_k R(t + k), c_k = (σ-1)σ...(σ+k-2)/(k+1)!
            let mut c = (sigma - 1.0) / 2.0;
            let mut k: i64 = 1;
            while c != Complex64::new(0.0, 0.0) {
                let e = self.entry(l, t + k)?;
                acc.add(-c * e.val, c.norm() * e.err);
                self.diag.series_terms += 1;
                let next = c * (sigma - 1.0 + k as f64) / (k + 2) as f64;
                if next == Complex64::new(0.0, 0.0) {
                    break;
                }
                // |next * R(t+k+1)| <= |next| |σ+k| AB(t+k+1)
                let ab = self.levels[l].majorant(t + k + 1);
                let sm1 = (sigma - 1.0).norm();
                let q = ratio * (1.0f64).max((sm1 + (k + 2) as f64) / (k + 3) as f64);
                let tail = if ab.is_finite() && q < 1.0 {
                    next.norm() * (sigma + k as f64).norm() * ab / (1.0 - q)
                } else {
                    f64::INFINITY
                };
                if tail <= acc.target(eta) {
                    acc.err += tail;
                    break;
                }
                k += 1;
                if k > max_k {
                    acc.err += tail;
                    break;
                }
                c = next;
            }
            let err = acc.err + acc.rounding();
            Ok(Entry { val: acc.value(), err })
        } else {
            // sum_{k >= 0} (σ)_k Y(t + k + 1)
            let mut c = sigma;
            let mut k: i64 = 0;
            loop {
                let y = self.get_y(l, t + k + 1)?;
                acc.add(-c * y.val, c.norm() * y.err);
                self.diag.series_terms += 1;
                let next = c * (sigma + (k + 1) as f64) / (k + 2) as f64;
                if next == Complex64::new(0.0, 0.0) {
                    break;
                }
                let ab = self.levels[l].majorant(t + k + 2);
                let q = ratio * (1.0f64).max((sigma.norm() + (k + 2) as f64) / (k + 3) as f64);
                let tail = if ab.is_finite() && q < 1.0 {
                    next.norm() * ab / (1.0 - q)
                } else {
                    f64::INFINITY
                };
                if tail <= acc.target(eta) {
                    acc.err += tail;
                    break;
                }
                k += 1;
                if k >= max_k {
                    acc.err += tail;
                    break;
                }
                c = next;
            }
            let div = Complex64::new(1.0, 0.0) - tw;
            let dn = div.norm();
            let val = acc.value() / div;
            Ok(Entry { val, err: (acc.err + acc.rounding()) / dn + 2.0 * EPS * val.norm() })
        }
    }
}

/// Evaluate with decreasing internal tolerance and a growing direct-sum
/// budget until the certified bound meets `eps`.
pub(crate) fn evaluate(
    lambdas: &[Real],
    offsets: &[f64],
    s: &[Complex64],
    policy: &TruncationPolicy,
    eps: f64,
) -> Result<(Complex64, f64, Diagnostics)> {
    let mut eta = (eps * 1e-3).clamp(1e-17, 1e-4);
    let mut budget = policy.direct_budget;
    let mut last = None;
    for _ in 0..ATTEMPTS {
        let mut engine = Engine::new(lambdas, offsets, s, policy, eta, budget)?;
        let (v, e) = engine.value()?;
        if e.is_finite() && e <= eps {
            return Ok((v, e, engine.diag));
        }
        last = Some((v, e));
        eta = (eta * 1e-3).max(1e-17);
        budget = budget.saturating_mul(8).min(policy.max_terms);
    }
    let (value, error_bound) = last.expect("at least one attempt");
    Err(ZetaError::Accuracy { value, error_bound, eps })
}
