//! Self-check suites behind `multizeta verify`.

use std::fmt;

use clap::{Args, ValueEnum};
use multizeta::bernoulli::{bernoulli_poly, RatPoly, Rational};
use multizeta::domain::{pochhammer, EvalPoint, Real, TwistParams};
use multizeta::evaluator::{eval_continued, eval_direct, identity_residual, TruncationPolicy};
use multizeta::matrixkit::{first_row_chain, two_prod_oracle, verify_inverse_pair};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{CliConfig, OutputFormat};
use crate::CliError;

pub const IDENTITY_TOL: f64 = 1e-8;
pub const RAMANUJAN_TOL: f64 = 1e-10;
const RAMANUJAN_TERMS: i64 = 60;
const BERNOULLI_MAX_N: usize = 40;
const ROOT_LIST_MAX_N: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Identity,
    Overlap,
    Matrix,
    Bernoulli,
    Ramanujan,
}

impl Suite {
    fn tag(self) -> u64 {
        self as u64
    }

    fn randomized(self) -> bool {
        matches!(self, Suite::Identity | Suite::Overlap | Suite::Matrix)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Cases per randomized suite.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    /// Re-run the single case with this reproduction seed.
    #[arg(long)]
    pub replay: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub detail: String,
}

/// Reproduction seeds for `cases` cases. The low bit alternates so identity
/// cases cover both the λ_1 = 0 and λ_1 != 0 branches.
pub fn case_seeds(base: u64, suite: Suite, cases: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(base);
    master.set_stream(suite.tag());
    (0..cases).map(|i| (master.gen::<u64>() & !1) | (i as u64 & 1)).collect()
}

fn pick_lambda(rng: &mut ChaCha8Rng) -> Real {
    match rng.gen_range(0..4) {
        0 => Real::zero(),
        1 => {
            let q = rng.gen_range(2..7);
            Real::from_ratio(rng.gen_range(1..q), q)
        }
        _ => Real::from_f64(rng.gen_range(0.05..0.95)),
    }
}

fn random_params(rng: &mut ChaCha8Rng, depth: usize, first_zero: bool) -> TwistParams {
    let mut lambdas: Vec<Real> = (0..depth).map(|_| pick_lambda(rng)).collect();
    if first_zero {
        lambdas[0] = Real::zero();
    } else if lambdas[0].is_zero() {
        lambdas[0] = Real::from_ratio(1, 3);
    }
    let alphas = (0..depth).map(|_| Real::from_f64(rng.gen_range(0.0..0.95))).collect();
    TwistParams::new(lambdas, alphas).expect("generated parameters are valid")
}

fn random_point(rng: &mut ChaCha8Rng, depth: usize, first: (f64, f64), rest: (f64, f64)) -> EvalPoint {
    let coords = (0..depth)
        .map(|j| {
            let (lo, hi) = if j == 0 { first } else { rest };
            Complex64::new(rng.gen_range(lo..hi), rng.gen_range(-1.5..1.5))
        })
        .collect();
    EvalPoint::new(coords)
}

fn describe(params: &TwistParams, s: &EvalPoint) -> String {
    let l: Vec<String> = params.lambdas().iter().map(|x| x.to_string()).collect();
    let a: Vec<String> = params.alphas().iter().map(|x| x.to_string()).collect();
    format!("lambda=[{}] alpha=[{}] s={:?}", l.join(","), a.join(","), s.coords())
}

fn identity_case(seed: u64, max_depth: usize, policy: &TruncationPolicy) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = rng.gen_range(1..=max_depth);
    let params = random_params(&mut rng, depth, seed & 1 == 0);
    let s = random_point(&mut rng, depth, (3.0, 4.5), (1.5, 2.5));
    let what = describe(&params, &s);
    match identity_residual(&params, &s, policy.max_k) {
        Ok(res) => (res <= IDENTITY_TOL, format!("{what} residual={res:.3e}")),
        Err(e) => (false, format!("{what} error: {e}")),
    }
}

fn overlap_case(seed: u64, max_depth: usize, policy: &TruncationPolicy) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = rng.gen_range(1..=max_depth);
    let params = random_params(&mut rng, depth, seed & 1 == 0);
    let s = random_point(&mut rng, depth, (1.8, 3.5), (1.2, 2.5));
    let what = describe(&params, &s);
    match (eval_direct(&params, &s, policy), eval_continued(&params, &s, policy)) {
        (Ok(d), Ok(c)) => {
            let diff = (d.value - c.value).norm();
            let allowed = d.error_bound + c.error_bound + 4.0 * f64::EPSILON * d.value.norm();
            (diff <= allowed, format!("{what} |direct-continued|={diff:.3e} allowed={allowed:.3e}"))
        }
        (Err(e), _) | (_, Err(e)) => (false, format!("{what} error: {e}")),
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(1..13i64);
    Real::from_ratio(rng.gen_range(-24..25i64), q).exact().expect("ratio is exact").clone()
}

/// Avoids t, t + 1, ..., t + k hitting zero.
fn random_offset(rng: &mut ChaCha8Rng, k: usize) -> Rational {
    loop {
        let t = random_rational(rng);
        let int = t.is_integer();
        let neg = t < Rational::from_integer((-(k as i64)).into());
        if !int || t > Rational::from_integer(0.into()) || neg {
            return t;
        }
    }
}

fn matrix_case(seed: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rng.gen_range(1..=10usize);
    let d = random_rational(&mut rng);
    let t = random_offset(&mut rng, q);
    let inverse = match verify_inverse_pair(&d, &t, q) {
        Ok(r) => r,
        Err(e) => return (false, format!("d={d} t={t} q={q} error: {e}")),
    };
    let k = rng.gen_range(0..=10usize);
    let (x, y) = (random_offset(&mut rng, k), random_offset(&mut rng, k));
    let a: Vec<Rational> = (0..3).map(|_| random_rational(&mut rng)).collect();
    let chain = first_row_chain(&a, 3, &[x.clone(), y.clone()], k);
    let oracle = two_prod_oracle(&x, &y, &a[0], &a[1], &a[2], k);
    let same = matches!((&chain, &oracle), (Ok(c), Ok(o)) if c == o);
    (
        inverse == 0.0 && same,
        format!("d={d} t={t} q={q} inverse_residual={inverse:e}; x={x} y={y} k={k} two_prod_equal={same}"),
    )
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational zeros of B_n for n <= 30, as recorded in the literature.
pub fn known_rational_roots(n: usize) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    match n {
        1 => vec![half],
        n if n >= 3 && n % 2 == 1 => vec![int(0), half, int(1)],
        _ => Vec::new(),
    }
}

/// Derivative, difference, symmetry, coprimality and rational roots of B_n.
pub fn bernoulli_case(n: usize) -> (bool, String) {
    let b = &bernoulli_poly(n).poly;
    let mut failures = Vec::new();
    if n >= 1 {
        let lower = bernoulli_poly(n - 1).poly.scale(&int(n as i64));
        if b.derivative() != lower {
            failures.push("derivative");
        }
        let shifted = b.compose_linear(&int(1), &int(1));
        let power = RatPoly::monomial(int(n as i64), n - 1);
        if shifted.sub(b) != power {
            failures.push("difference");
        }
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    if b.compose_linear(&int(1), &int(-1)) != b.scale(&int(sign)) {
        failures.push("symmetry");
    }
    let next = &bernoulli_poly(n + 1).poly;
    if b.gcd(next).degree() != Some(0) {
        failures.push("gcd");
    }
    if n <= ROOT_LIST_MAX_N {
        match b.rational_roots() {
            Ok(roots) if roots == known_rational_roots(n) => {}
            _ => failures.push("rational roots"),
        }
    }
    let ok = failures.is_empty();
    (ok, if ok { format!("n={n}") } else { format!("n={n} failed: {}", failures.join(", ")) })
}

/// |sum_{k<=60} (s-1)_k (ζ(s+k) - 1) - 1|.
pub fn ramanujan_defect(s: Complex64, policy: &TruncationPolicy) -> Result<f64, CliError> {
    let params = TwistParams::zeta(1);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=RAMANUJAN_TERMS {
        let w = pochhammer(s - 1.0, k);
        let local = TruncationPolicy { eps: (policy.eps * 1e-3 / w.norm().max(1.0)).max(4e-15), ..policy.clone() };
        let z = eval_continued(&params, &EvalPoint::new(vec![s + k as f64]), &local)?;
        sum += w * (z.value - 1.0);
    }
    Ok((sum - 1.0).norm())
}

pub const RAMANUJAN_POINTS: [(f64, f64); 3] = [(2.0, 0.0), (3.5, 0.0), (2.0, 1.7)];

fn ramanujan_case(idx: usize, policy: &TruncationPolicy) -> (bool, String) {
    let (re, im) = RAMANUJAN_POINTS[idx];
    match ramanujan_defect(Complex64::new(re, im), policy) {
        Ok(d) => (d <= RAMANUJAN_TOL, format!("s={re}+{im}i defect={d:.3e}")),
        Err(e) => (false, format!("s={re}+{im}i error: {e}")),
    }
}

fn run_case(suite: Suite, seed: u64, args: &VerifyArgs, policy: &TruncationPolicy) -> CaseOutcome {
    let (passed, detail) = match suite {
        Suite::Identity => identity_case(seed, args.max_depth, policy),
        Suite::Overlap => overlap_case(seed, args.max_depth, policy),
        Suite::Matrix => matrix_case(seed),
        Suite::Bernoulli => bernoulli_case(seed as usize),
        Suite::Ramanujan => ramanujan_case(seed as usize, policy),
        Suite::All => unreachable!("expanded before dispatch"),
    };
    CaseOutcome { suite, seed, passed, detail }
}

fn seeds_for(suite: Suite, args: &VerifyArgs) -> Vec<u64> {
    match suite {
        Suite::Bernoulli => (0..=BERNOULLI_MAX_N as u64).collect(),
        Suite::Ramanujan => (0..RAMANUJAN_POINTS.len() as u64).collect(),
        _ => case_seeds(args.seed, suite, args.cases),
    }
}

pub fn cmd_verify(args: &VerifyArgs, cfg: &CliConfig) -> Result<(), CliError> {
    if args.max_depth == 0 || args.max_depth > 4 {
        return Err(CliError::Usage("--max-depth must be between 1 and 4".into()));
    }
    let suites: Vec<Suite> = match args.suite {
        Suite::All => vec![Suite::Identity, Suite::Overlap, Suite::Matrix, Suite::Bernoulli, Suite::Ramanujan],
        s => vec![s],
    };
    if args.replay.is_some() && suites.len() != 1 {
        return Err(CliError::Usage("--replay needs a single --suite".into()));
    }
    let policy = cfg.policy();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut jobs: Vec<(Suite, u64)> = Vec::new();
    for &suite in &suites {
        let seeds = match args.replay {
            Some(seed) => vec![seed],
            None => seeds_for(suite, args),
        };
        jobs.extend(seeds.into_iter().map(|seed| (suite, seed)));
    }
    let outcomes: Vec<CaseOutcome> =
        pool.install(|| jobs.par_iter().map(|&(suite, seed)| run_case(suite, seed, args, &policy)).collect());

    let failed = outcomes.iter().filter(|o| !o.passed).count();
    match cfg.output.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            let summary: Vec<_> = suites
                .iter()
                .map(|&s| {
                    let of: Vec<_> = outcomes.iter().filter(|o| o.suite == s).collect();
                    json!({ "suite": s, "passed": of.iter().filter(|o| o.passed).count(), "total": of.len() })
                })
                .collect();
            let failures: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
            println!("{}", json!({ "seed": args.seed, "suites": summary, "failures": failures }));
        }
        OutputFormat::Csv => {
            println!("suite,seed,passed,detail");
            for o in &outcomes {
                println!("{},{},{},\"{}\"", o.suite, o.seed, o.passed, o.detail.replace('"', "'"));
            }
        }
        OutputFormat::Text => {
            for &s in &suites {
                let of: Vec<_> = outcomes.iter().filter(|o| o.suite == s).collect();
                let ok = of.iter().filter(|o| o.passed).count();
                println!("{s:<10} {ok}/{} passed", of.len());
            }
            if suites.len() > 1 {
                println!("{:<10} {}/{} passed", "total", outcomes.len() - failed, outcomes.len());
            }
            for o in outcomes.iter().filter(|o| !o.passed) {
                let replay = if o.suite.randomized() { format!(" (replay: --suite {} --replay {})", o.suite, o.seed) } else { String::new() };
                println!("FAIL {} seed {}{}: {}", o.suite, o.seed, replay, o.detail);
            }
        }
    }
    if failed > 0 {
        Err(CliError::Failed(failed))
    } else {
        Ok(())
    }
}
