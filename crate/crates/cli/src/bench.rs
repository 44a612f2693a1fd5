//! Timing table behind `multizeta bench`.

use std::time::Instant;

use clap::Args;
use multizeta::domain::{EvalPoint, TwistParams};
use multizeta::evaluator::{euler_maclaurin_hurwitz, eval_continued, eval_direct, TruncationPolicy};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{CliConfig, OutputFormat};
use crate::parse::format_complex;
use crate::CliError;

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub point: Vec<String>,
    pub direct_ms: Option<f64>,
    pub continued_ms: Option<f64>,
    pub em_ms: Option<f64>,
    pub value: Option<[f64; 2]>,
    pub error_bound: Option<f64>,
    pub note: Option<String>,
}

/// Fixed points for ζ_r: two inside the region of absolute convergence and
/// three outside it, all away from the polar hyperplanes.
pub fn standard_grid(depth: usize) -> Vec<Vec<Complex64>> {
    let c = Complex64::new;
    let build = |first: Complex64, rest: Complex64| {
        let mut v = vec![rest; depth];
        v[0] = first;
        v
    };
    vec![
        build(c(2.5, 0.0), c(2.5, 0.0)),
        build(c(3.0, 1.0), c(1.5, 0.0)),
        build(c(0.6, 0.5), c(0.6, 0.5)),
        build(c(-1.5, 0.0), c(0.7, 0.0)),
        build(c(0.3, 2.0), c(-0.4, 0.1)),
    ]
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn bench_point(params: &TwistParams, s: &[Complex64], policy: &TruncationPolicy) -> BenchRow {
    let point = EvalPoint::new(s.to_vec());
    let mut notes = Vec::new();

    let t = Instant::now();
    let direct = eval_direct(params, &point, policy);
    let direct_ms = direct.is_ok().then(|| millis(t));

    let t = Instant::now();
    let cont = eval_continued(params, &point, policy);
    let continued_ms = Some(millis(t));

    let em_ms = (s.len() == 1).then(|| {
        let t = Instant::now();
        let _ = euler_maclaurin_hurwitz(s[0], 1.0, policy.eps);
        millis(t)
    });

    let (value, error_bound) = match &cont {
        Ok(r) => (Some([r.value.re, r.value.im]), Some(r.error_bound)),
        Err(e) => {
            notes.push(format!("continued: {e}"));
            (None, None)
        }
    };
    BenchRow {
        point: s.iter().map(|z| format_complex(*z)).collect(),
        direct_ms,
        continued_ms,
        em_ms,
        value,
        error_bound,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

pub fn cmd_bench(args: &BenchArgs, cfg: &CliConfig) -> Result<(), CliError> {
    if args.depth == 0 || args.depth > 4 {
        return Err(CliError::Usage("--depth must be between 1 and 4".into()));
    }
    let params = TwistParams::zeta(args.depth);
    let policy = cfg.policy();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let grid = standard_grid(args.depth);
    let rows: Vec<BenchRow> = pool.install(|| grid.par_iter().map(|s| bench_point(&params, s, &policy)).collect());

    match cfg.output.unwrap_or(OutputFormat::Text) {
        OutputFormat::Json => {
            println!("{}", json!({ "depth": args.depth, "eps": cfg.eps, "rows": rows }));
        }
        OutputFormat::Csv => {
            println!("point,direct_ms,continued_ms,em_ms,error_bound");
            for r in &rows {
                println!(
                    "\"{}\",{},{},{},{}",
                    r.point.join(","),
                    cell(r.direct_ms),
                    cell(r.continued_ms),
                    cell(r.em_ms),
                    r.error_bound.map_or_else(|| "-".into(), |e| format!("{e:e}"))
                );
            }
        }
        OutputFormat::Text => {
            println!("depth {} eps {:e}; times in ms", args.depth, cfg.eps);
            println!("{:<36} {:>10} {:>12} {:>8} {:>10}", "point", "direct", "continued", "em", "bound");
            for r in &rows {
                let bound = r.error_bound.map_or_else(|| "-".into(), |e| format!("{e:.1e}"));
                println!(
                    "{:<36} {:>10} {:>12} {:>8} {:>10}",
                    r.point.join(","),
                    cell(r.direct_ms),
                    cell(r.continued_ms),
                    cell(r.em_ms),
                    bound
                );
                if let Some(n) = &r.note {
                    println!("  note: {n}");
                }
            }
        }
    }
    Ok(())
}
