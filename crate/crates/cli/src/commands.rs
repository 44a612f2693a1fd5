//! `eval`, `residue` and `singularities`.

use clap::Args;
use multizeta::classifier::{self, Certainty, SingularityReport, DISPLAY_BOUND};
use multizeta::domain::{EvalPoint, Real, TwistParams};
use multizeta::evaluator::{eval_continued, eval_direct, EvalResult};
use multizeta::matrixkit::residue;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{CliConfig, OutputFormat};
use crate::parse::{format_complex, parse_complex_list, parse_hyperplane, parse_real_list};
use crate::{CliError, ParamArgs};

/// Distance to a polar hyperplane below which a warning is attached.
const NEAR_POLE_WARNING: f64 = 1e-3;

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Point s_1,...,s_r; each coordinate `a`, `a+bi` or `a-bi`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Sum the defining series directly (only inside its region of convergence).
    #[arg(long)]
    pub direct: bool,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Hyperplane `i,k`, meaning s_1 + ... + s_i = i - k.
    #[arg(long)]
    pub hyperplane: String,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Args, Debug)]
pub struct SingularityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

fn list_or_zeros(raw: Option<&str>, depth: usize, name: &str) -> Result<(Vec<Real>, Vec<String>), CliError> {
    let Some(raw) = raw else {
        return Ok((vec![Real::zero(); depth], vec!["0".to_string(); depth]));
    };
    let vals = parse_real_list(raw)?;
    if vals.len() != depth {
        return Err(CliError::Usage(format!("--{name} has {} entries, expected {depth}", vals.len())));
    }
    Ok((vals, raw.split(',').map(|t| t.trim().to_string()).collect()))
}

struct Parsed {
    params: TwistParams,
    lambda: Vec<String>,
    alpha: Vec<String>,
}

fn parse_params(a: &ParamArgs) -> Result<Parsed, CliError> {
    if a.depth == 0 {
        return Err(CliError::Usage("--depth must be at least 1".into()));
    }
    let (lambdas, lambda) = list_or_zeros(a.lambda.as_deref(), a.depth, "lambda")?;
    let (alphas, alpha) = list_or_zeros(a.alpha.as_deref(), a.depth, "alpha")?;
    let params = TwistParams::new(lambdas, alphas)?;
    Ok(Parsed { params, lambda, alpha })
}

fn parse_point(raw: &str, depth: usize, flag: &str) -> Result<Vec<Complex64>, CliError> {
    let s = parse_complex_list(raw)?;
    if s.len() != depth {
        return Err(CliError::Usage(format!("--{flag} has {} coordinates, expected {depth}", s.len())));
    }
    Ok(s)
}

fn warnings(params: &TwistParams, s: &EvalPoint, cfg: &CliConfig) -> Vec<String> {
    let policy = cfg.policy();
    let mut out = Vec::new();
    if let Some((h, d)) = classifier::nearest_polar(params, s, NEAR_POLE_WARNING, policy.integer_test_eps) {
        out.push(format!("point is {d:.3e} from the polar hyperplane {h}; accuracy may degrade"));
    }
    if params.lambdas().iter().chain(params.alphas()).any(|x| !x.is_exact()) {
        out.push("some parameters are floating point; integrality tests use a tolerance".into());
    }
    out
}

fn result_json(res: &EvalResult, input: Value, cfg: &CliConfig, warnings: &[String]) -> Value {
    json!({
        "value": { "re": res.value.re, "im": res.value.im },
        "error_bound": res.error_bound,
        "region_index": res.region_index,
        "warnings": warnings,
        "input": input,
        "config": cfg,
        "diagnostics": res.diagnostics,
    })
}

fn emit_result(doc: &Value, res: &EvalResult, warnings: &[String], fmt: OutputFormat) {
    match fmt {
        OutputFormat::Json => println!("{doc}"),
        OutputFormat::Csv => {
            println!("re,im,error_bound,region_index");
            println!("{},{},{},{}", res.value.re, res.value.im, res.error_bound, res.region_index);
        }
        OutputFormat::Text => {
            println!("value        {}", format_complex(res.value));
            println!("error_bound  {:e}", res.error_bound);
            println!("region_index {}", res.region_index);
            for w in warnings {
                println!("warning: {w}");
            }
        }
    }
}

pub fn cmd_eval(a: &EvalArgs, cfg: &CliConfig) -> Result<(), CliError> {
    let p = parse_params(&a.params)?;
    let coords = parse_point(&a.s, a.params.depth, "s")?;
    let point = EvalPoint::new(coords.clone());
    let policy = cfg.policy();
    let res = if a.direct {
        eval_direct(&p.params, &point, &policy)?
    } else {
        eval_continued(&p.params, &point, &policy)?
    };
    let warns = warnings(&p.params, &point, cfg);
    let input = json!({
        "depth": a.params.depth,
        "lambda": p.lambda,
        "alpha": p.alpha,
        "s": coords.iter().map(|z| format_complex(*z)).collect::<Vec<_>>(),
        "method": if a.direct { "direct" } else { "continued" },
    });
    let doc = result_json(&res, input, cfg, &warns);
    emit_result(&doc, &res, &warns, cfg.output.unwrap_or(OutputFormat::Json));
    Ok(())
}

pub fn cmd_residue(a: &ResidueArgs, cfg: &CliConfig) -> Result<(), CliError> {
    let p = parse_params(&a.params)?;
    let h = parse_hyperplane(&a.hyperplane)?;
    if h.i > a.params.depth {
        return Err(CliError::Usage(format!("hyperplane index {} exceeds depth {}", h.i, a.params.depth)));
    }
    let coords = parse_point(&a.point, a.params.depth, "point")?;
    let point = EvalPoint::new(coords.clone());
    let res = residue(&p.params, h, &point, &cfg.policy())?;
    let input = json!({
        "depth": a.params.depth,
        "lambda": p.lambda,
        "alpha": p.alpha,
        "point": coords.iter().map(|z| format_complex(*z)).collect::<Vec<_>>(),
    });
    let mut doc = result_json(&res, input, cfg, &[]);
    doc["hyperplane"] = json!({ "i": h.i, "k": h.k });
    emit_result(&doc, &res, &[], cfg.output.unwrap_or(OutputFormat::Json));
    Ok(())
}

fn certainty_name(c: Certainty) -> &'static str {
    match c {
        Certainty::ProvenPole => "proven-pole",
        Certainty::Possible => "possible",
        Certainty::Removable => "removable",
        Certainty::Indeterminate => "indeterminate",
    }
}

fn report_json(rep: &SingularityReport) -> Result<Value, CliError> {
    let mut doc = serde_json::to_value(rep).map_err(|e| CliError::Usage(e.to_string()))?;
    for (fam, slot) in rep.families.iter().zip(doc["families"].as_array_mut().into_iter().flatten()) {
        slot["k_set"]["text"] = json!(fam.k_set.to_string());
        slot["k_set"]["members"] = json!(fam.k_set.enumerate(DISPLAY_BOUND));
    }
    Ok(doc)
}

pub fn cmd_singularities(a: &SingularityArgs, cfg: &CliConfig) -> Result<(), CliError> {
    let p = parse_params(&a.params)?;
    let rep = classifier::classify(&p.params, cfg.policy().integer_test_eps)?;
    let status = serde_json::to_value(rep.status).map_err(|e| CliError::Usage(e.to_string()))?;
    let status = status.as_str().unwrap_or_default().to_string();
    match cfg.output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => println!("{}", report_json(&rep)?),
        OutputFormat::Csv => {
            println!("i,k_set,certainty");
            for f in &rep.families {
                println!("{},\"{}\",{}", f.i, f.k_set, certainty_name(f.certainty));
            }
        }
        OutputFormat::Text => {
            println!("status: {status}");
            for f in &rep.families {
                println!("  H_{{{},k}}  {}  ({})", f.i, f.k_set, certainty_name(f.certainty));
            }
            if !rep.integer_indices.is_empty() {
                println!("integer mu indices: {:?}", rep.integer_indices);
            }
        }
    }
    Ok(())
}
