//! Run configuration: defaults, an optional key=value file, flag overrides.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use multizeta::evaluator::TruncationPolicy;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(CliError::Usage(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub eps: f64,
    pub max_k: usize,
    pub max_terms: u64,
    pub pole_tolerance: f64,
    pub threads: usize,
    /// Unset means JSON for single evaluations and text for reports.
    pub output: Option<OutputFormat>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            eps: 1e-10,
            max_k: 200,
            max_terms: 10_000_000,
            pole_tolerance: 1e-8,
            threads: 1,
            output: None,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub max_k: Option<usize>,
    pub max_terms: Option<u64>,
    pub pole_tolerance: Option<f64>,
    pub threads: Option<usize>,
    pub output: Option<OutputFormat>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("config line {line}: bad value '{value}' for {key}")))
}

impl CliConfig {
    /// Parse `key = value` lines; `#` starts a comment. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = CliConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {line_no}: expected key=value")))?;
            let key = key.trim();
            match key {
                "eps" => cfg.eps = parse_value(key, value, line_no)?,
                "max_k" => cfg.max_k = parse_value(key, value, line_no)?,
                "max_terms" => cfg.max_terms = parse_value(key, value, line_no)?,
                "pole_tolerance" => cfg.pole_tolerance = parse_value(key, value, line_no)?,
                "threads" => cfg.threads = parse_value(key, value, line_no)?,
                "output" => cfg.output = Some(value.parse()?),
                other => return Err(CliError::Usage(format!("config line {line_no}: unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)?
            }
            None => CliConfig::default(),
        };
        if let Some(v) = overrides.eps {
            cfg.eps = v;
        }
        if let Some(v) = overrides.max_k {
            cfg.max_k = v;
        }
        if let Some(v) = overrides.max_terms {
            cfg.max_terms = v;
        }
        if let Some(v) = overrides.pole_tolerance {
            cfg.pole_tolerance = v;
        }
        if let Some(v) = overrides.threads {
            cfg.threads = v;
        }
        if overrides.output.is_some() {
            cfg.output = overrides.output;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be positive")))
            }
        };
        positive("eps", self.eps)?;
        positive("pole_tolerance", self.pole_tolerance)?;
        if self.max_k == 0 || self.max_terms == 0 || self.threads == 0 {
            return Err(CliError::Usage("max_k, max_terms and threads must be positive".into()));
        }
        Ok(())
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            eps: self.eps,
            max_k: self.max_k,
            max_terms: self.max_terms,
            pole_tolerance: self.pole_tolerance,
            ..TruncationPolicy::default()
        }
    }
}
