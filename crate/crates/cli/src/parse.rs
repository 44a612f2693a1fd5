//! Parsing of complex numbers, parameter lists and hyperplanes.

use multizeta::domain::{Hyperplane, Real};
use num_complex::Complex64;

use crate::CliError;

fn bad(what: &str, s: &str) -> CliError {
    CliError::Usage(format!("cannot parse {what} '{s}'"))
}

fn parse_f64(s: &str, whole: &str) -> Result<f64, CliError> {
    let v: f64 = s.parse().map_err(|_| bad("complex number", whole))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad("complex number", whole))
    }
}

/// `a`, `a+bi`, `a-bi`, `bi` or `i`; exponents such as `1e-3+2i` are allowed.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(bad("complex number", s));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_f64(t, s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64, CliError> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => parse_f64(p, s),
        }
    };
    match split {
        Some(p) => Ok(Complex64::new(parse_f64(&body[..p], s)?, imag(&body[p..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_real_list(s: &str) -> Result<Vec<Real>, CliError> {
    s.split(',')
        .map(|x| x.parse::<Real>().map_err(|_| bad("real", x)))
        .collect()
}

pub fn parse_hyperplane(s: &str) -> Result<Hyperplane, CliError> {
    let (i, k) = s.split_once(',').ok_or_else(|| bad("hyperplane (expected i,k)", s))?;
    let i: usize = i.trim().parse().map_err(|_| bad("hyperplane index", s))?;
    let k: u32 = k.trim().parse().map_err(|_| bad("hyperplane index", s))?;
    if i == 0 {
        return Err(CliError::Usage("hyperplane index i starts at 1".into()));
    }
    Ok(Hyperplane::new(i, k))
}

/// Shortest text that parses back to the same complex number.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im)
    }
}
