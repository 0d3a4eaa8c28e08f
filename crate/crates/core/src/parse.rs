//! Parsers for the small text arguments accepted on the command line.

use crate::error::{Error, Result};

fn parse_err(what: &'static str, input: &str) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
    }
}

/// Comma-separated column indices, e.g. `0,3,4`. Order is kept.
pub fn parse_column_list(input: &str) -> Result<Vec<usize>> {
    input
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err("column list", input)))
        .collect()
}

/// Either a comma-separated list (`0.25,0.5,1`) or a stepped range
/// `a..b`, which expands to `a, 2a, 3a, ...` up to `b`. Every fraction must
/// lie in `(0, 1]`.
pub fn parse_fractions(input: &str) -> Result<Vec<f64>> {
    let number = |t: &str| t.trim().parse::<f64>().map_err(|_| parse_err("fractions", input));
    let out = if let Some((lo, hi)) = input.split_once("..") {
        let (step, end) = (number(lo)?, number(hi)?);
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::BadFraction(step));
        }
        if !(end > 0.0 && end <= 1.0) {
            return Err(Error::BadFraction(end));
        }
        let steps = (end / step).round();
        if steps < 1.0 || (steps * step - end).abs() > 1e-9 {
            return Err(parse_err("fraction range with a whole number of steps", input));
        }
        // steps <= 1 / step, and step came from a finite decimal
        (1..=steps as u64)
            .map(|i| if i == steps as u64 { end } else { i as f64 * step })
            .collect()
    } else {
        input.split(',').map(number).collect::<Result<Vec<_>>>()?
    };
    match out.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        Some(&bad) => Err(Error::BadFraction(bad)),
        None => Ok(out),
    }
}

/// `m,n,arity,seed` for a synthetic uniform matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub rows: usize,
    pub cols: usize,
    pub arity: u32,
    pub seed: u64,
}

pub fn parse_synthetic(input: &str) -> Result<SyntheticSpec> {
    let parts: Vec<&str> = input.split(',').map(str::trim).collect();
    let [m, n, a, s] = parts[..] else {
        return Err(parse_err("synthetic spec m,n,arity,seed", input));
    };
    let err = || parse_err("synthetic spec m,n,arity,seed", input);
    let spec = SyntheticSpec {
        rows: m.parse().map_err(|_| err())?,
        cols: n.parse().map_err(|_| err())?,
        arity: a.parse().map_err(|_| err())?,
        seed: s.parse().map_err(|_| err())?,
    };
    if spec.rows == 0 || spec.cols == 0 {
        return Err(Error::EmptyInput);
    }
    if spec.arity == 0 {
        return Err(Error::BadArity);
    }
    Ok(spec)
}
