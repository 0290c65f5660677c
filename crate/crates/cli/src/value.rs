//! Flag values: a number, `lo:hi` bounds or an inclusive `lo:hi:step` range.

use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Largest number of points a range may expand to.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Scalar(f64),
    Range {
        lo: f64,
        hi: f64,
        step: Option<f64>,
        /// Decimal places of the written numbers, used to strip rounding noise.
        decimals: Option<u32>,
    },
}

fn decimals_of(s: &str) -> Option<u32> {
    if s.contains(['e', 'E']) {
        return None;
    }
    Some(s.split_once('.').map_or(0, |(_, frac)| frac.len() as u32))
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

impl FromStr for Value {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Value::Scalar(number(x)?)),
            [lo, hi] | [lo, hi, _] => {
                let (lo_v, hi_v) = (number(lo)?, number(hi)?);
                if hi_v < lo_v {
                    return Err(format!("range {s:?} has hi < lo"));
                }
                let step = match parts.get(2) {
                    Some(st) => {
                        let st_v = number(st)?;
                        if st_v <= 0.0 {
                            return Err(format!("range {s:?} needs a positive step"));
                        }
                        Some(st_v)
                    }
                    None => None,
                };
                let decimals = parts.iter().map(|p| decimals_of(p.trim())).try_fold(0u32, |a, d| d.map(|d| a.max(d)));
                Ok(Value::Range { lo: lo_v, hi: hi_v, step, decimals })
            }
            _ => Err(format!("expected a number, lo:hi or lo:hi:step, got {s:?}")),
        }
    }
}

impl Value {
    pub fn scalar(&self, name: &str) -> CliResult<f64> {
        match *self {
            Value::Scalar(x) => Ok(x),
            _ => Err(CliError::Usage(format!("--{name} expects a single number"))),
        }
    }

    /// `(lo, hi)` of a range without requiring a step.
    pub fn bounds(&self, name: &str) -> CliResult<(f64, f64)> {
        match *self {
            Value::Range { lo, hi, .. } => Ok((lo, hi)),
            _ => Err(CliError::Usage(format!("--{name} expects lo:hi"))),
        }
    }

    /// Points of the range (a scalar gives itself).
    pub fn points(&self, name: &str) -> CliResult<Vec<f64>> {
        match *self {
            Value::Scalar(x) => Ok(vec![x]),
            Value::Range { step: None, .. } => Err(CliError::Usage(format!("--{name} expects lo:hi:step"))),
            Value::Range { lo, hi, step: Some(step), decimals } => {
                let n = ((hi - lo) / step + 1e-9).floor();
                if n + 1.0 > MAX_POINTS as f64 {
                    return Err(CliError::Usage(format!("--{name} expands to more than {MAX_POINTS} points")));
                }
                let scale = decimals.filter(|&d| d <= 15).map(|d| 10f64.powi(d as i32));
                Ok((0..=n as usize)
                    .map(|i| {
                        let x = lo + i as f64 * step;
                        scale.map_or(x, |s| (x * s).round() / s)
                    })
                    .collect())
            }
        }
    }
}
