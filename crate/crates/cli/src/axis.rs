//! Grid axes: either an explicit list `a,b,c` or a range `start:stop:step`.

use std::fmt;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

/// Rounds grid values to 12 decimals so that `0.01·50` prints as `0.5`.
fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

impl Axis {
    pub fn single(v: f64) -> Self {
        Axis::List(vec![v])
    }

    pub fn range(start: f64, stop: f64, step: f64) -> Self {
        Axis::Range { start, stop, step }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        match *self {
            Axis::List(ref v) => {
                if v.is_empty() {
                    return Err(CliError::usage(format!("{name}: empty value list")));
                }
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    return Err(CliError::usage(format!("{name}: non-finite value {bad}")));
                }
            }
            Axis::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return Err(CliError::usage(format!("{name}: non-finite range")));
                }
                if step <= 0.0 {
                    return Err(CliError::usage(format!("{name}: step must be > 0, got {step}")));
                }
                if start > stop {
                    return Err(CliError::usage(format!(
                        "{name}: start {start} exceeds stop {stop}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Grid points in ascending order for ranges, as written for lists. The
    /// stop value is included when it lies on the grid.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::List(ref v) => v.clone(),
            Axis::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=count).map(|k| snap(start + k as f64 * step)).collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("not a number: {t:?}")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let axis = match parts.as_slice() {
            [single] => Axis::List(single.split(',').map(num).collect::<Result<_>>()?),
            [a, b, c] => Axis::range(num(a)?, num(b)?, num(c)?),
            _ => {
                return Err(CliError::usage(format!(
                    "axis {s:?}: expected a,b,c or start:stop:step"
                )))
            }
        };
        axis.validate("axis")?;
        Ok(axis)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::List(v) => {
                let items: Vec<String> = v.iter().map(f64::to_string).collect();
                f.write_str(&items.join(","))
            }
            Axis::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
        }
    }
}
