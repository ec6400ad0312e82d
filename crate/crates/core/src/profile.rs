//! Piecewise-constant stiffness `c(x)` on `(0, 1)` with a constant
//! extension outside the domain.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    outside_value: f64,
}

impl StiffnessProfile {
    /// `values[i]` applies on `[b_{i-1}, b_i)` with `b_{-1} = 0`, `b_last = 1`.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, outside_value: f64) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::invalid(format!(
                "profile needs one more value than breakpoints ({} breakpoints, {} values)",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
            return Err(Error::invalid("profile breakpoints must lie in (0, 1)"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "profile breakpoints must be strictly increasing",
            ));
        }
        if values
            .iter()
            .chain(std::iter::once(&outside_value))
            .any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(Error::invalid(
                "stiffness values must be finite and positive",
            ));
        }
        Ok(StiffnessProfile {
            breakpoints,
            values,
            outside_value,
        })
    }

    /// Same value inside and outside the domain.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![c], c)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn outside_value(&self) -> f64 {
        self.outside_value
    }

    /// Right-continuous evaluation; `outside_value` off `[0, 1]`.
    pub fn value_at(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return self.outside_value;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        self.values[idx]
    }

    /// `(C_lower, C_upper)` over the domain and the extension.
    pub fn bounds(&self) -> (f64, f64) {
        self.values
            .iter()
            .chain(std::iter::once(&self.outside_value))
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// The single value if `c` is constant on `(0, 1)`.
    pub fn uniform_value(&self) -> Option<f64> {
        let first = self.values[0];
        self.values.iter().all(|&v| v == first).then_some(first)
    }

    /// Splits `[a, b]` at interior breakpoints, yielding `(lo, hi, value)`.
    pub fn pieces(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);
        cuts.windows(2)
            .map(|w| (w[0], w[1], self.value_at(0.5 * (w[0] + w[1]))))
            .collect()
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number '{s}' in profile")))
        })
        .collect()
}

/// `breakpoints=0.3,0.6; values=1,2,1; outside=1`
impl FromStr for StiffnessProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut breakpoints = Vec::new();
        let mut values = None;
        let mut outside = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("profile entry '{part}' lacks '='")))?;
            match key.trim() {
                "breakpoints" => breakpoints = parse_list(val)?,
                "values" => values = Some(parse_list(val)?),
                "outside" => {
                    outside = Some(val.trim().parse::<f64>().map_err(|_| {
                        Error::invalid(format!("bad outside value '{}'", val.trim()))
                    })?)
                }
                other => return Err(Error::invalid(format!("unknown profile key '{other}'"))),
            }
        }
        let values = values.ok_or_else(|| Error::invalid("profile is missing 'values='"))?;
        let outside = match outside {
            Some(v) => v,
            None => values.iter().copied().fold(f64::INFINITY, f64::min),
        };
        StiffnessProfile::new(breakpoints, values, outside)
    }
}

impl fmt::Display for StiffnessProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "breakpoints={}; values={}; outside={}",
            join(&self.breakpoints),
            join(&self.values),
            self.outside_value
        )
    }
}
