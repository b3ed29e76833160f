use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Target interval for a quantitative criterion. `None` bounds are
/// infinite; closedness of an infinite bound is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lower: Option<f64>,
    upper: Option<f64>,
    lower_closed: bool,
    upper_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed interval: {0}")]
pub struct IntervalError(pub String);

impl Interval {
    pub fn new(
        lower: Option<f64>,
        upper: Option<f64>,
        lower_closed: bool,
        upper_closed: bool,
    ) -> Result<Interval, IntervalError> {
        if lower.is_some_and(|v| !v.is_finite()) || upper.is_some_and(|v| !v.is_finite()) {
            return Err(IntervalError(
                "bounds must be finite numbers or null".into(),
            ));
        }
        if let (Some(lo), Some(hi)) = (lower, upper) {
            if lo > hi {
                return Err(IntervalError(format!(
                    "lower bound {lo} exceeds upper bound {hi}"
                )));
            }
            if lo == hi && !(lower_closed && upper_closed) {
                return Err(IntervalError(format!(
                    "degenerate interval at {lo} must be closed on both sides"
                )));
            }
        }
        Ok(Interval {
            lower,
            upper,
            lower_closed: lower.is_some() && lower_closed,
            upper_closed: upper.is_some() && upper_closed,
        })
    }

    pub fn closed(lower: f64, upper: f64) -> Result<Interval, IntervalError> {
        Interval::new(Some(lower), Some(upper), true, true)
    }

    pub fn at_least(lower: f64) -> Result<Interval, IntervalError> {
        Interval::new(Some(lower), None, true, false)
    }

    pub fn at_most(upper: f64) -> Result<Interval, IntervalError> {
        Interval::new(None, Some(upper), false, true)
    }

    pub fn lower(&self) -> Option<f64> {
        self.lower
    }

    pub fn upper(&self) -> Option<f64> {
        self.upper
    }

    pub fn contains(&self, value: f64) -> bool {
        check_interval(value, self)
    }
}

/// True iff `value` satisfies both bound predicates. NaN never passes.
pub fn check_interval(value: f64, target: &Interval) -> bool {
    let lower_ok = match target.lower {
        None => !value.is_nan(),
        Some(lo) if target.lower_closed => value >= lo,
        Some(lo) => value > lo,
    };
    let upper_ok = match target.upper {
        None => !value.is_nan(),
        Some(hi) if target.upper_closed => value <= hi,
        Some(hi) => value < hi,
    };
    lower_ok && upper_ok
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            None => write!(f, "(-inf")?,
            Some(lo) => write!(f, "{}{lo}", if self.lower_closed { '[' } else { '(' })?,
        }
        f.write_str(", ")?;
        match self.upper {
            None => write!(f, "+inf)"),
            Some(hi) => write!(f, "{hi}{}", if self.upper_closed { ']' } else { ')' }),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    min: Option<f64>,
    max: Option<f64>,
    #[serde(default = "default_closed")]
    min_closed: bool,
    #[serde(default = "default_closed")]
    max_closed: bool,
}

fn default_closed() -> bool {
    true
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.min, raw.max, raw.min_closed, raw.max_closed)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval {
            min: i.lower,
            max: i.upper,
            min_closed: i.lower_closed,
            max_closed: i.upper_closed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_example() {
        assert!(check_interval(40.0, &Interval::at_least(35.0).unwrap()));
        assert!(!check_interval(34.99, &Interval::at_least(35.0).unwrap()));
    }

    #[test]
    fn point_interval() {
        assert!(check_interval(0.0, &Interval::closed(0.0, 0.0).unwrap()));
        assert!(Interval::new(Some(0.0), Some(0.0), true, false).is_err());
    }

    #[test]
    fn outside() {
        assert!(!check_interval(0.3, &Interval::closed(0.0, 0.2).unwrap()));
        assert!(!check_interval(
            f64::NAN,
            &Interval::new(None, None, false, false).unwrap()
        ));
    }

    #[test]
    fn open_bounds() {
        let i = Interval::new(Some(0.0), Some(1.0), false, false).unwrap();
        assert!(!i.contains(0.0));
        assert!(!i.contains(1.0));
        assert!(i.contains(0.5));
    }

    #[test]
    fn json_form() {
        let i: Interval = serde_json::from_str(
            r#"{"min": 0, "max": 0.1, "min_closed": true, "max_closed": true}"#,
        )
        .unwrap();
        assert_eq!(i, Interval::closed(0.0, 0.1).unwrap());
        let open: Interval = serde_json::from_str(r#"{"min": 35, "max": null}"#).unwrap();
        assert_eq!(open, Interval::at_least(35.0).unwrap());
        assert_eq!(
            serde_json::to_string(&open).unwrap(),
            r#"{"min":35.0,"max":null,"min_closed":true,"max_closed":false}"#
        );
        assert!(serde_json::from_str::<Interval>(r#"{"min": 2, "max": 1}"#).is_err());
        assert_eq!(open.to_string(), "[35, +inf)");
    }
}
