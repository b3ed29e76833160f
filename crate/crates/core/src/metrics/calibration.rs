//! Quality of confidence outputs: Brier score, negative log-likelihood and
//! expected calibration error.

use super::dataset::ClassificationRecord;
use super::{MetricError, MetricResult};

/// Scores are clamped to `[NLL_EPSILON, 1 - NLL_EPSILON]` before taking logs.
pub const NLL_EPSILON: f64 = 1e-12;
pub const DEFAULT_ECE_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CalibrationMetric {
    Ece,
    Brier,
    Nll,
}

impl CalibrationMetric {
    pub const ALL: [CalibrationMetric; 3] = [
        CalibrationMetric::Ece,
        CalibrationMetric::Brier,
        CalibrationMetric::Nll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CalibrationMetric::Ece => "ece",
            CalibrationMetric::Brier => "brier",
            CalibrationMetric::Nll => "nll",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CalibrationParams {
    pub bins: usize,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        CalibrationParams {
            bins: DEFAULT_ECE_BINS,
        }
    }
}

fn scored(data: &[ClassificationRecord]) -> Result<Vec<(f64, f64)>, MetricError> {
    if data.is_empty() {
        return Err(MetricError::EmptySlice("<all records>".into()));
    }
    data.iter()
        .map(|r| {
            r.score
                .map(|s| (s, if r.y_true { 1.0 } else { 0.0 }))
                .ok_or(MetricError::MissingScores { row: r.row })
        })
        .collect()
}

pub fn calibration_metric(
    metric: CalibrationMetric,
    data: &[ClassificationRecord],
    params: CalibrationParams,
) -> Result<MetricResult, MetricError> {
    let pairs = scored(data)?;
    let n = pairs.len() as f64;
    let mut result = match metric {
        CalibrationMetric::Brier => {
            let v = pairs.iter().map(|(s, y)| (s - y).powi(2)).sum::<f64>() / n;
            MetricResult::whole("brier", v)
        }
        CalibrationMetric::Nll => {
            let v = pairs
                .iter()
                .map(|&(s, y)| {
                    let s = s.clamp(NLL_EPSILON, 1.0 - NLL_EPSILON);
                    -(y * s.ln() + (1.0 - y) * (1.0 - s).ln())
                })
                .sum::<f64>()
                / n;
            let mut r = MetricResult::whole("nll", v);
            r.params
                .insert("epsilon".into(), format!("{NLL_EPSILON:e}"));
            r
        }
        CalibrationMetric::Ece => {
            if params.bins == 0 {
                return Err(MetricError::BadBinCount(params.bins));
            }
            let bins = params.bins;
            // per bin: (count, score sum, positive count)
            let mut acc = vec![(0usize, 0.0f64, 0.0f64); bins];
            for &(s, y) in &pairs {
                let slot = &mut acc[bin_index(s, bins)];
                slot.0 += 1;
                slot.1 += s;
                slot.2 += y;
            }
            let v = acc
                .iter()
                .filter(|(count, _, _)| *count > 0)
                .map(|&(count, score_sum, pos)| {
                    let c = count as f64;
                    (c / n) * (score_sum / c - pos / c).abs()
                })
                .sum::<f64>();
            let mut r = MetricResult::whole("ece", v);
            r.params.insert("bins".into(), bins.to_string());
            r
        }
    };
    result.slice = "all records".into();
    Ok(result)
}

/// Equal-width bin `k` holds scores in `[k/B, (k+1)/B)`; the last bin is
/// closed at 1. The bounds are evaluated in floating point exactly as
/// written so that edge scores land where the edge predicate says.
fn bin_index(score: f64, bins: usize) -> usize {
    let b = bins as f64;
    let mut k = ((score * b).floor().max(0.0) as usize).min(bins - 1);
    while k > 0 && score < k as f64 / b {
        k -= 1;
    }
    while k + 1 < bins && score >= (k + 1) as f64 / b {
        k += 1;
    }
    k
}
