//! Classification and regression performance metrics.

use super::confusion::ConfusionCounts;
use super::dataset::{ClassificationRecord, RegressionRecord};
use super::{MetricError, MetricResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerformanceMetric {
    Accuracy,
    Precision,
    Recall,
    F1,
    Sensitivity,
    Specificity,
    BalancedAccuracy,
    Auc,
    Mse,
    Mae,
}

impl PerformanceMetric {
    pub const ALL: [PerformanceMetric; 10] = [
        PerformanceMetric::Accuracy,
        PerformanceMetric::Precision,
        PerformanceMetric::Recall,
        PerformanceMetric::F1,
        PerformanceMetric::Sensitivity,
        PerformanceMetric::Specificity,
        PerformanceMetric::BalancedAccuracy,
        PerformanceMetric::Auc,
        PerformanceMetric::Mse,
        PerformanceMetric::Mae,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PerformanceMetric::Accuracy => "accuracy",
            PerformanceMetric::Precision => "precision",
            PerformanceMetric::Recall => "recall",
            PerformanceMetric::F1 => "f1",
            PerformanceMetric::Sensitivity => "sensitivity",
            PerformanceMetric::Specificity => "specificity",
            PerformanceMetric::BalancedAccuracy => "balanced_accuracy",
            PerformanceMetric::Auc => "auc",
            PerformanceMetric::Mse => "mse",
            PerformanceMetric::Mae => "mae",
        }
    }

    pub fn is_regression(self) -> bool {
        matches!(self, PerformanceMetric::Mse | PerformanceMetric::Mae)
    }
}

fn ratio(metric: &str, num: u64, den: u64, what: &str) -> Result<f64, MetricError> {
    if den == 0 {
        return Err(MetricError::UndefinedMetric {
            metric: metric.to_owned(),
            reason: format!("{what} is zero"),
        });
    }
    Ok(num as f64 / den as f64)
}

pub(crate) fn precision_of(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    ratio(metric, c.tp, c.predicted_positive(), "tp + fp")
}

pub(crate) fn recall_of(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    ratio(metric, c.tp, c.positives(), "tp + fn")
}

pub(crate) fn specificity_of(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    ratio(metric, c.tn, c.negatives(), "tn + fp")
}

pub(crate) fn accuracy_of(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    ratio(metric, c.tp + c.tn, c.total(), "record count")
}

/// Evaluate a classification metric over `data` (already sliced by the caller).
pub fn classification_metric(
    metric: PerformanceMetric,
    data: &[ClassificationRecord],
) -> Result<MetricResult, MetricError> {
    let name = metric.name();
    if data.is_empty() {
        return Err(MetricError::EmptySlice("<all records>".into()));
    }
    let c = ConfusionCounts::tally(data);
    let value = match metric {
        PerformanceMetric::Accuracy => accuracy_of(&c, name)?,
        PerformanceMetric::Precision => precision_of(&c, name)?,
        PerformanceMetric::Recall | PerformanceMetric::Sensitivity => recall_of(&c, name)?,
        PerformanceMetric::Specificity => specificity_of(&c, name)?,
        PerformanceMetric::BalancedAccuracy => {
            (recall_of(&c, name)? + specificity_of(&c, name)?) / 2.0
        }
        PerformanceMetric::F1 => {
            let p = precision_of(&c, name)?;
            let r = recall_of(&c, name)?;
            if p + r == 0.0 {
                0.0
            } else {
                2.0 * p * r / (p + r)
            }
        }
        PerformanceMetric::Auc => auc(data)?,
        PerformanceMetric::Mse | PerformanceMetric::Mae => {
            return Err(MetricError::SchemaMismatch {
                metric: name.to_owned(),
                expected: "regression",
            })
        }
    };
    Ok(MetricResult::whole(name, value))
}

pub fn regression_metric(
    metric: PerformanceMetric,
    data: &[RegressionRecord],
) -> Result<MetricResult, MetricError> {
    let name = metric.name();
    if data.is_empty() {
        return Err(MetricError::EmptySlice("<all records>".into()));
    }
    let n = data.len() as f64;
    let value = match metric {
        PerformanceMetric::Mse => {
            data.iter()
                .map(|r| (r.y_pred - r.y_true).powi(2))
                .sum::<f64>()
                / n
        }
        PerformanceMetric::Mae => {
            data.iter()
                .map(|r| (r.y_pred - r.y_true).abs())
                .sum::<f64>()
                / n
        }
        _ => {
            return Err(MetricError::SchemaMismatch {
                metric: name.to_owned(),
                expected: "classification",
            })
        }
    };
    Ok(MetricResult::whole(name, value))
}

/// Area under the ROC curve as the Mann-Whitney statistic, computed from
/// mid-ranks so that tied scores count one half.
fn auc(data: &[ClassificationRecord]) -> Result<f64, MetricError> {
    let mut scored: Vec<(f64, bool)> = Vec::with_capacity(data.len());
    for r in data {
        match r.score {
            Some(s) => scored.push((s, r.y_true)),
            None => return Err(MetricError::MissingScores { row: r.row }),
        }
    }
    let positives = scored.iter().filter(|(_, y)| *y).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(MetricError::UndefinedMetric {
            metric: "auc".into(),
            reason: "needs at least one positive and one negative record".into(),
        });
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Sum of (doubled) mid-ranks of the positives; doubling keeps ties integral.
    let mut doubled_rank_sum: u64 = 0;
    let mut i = 0;
    while i < scored.len() {
        let mut j = i;
        while j < scored.len() && scored[j].0 == scored[i].0 {
            j += 1;
        }
        // ranks i+1 ..= j share the mid-rank (i + 1 + j) / 2
        let doubled_mid = (i + 1 + j) as u64;
        let tied_pos = scored[i..j].iter().filter(|(_, y)| *y).count() as u64;
        doubled_rank_sum += doubled_mid * tied_pos;
        i = j;
    }
    let p = positives as u64;
    // U = R_pos - p(p+1)/2; all quantities doubled to stay in integers.
    let doubled_u = doubled_rank_sum - p * (p + 1);
    Ok(doubled_u as f64 / (2 * p * negatives as u64) as f64)
}
