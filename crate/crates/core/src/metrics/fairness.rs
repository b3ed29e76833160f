//! Group-fairness metrics for binary classification.
//!
//! Each metric is the absolute difference of a per-group statistic between
//! two groups (equalized odds and conditional use accuracy take the larger
//! of two such differences). Treatment equality compares FN/FP ratios.

use std::collections::BTreeSet;

use super::confusion::{confusion_counts, ConfusionCounts};
use super::dataset::ClassificationRecord;
use super::performance::{accuracy_of, precision_of, recall_of};
use super::{MetricError, MetricResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FairnessMetric {
    StatisticalParityDifference,
    EqualOpportunityDifference,
    PredictiveEqualityDifference,
    EqualizedOdds,
    PredictiveParityDifference,
    ConditionalUseAccuracyDifference,
    OverallAccuracyDifference,
    TreatmentEqualityDifference,
}

impl FairnessMetric {
    pub const ALL: [FairnessMetric; 8] = [
        FairnessMetric::StatisticalParityDifference,
        FairnessMetric::EqualOpportunityDifference,
        FairnessMetric::PredictiveEqualityDifference,
        FairnessMetric::EqualizedOdds,
        FairnessMetric::PredictiveParityDifference,
        FairnessMetric::ConditionalUseAccuracyDifference,
        FairnessMetric::OverallAccuracyDifference,
        FairnessMetric::TreatmentEqualityDifference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FairnessMetric::StatisticalParityDifference => "statistical_parity_difference",
            FairnessMetric::EqualOpportunityDifference => "equal_opportunity_difference",
            FairnessMetric::PredictiveEqualityDifference => "predictive_equality_difference",
            FairnessMetric::EqualizedOdds => "equalized_odds",
            FairnessMetric::PredictiveParityDifference => "predictive_parity_difference",
            FairnessMetric::ConditionalUseAccuracyDifference => {
                "conditional_use_accuracy_difference"
            }
            FairnessMetric::OverallAccuracyDifference => "overall_accuracy_difference",
            FairnessMetric::TreatmentEqualityDifference => "treatment_equality_difference",
        }
    }

    /// Treatment equality compares unbounded ratios; every other metric is
    /// a difference of probabilities and lies in [0, 1].
    pub fn is_bounded(self) -> bool {
        self != FairnessMetric::TreatmentEqualityDifference
    }
}

fn positive_rate(c: &ConfusionCounts) -> f64 {
    c.predicted_positive() as f64 / c.total() as f64
}

fn false_positive_rate(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    if c.negatives() == 0 {
        return Err(undefined(
            metric,
            "a group has no negative records (tn + fp = 0)",
        ));
    }
    Ok(c.fp as f64 / c.negatives() as f64)
}

fn negative_predictive_value(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    if c.predicted_negative() == 0 {
        return Err(undefined(
            metric,
            "a group has no negative predictions (tn + fn = 0)",
        ));
    }
    Ok(c.tn as f64 / c.predicted_negative() as f64)
}

fn fn_fp_ratio(c: &ConfusionCounts, metric: &str) -> Result<f64, MetricError> {
    if c.fp == 0 {
        return Err(undefined(metric, "a group has no false positives"));
    }
    Ok(c.fn_ as f64 / c.fp as f64)
}

fn undefined(metric: &str, reason: &str) -> MetricError {
    MetricError::UndefinedMetric {
        metric: metric.to_owned(),
        reason: reason.to_owned(),
    }
}

/// Evaluate `metric` between `group_a` and `group_b`.
pub fn fairness_metric(
    metric: FairnessMetric,
    data: &[ClassificationRecord],
    group_a: &str,
    group_b: &str,
) -> Result<MetricResult, MetricError> {
    let name = metric.name();
    let a = confusion_counts(data, Some(group_a))?;
    let b = confusion_counts(data, Some(group_b))?;
    let gap =
        |f: &dyn Fn(&ConfusionCounts) -> Result<f64, MetricError>| -> Result<f64, MetricError> {
            Ok((f(&a)? - f(&b)?).abs())
        };
    let tpr = |c: &ConfusionCounts| recall_of(c, name);
    let fpr = |c: &ConfusionCounts| false_positive_rate(c, name);
    let ppv = |c: &ConfusionCounts| precision_of(c, name);
    let npv = |c: &ConfusionCounts| negative_predictive_value(c, name);
    let value = match metric {
        FairnessMetric::StatisticalParityDifference => gap(&|c| Ok(positive_rate(c)))?,
        FairnessMetric::EqualOpportunityDifference => gap(&tpr)?,
        FairnessMetric::PredictiveEqualityDifference => gap(&fpr)?,
        FairnessMetric::EqualizedOdds => gap(&tpr)?.max(gap(&fpr)?),
        FairnessMetric::PredictiveParityDifference => gap(&ppv)?,
        FairnessMetric::ConditionalUseAccuracyDifference => gap(&ppv)?.max(gap(&npv)?),
        FairnessMetric::OverallAccuracyDifference => gap(&|c| accuracy_of(c, name))?,
        FairnessMetric::TreatmentEqualityDifference => gap(&|c| fn_fp_ratio(c, name))?,
    };
    let mut result = MetricResult::whole(name, value);
    result.slice = format!("{group_a} vs {group_b}");
    result.params.insert("group_a".into(), group_a.to_owned());
    result.params.insert("group_b".into(), group_b.to_owned());
    Ok(result)
}

/// Evaluate `metric` for every unordered pair of groups present in `data`,
/// in lexicographic group order.
pub fn fairness_pairwise(
    metric: FairnessMetric,
    data: &[ClassificationRecord],
) -> Result<Vec<MetricResult>, MetricError> {
    let groups: Vec<&str> = data
        .iter()
        .map(|r| r.group.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if groups.len() < 2 {
        return Err(MetricError::EmptySlice(
            "fewer than two groups in dataset".into(),
        ));
    }
    let mut out = Vec::new();
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            out.push(fairness_metric(metric, data, a, b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(g: &str, y: u8, p: u8) -> ClassificationRecord {
        ClassificationRecord::new(g, y == 1, p == 1, None)
    }

    #[test]
    fn statistical_parity_hand_count() {
        // group a predicts {1,1,0,0}, group b {1,0,0,0}
        let data = [
            rec("a", 1, 1),
            rec("a", 0, 1),
            rec("a", 1, 0),
            rec("a", 0, 0),
            rec("b", 1, 1),
            rec("b", 0, 0),
            rec("b", 1, 0),
            rec("b", 0, 0),
        ];
        let r =
            fairness_metric(FairnessMetric::StatisticalParityDifference, &data, "a", "b").unwrap();
        assert_eq!(r.value, 0.25);
        assert_eq!(r.slice, "a vs b");
    }

    #[test]
    fn equalized_odds_is_max_of_rate_gaps() {
        // a: tp=2 fn=1 fp=1 tn=1 ; b: tp=1 fn=1 fp=0 tn=3 (10 records)
        let data = [
            rec("a", 1, 1),
            rec("a", 1, 1),
            rec("a", 1, 0),
            rec("a", 0, 1),
            rec("a", 0, 0),
            rec("b", 1, 1),
            rec("b", 1, 0),
            rec("b", 0, 0),
            rec("b", 0, 0),
            rec("b", 0, 0),
        ];
        // TPR gap |2/3 - 1/2| = 1/6, FPR gap |1/2 - 0| = 1/2
        let eo = fairness_metric(FairnessMetric::EqualizedOdds, &data, "a", "b").unwrap();
        assert_eq!(eo.value, 0.5);
        let eop =
            fairness_metric(FairnessMetric::EqualOpportunityDifference, &data, "a", "b").unwrap();
        assert!((eop.value - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn treatment_equality_without_false_positives() {
        let data = [
            rec("a", 1, 0),
            rec("a", 0, 1),
            rec("b", 1, 0),
            rec("b", 0, 0),
        ];
        assert!(matches!(
            fairness_metric(FairnessMetric::TreatmentEqualityDifference, &data, "a", "b"),
            Err(MetricError::UndefinedMetric { .. })
        ));
    }

    #[test]
    fn identical_groups_give_zero() {
        let base = [(1, 1), (0, 1), (1, 0), (0, 0), (1, 1), (0, 1)];
        let data: Vec<_> = base
            .iter()
            .map(|&(y, p)| rec("a", y, p))
            .chain(base.iter().map(|&(y, p)| rec("b", y, p)))
            .collect();
        for m in FairnessMetric::ALL {
            assert_eq!(
                fairness_metric(m, &data, "a", "b").unwrap().value,
                0.0,
                "{m:?}"
            );
        }
    }

    #[test]
    fn missing_group() {
        let data = [rec("a", 1, 1)];
        assert_eq!(
            fairness_metric(FairnessMetric::EqualizedOdds, &data, "a", "zz").unwrap_err(),
            MetricError::EmptySlice("zz".into())
        );
    }

    #[test]
    fn pairwise_enumerates_sorted_pairs() {
        let data = [rec("c", 1, 1), rec("a", 1, 0), rec("b", 0, 1)];
        let all = fairness_pairwise(FairnessMetric::StatisticalParityDifference, &data).unwrap();
        let slices: Vec<&str> = all.iter().map(|r| r.slice.as_str()).collect();
        assert_eq!(slices, ["a vs b", "a vs c", "b vs c"]);
    }
}
