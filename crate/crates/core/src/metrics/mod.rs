//! Quantitative criteria: dataset ingestion, metric evaluation and
//! target-interval checks.

pub mod calibration;
pub mod confusion;
pub mod dataset;
pub mod fairness;
pub mod interval;
pub mod performance;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use calibration::{CalibrationMetric, CalibrationParams, DEFAULT_ECE_BINS, NLL_EPSILON};
pub use confusion::{confusion_counts, ConfusionCounts};
pub use dataset::{
    load_dataset, load_dataset_file, ClassificationRecord, Dataset, DatasetError, RegressionRecord,
    Schema,
};
pub use fairness::{fairness_pairwise, FairnessMetric};
pub use interval::{check_interval, Interval, IntervalError};
pub use performance::PerformanceMetric;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("empty slice: no records for {0}")]
    EmptySlice(String),
    #[error("{metric} is undefined: {reason}")]
    UndefinedMetric { metric: String, reason: String },
    #[error("record on row {row} has no score")]
    MissingScores { row: usize },
    #[error("bin count must be at least 1, got {0}")]
    BadBinCount(usize),
    #[error("metric `{name}` is not supported: {reason}")]
    NotSupported { name: String, reason: String },
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("metric {metric} needs a {expected} dataset")]
    SchemaMismatch {
        metric: String,
        expected: &'static str,
    },
    #[error("bad parameter: {0}")]
    BadParam(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub name: String,
    pub value: f64,
    pub slice: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl MetricResult {
    pub(crate) fn whole(name: &str, value: f64) -> MetricResult {
        MetricResult {
            name: name.to_owned(),
            value,
            slice: "all records".into(),
            params: BTreeMap::new(),
        }
    }
}

/// A registered, computable metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Performance(PerformanceMetric),
    Fairness(FairnessMetric),
    Calibration(CalibrationMetric),
}

impl Metric {
    pub fn all() -> impl Iterator<Item = Metric> {
        PerformanceMetric::ALL
            .into_iter()
            .map(Metric::Performance)
            .chain(FairnessMetric::ALL.into_iter().map(Metric::Fairness))
            .chain(CalibrationMetric::ALL.into_iter().map(Metric::Calibration))
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Performance(m) => m.name(),
            Metric::Fairness(m) => m.name(),
            Metric::Calibration(m) => m.name(),
        }
    }

    pub fn schema(self) -> Schema {
        match self {
            Metric::Performance(m) if m.is_regression() => Schema::Regression,
            _ => Schema::Classification,
        }
    }
}

/// Names that appear in the catalog's metric lists but are deliberately not
/// computed, with the reason reported to the user.
const UNSUPPORTED: &[(&str, &str)] = &[
    (
        "bleu",
        "natural-language generation metric; only usable as a measured input",
    ),
    (
        "perplexity",
        "language-model metric; only usable as a measured input",
    ),
    (
        "miou",
        "computer-vision segmentation metric; only usable as a measured input",
    ),
    (
        "ssim",
        "image-reconstruction metric; only usable as a measured input",
    ),
    (
        "psnr",
        "image-reconstruction metric; only usable as a measured input",
    ),
    (
        "silhouette",
        "clustering metric; only usable as a measured input",
    ),
    ("ami", "clustering metric; only usable as a measured input"),
    (
        "completeness",
        "clustering metric; only usable as a measured input",
    ),
    ("mrr", "ranking metric; only usable as a measured input"),
    ("dcg", "ranking metric; only usable as a measured input"),
    (
        "individual_fairness",
        "requires a similarity metric between individuals",
    ),
    ("counterfactual_fairness", "requires a causal graph"),
    ("no_proxy_discrimination", "requires a causal graph"),
    ("fair_inference", "requires a causal graph"),
];

/// Look up a metric by its registered name (case-insensitive).
pub fn resolve_metric(name: &str) -> Result<Metric, MetricError> {
    let key = name.trim().to_ascii_lowercase();
    if let Some(m) = Metric::all().find(|m| m.name() == key) {
        return Ok(m);
    }
    if let Some((n, reason)) = UNSUPPORTED.iter().find(|(n, _)| *n == key) {
        return Err(MetricError::NotSupported {
            name: (*n).to_owned(),
            reason: (*reason).to_owned(),
        });
    }
    Err(MetricError::UnknownMetric(name.to_owned()))
}

/// True if the name is either computable or a known unsupported name.
pub fn is_registered(name: &str) -> bool {
    !matches!(resolve_metric(name), Err(MetricError::UnknownMetric(_)))
}

pub fn performance_metric(name: &str, data: &Dataset) -> Result<MetricResult, MetricError> {
    let m = match resolve_metric(name)? {
        Metric::Performance(m) => m,
        _ => {
            return Err(MetricError::BadParam(format!(
                "{name} is not a performance metric"
            )))
        }
    };
    match data {
        Dataset::Classification(d) => performance::classification_metric(m, d),
        Dataset::Regression(d) => performance::regression_metric(m, d),
    }
}

pub fn fairness_metric(
    name: &str,
    data: &[ClassificationRecord],
    group_a: &str,
    group_b: &str,
) -> Result<MetricResult, MetricError> {
    match resolve_metric(name)? {
        Metric::Fairness(m) => fairness::fairness_metric(m, data, group_a, group_b),
        _ => Err(MetricError::BadParam(format!(
            "{name} is not a fairness metric"
        ))),
    }
}

pub fn calibration_metric(
    name: &str,
    data: &[ClassificationRecord],
    params: CalibrationParams,
) -> Result<MetricResult, MetricError> {
    match resolve_metric(name)? {
        Metric::Calibration(m) => calibration::calibration_metric(m, data, params),
        _ => Err(MetricError::BadParam(format!(
            "{name} is not a calibration metric"
        ))),
    }
}

/// Parameters a metric binding may carry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricParams {
    /// Fairness: first group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_a: Option<String>,
    /// Fairness: second group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_b: Option<String>,
    /// Performance and calibration: restrict to one group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Calibration: ECE bin count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
}

impl MetricParams {
    pub fn is_empty(&self) -> bool {
        *self == MetricParams::default()
    }
}

/// Evaluate any registered metric with binding parameters.
///
/// A fairness metric without both groups is evaluated over every group
/// pair and the largest difference is returned.
pub fn evaluate(
    name: &str,
    data: &Dataset,
    params: &MetricParams,
) -> Result<MetricResult, MetricError> {
    let metric = resolve_metric(name)?;
    if metric.schema() != data.schema() {
        return Err(MetricError::SchemaMismatch {
            metric: metric.name().to_owned(),
            expected: match metric.schema() {
                Schema::Classification => "classification",
                Schema::Regression => "regression",
            },
        });
    }
    if params.bins.is_some() && !matches!(metric, Metric::Calibration(CalibrationMetric::Ece)) {
        return Err(MetricError::BadParam(format!(
            "`bins` does not apply to {}",
            metric.name()
        )));
    }
    let fairness_groups = params.group_a.is_some() || params.group_b.is_some();
    if fairness_groups && !matches!(metric, Metric::Fairness(_)) {
        return Err(MetricError::BadParam(format!(
            "`group_a`/`group_b` do not apply to {}",
            metric.name()
        )));
    }
    let classification = |data: &Dataset| -> Vec<ClassificationRecord> {
        match data {
            Dataset::Classification(d) => match &params.group {
                Some(g) => d.iter().filter(|r| &r.group == g).cloned().collect(),
                None => d.clone(),
            },
            Dataset::Regression(_) => Vec::new(),
        }
    };
    let with_group = |mut r: MetricResult| {
        if let Some(g) = &params.group {
            r.slice = format!("group {g}");
            r.params.insert("group".into(), g.clone());
        }
        r
    };
    match metric {
        Metric::Fairness(m) => {
            if params.group.is_some() {
                return Err(MetricError::BadParam(format!(
                    "`group` does not apply to {}; use group_a and group_b",
                    m.name()
                )));
            }
            let Dataset::Classification(d) = data else {
                unreachable!()
            };
            match (&params.group_a, &params.group_b) {
                (Some(a), Some(b)) => fairness::fairness_metric(m, d, a, b),
                (None, None) => {
                    let all = fairness_pairwise(m, d)?;
                    let pairs = all.len();
                    let mut worst = all
                        .into_iter()
                        .reduce(|x, y| if y.value > x.value { y } else { x })
                        .expect("pairwise yields at least one pair");
                    worst.params.insert("pairs".into(), pairs.to_string());
                    worst.slice = format!("max over {pairs} group pairs ({})", worst.slice);
                    Ok(worst)
                }
                _ => Err(MetricError::BadParam(
                    "group_a and group_b must be given together".into(),
                )),
            }
        }
        Metric::Performance(m) => match data {
            Dataset::Regression(d) => {
                if params.group.is_some() {
                    return Err(MetricError::BadParam(
                        "`group` does not apply to regression datasets".into(),
                    ));
                }
                performance::regression_metric(m, d)
            }
            Dataset::Classification(_) => {
                let d = classification(data);
                if d.is_empty() {
                    return Err(MetricError::EmptySlice(
                        params
                            .group
                            .clone()
                            .unwrap_or_else(|| "<all records>".into()),
                    ));
                }
                performance::classification_metric(m, &d).map(with_group)
            }
        },
        Metric::Calibration(m) => {
            let d = classification(data);
            if d.is_empty() {
                return Err(MetricError::EmptySlice(
                    params
                        .group
                        .clone()
                        .unwrap_or_else(|| "<all records>".into()),
                ));
            }
            let cp = CalibrationParams {
                bins: params.bins.unwrap_or(DEFAULT_ECE_BINS),
            };
            calibration::calibration_metric(m, &d, cp).map(with_group)
        }
    }
}
