use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use crate::assessment::document::AssessmentDocument;
use crate::assessment::lint::{sort_findings, Finding, Rule};
use crate::metrics::{self, Dataset, MetricError, Schema};

/// Where a dataset named in a binding comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSource {
    Path(PathBuf),
    /// CSV text held in memory.
    Inline(String),
}

impl DatasetSource {
    fn load(&self, schema: Schema) -> Result<Dataset, String> {
        match self {
            DatasetSource::Path(p) => metrics::load_dataset_file(p, schema),
            DatasetSource::Inline(text) => metrics::load_dataset(text.as_bytes(), schema),
        }
        .map_err(|e| e.to_string())
    }
}

/// Fill every binding's measured value from its dataset. Problems become
/// findings; the affected binding's measured value is cleared, except for
/// metrics that cannot be computed, whose value is kept as given.
pub fn evaluate_bindings(
    doc: &AssessmentDocument,
    sources: &BTreeMap<String, DatasetSource>,
) -> (AssessmentDocument, Vec<Finding>) {
    let mut out = doc.clone();
    let mut findings = Vec::new();
    let mut cache: HashMap<(String, bool), Result<Dataset, String>> = HashMap::new();
    for response in &mut out.responses {
        let item = response.item;
        for b in &mut response.bindings {
            let metric = match metrics::resolve_metric(&b.metric) {
                Ok(m) => m,
                Err(MetricError::NotSupported { name, reason }) => {
                    findings.push(Finding::new(
                        Rule::MetricNotSupported,
                        item,
                        format!("{name} cannot be computed ({reason})"),
                    ));
                    continue;
                }
                Err(e) => {
                    b.measured = None;
                    findings.push(Finding::new(
                        Rule::MetricEvaluationFailed,
                        item,
                        e.to_string(),
                    ));
                    continue;
                }
            };
            let Some(source) = sources.get(&b.dataset) else {
                b.measured = None;
                findings.push(Finding::new(
                    Rule::DatasetUnresolved,
                    item,
                    format!("dataset `{}` was not supplied", b.dataset),
                ));
                continue;
            };
            let schema = metric.schema();
            let key = (b.dataset.clone(), schema == Schema::Regression);
            let data = cache.entry(key).or_insert_with(|| source.load(schema));
            let data = match data {
                Ok(d) => d,
                Err(e) => {
                    b.measured = None;
                    findings.push(Finding::new(
                        Rule::DatasetUnresolved,
                        item,
                        format!("dataset `{}`: {e}", b.dataset),
                    ));
                    continue;
                }
            };
            match metrics::evaluate(&b.metric, data, &b.params) {
                Ok(r) => b.measured = Some(r.value),
                Err(e) => {
                    b.measured = None;
                    findings.push(Finding::new(
                        Rule::MetricEvaluationFailed,
                        item,
                        format!("{} on `{}`: {e}", b.metric, b.dataset),
                    ));
                }
            }
        }
    }
    sort_findings(&mut findings);
    (out, findings)
}
