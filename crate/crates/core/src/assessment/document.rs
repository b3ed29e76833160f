//! The assessor-authored assessment document and its JSON form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::catalog::{ProtectionLevel, RequirementType};
use crate::id::{Aspect, CatalogId, Category, Dimension, RiskAreaRef};
use crate::metrics::{self, Interval, MetricError, MetricParams};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    pub version: String,
    pub assessor: String,
    pub date: String,
    /// Catalog version the document was written against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog_version: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProtectionEntry {
    pub level: ProtectionLevel,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Evidence {
    pub kind: RequirementType,
    pub locator: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricBinding {
    pub metric: String,
    pub dataset: String,
    #[serde(skip_serializing_if = "MetricParams::is_empty")]
    pub params: MetricParams,
    pub target: Interval,
    pub measured: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseStatus {
    Addressed,
    /// Scaffolded stub awaiting content.
    Open,
    ByReference(CatalogId),
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemResponse {
    pub item: CatalogId,
    pub status: ResponseStatus,
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bindings: Vec<MetricBinding>,
    pub narrative: String,
}

impl ItemResponse {
    pub fn stub(item: CatalogId) -> ItemResponse {
        ItemResponse {
            item,
            status: ResponseStatus::Open,
            evidence: Vec::new(),
            bindings: Vec::new(),
            narrative: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionStatus {
    Met,
    PartiallyMet,
    NotMet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverallAssessmentRecord {
    pub risk_area: RiskAreaRef,
    #[serde(default)]
    pub criteria_status: BTreeMap<CatalogId, CriterionStatus>,
    #[serde(default)]
    pub deviations: Vec<String>,
    #[serde(default)]
    pub conclusion: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualClass {
    Negligible,
    NonNegligibleAcceptable,
    Unacceptable,
}

impl ResidualClass {
    pub const ALL: [ResidualClass; 3] = [
        ResidualClass::Negligible,
        ResidualClass::NonNegligibleAcceptable,
        ResidualClass::Unacceptable,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ResidualClass::Negligible => "negligible",
            ResidualClass::NonNegligibleAcceptable => "non-negligible but acceptable",
            ResidualClass::Unacceptable => "unacceptable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionSummaryRecord {
    pub dimension: Dimension,
    /// `None` while the summary is a scaffolded stub.
    pub residual_class: Option<ResidualClass>,
    #[serde(default)]
    pub rationale: String,
    /// Risk areas whose deviations the rationale accounts for.
    #[serde(default)]
    pub referenced_deviations: Vec<RiskAreaRef>,
    #[serde(default)]
    pub cross_dimension_effects: Vec<Dimension>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeoffRecord {
    pub dimension_a: Dimension,
    pub dimension_b: Dimension,
    pub prioritized: Dimension,
    #[serde(default)]
    pub justification: String,
}

impl TradeoffRecord {
    pub fn involves(&self, d: Dimension) -> bool {
        self.dimension_a == d || self.dimension_b == d
    }

    /// The endpoint that was not prioritized.
    pub fn yielded(&self) -> Dimension {
        if self.prioritized == self.dimension_a {
            self.dimension_b
        } else {
            self.dimension_a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signoff {
    pub signer: String,
    pub date: String,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessmentDocument {
    pub meta: Meta,
    pub profile: BTreeMap<CatalogId, String>,
    pub protection: BTreeMap<Dimension, ProtectionEntry>,
    pub responses: Vec<ItemResponse>,
    pub overall: Vec<OverallAssessmentRecord>,
    pub summaries: Vec<DimensionSummaryRecord>,
    pub tradeoffs: Vec<TradeoffRecord>,
    pub signoff: Option<Signoff>,
}

impl AssessmentDocument {
    pub fn level(&self, d: Dimension) -> Option<ProtectionLevel> {
        self.protection.get(&d).map(|p| p.level)
    }

    pub fn response(&self, id: &CatalogId) -> Option<&ItemResponse> {
        self.responses.iter().find(|r| r.item == *id)
    }

    pub fn overall_for(&self, area: RiskAreaRef) -> Option<&OverallAssessmentRecord> {
        self.overall.iter().find(|o| o.risk_area == area)
    }

    pub fn summary_for(&self, d: Dimension) -> Option<&DimensionSummaryRecord> {
        self.summaries.iter().find(|s| s.dimension == d)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Re-check every structural invariant of a document built in memory.
    pub fn check_invariants(&self) -> Result<(), DocumentError> {
        let raw: RawDocument = serde_json::from_str(&self.to_json())
            .map_err(|e| DocumentError::Schema(e.to_string()))?;
        raw.into_document().map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub fn parse_document(source: &str) -> Result<AssessmentDocument, DocumentError> {
    let raw: RawDocument = serde_json::from_str(source).map_err(|e| {
        use serde_json::error::Category as C;
        match e.classify() {
            C::Data => DocumentError::Schema(e.to_string()),
            C::Io | C::Syntax | C::Eof => DocumentError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;
    raw.into_document()
}

/// Map entries in source order, so duplicate keys can be reported.
struct Pairs<K, V>(Vec<(K, V)>);

impl<'de, K: Deserialize<'de>, V: Deserialize<'de>> Deserialize<'de> for Pairs<K, V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct PairVisitor<K, V>(PhantomData<(K, V)>);

        impl<'de, K: Deserialize<'de>, V: Deserialize<'de>> Visitor<'de> for PairVisitor<K, V> {
            type Value = Pairs<K, V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(Pairs(out))
            }
        }

        d.deserialize_map(PairVisitor(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawProtection {
    Level(ProtectionLevel),
    Entry {
        level: ProtectionLevel,
        #[serde(default)]
        justification: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    min: Option<f64>,
    max: Option<f64>,
    #[serde(default = "yes")]
    min_closed: bool,
    #[serde(default = "yes")]
    max_closed: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBinding {
    metric: String,
    dataset: String,
    #[serde(default)]
    params: MetricParams,
    target: RawInterval,
    #[serde(default)]
    measured: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResponse {
    item: CatalogId,
    status: ResponseStatus,
    #[serde(default)]
    evidence: Vec<Evidence>,
    #[serde(default)]
    bindings: Vec<RawBinding>,
    #[serde(default)]
    narrative: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    meta: Meta,
    #[serde(default = "empty_pairs")]
    profile: Pairs<CatalogId, String>,
    protection: Pairs<Dimension, RawProtection>,
    #[serde(default)]
    responses: Vec<RawResponse>,
    #[serde(default)]
    overall: Vec<OverallAssessmentRecord>,
    #[serde(default)]
    summaries: Vec<DimensionSummaryRecord>,
    #[serde(default)]
    tradeoffs: Vec<TradeoffRecord>,
    #[serde(default)]
    signoff: Option<Signoff>,
}

fn empty_pairs<K, V>() -> Pairs<K, V> {
    Pairs(Vec::new())
}

fn violation(msg: impl Into<String>) -> DocumentError {
    DocumentError::InvariantViolation(msg.into())
}

fn assessed(d: Dimension, context: &str) -> Result<(), DocumentError> {
    if Dimension::ASSESSED.contains(&d) {
        Ok(())
    } else {
        Err(violation(format!(
            "{context}: {d} is not an assessed dimension"
        )))
    }
}

impl RawDocument {
    fn into_document(self) -> Result<AssessmentDocument, DocumentError> {
        let mut profile = BTreeMap::new();
        for (id, answer) in self.profile.0 {
            if id.dimension() != Dimension::Profile {
                return Err(violation(format!(
                    "profile answer keyed by non-profile id {id}"
                )));
            }
            if profile.insert(id, answer).is_some() {
                return Err(violation(format!("duplicate profile answer for {id}")));
            }
        }

        let mut protection = BTreeMap::new();
        for (d, raw) in self.protection.0 {
            assessed(d, "protection")?;
            let entry = match raw {
                RawProtection::Level(level) => ProtectionEntry {
                    level,
                    justification: String::new(),
                },
                RawProtection::Entry {
                    level,
                    justification,
                } => ProtectionEntry {
                    level,
                    justification,
                },
            };
            if !ProtectionLevel::allowed_for(d).contains(&entry.level) {
                return Err(violation(format!(
                    "protection requirement of {d} cannot be {}",
                    entry.level
                )));
            }
            if protection.insert(d, entry).is_some() {
                return Err(violation(format!("duplicate protection entry for {d}")));
            }
        }

        let mut seen = BTreeSet::new();
        let mut responses = Vec::with_capacity(self.responses.len());
        for raw in self.responses {
            let item = raw.item;
            if !seen.insert(item) {
                return Err(violation(format!("duplicate response for {item}")));
            }
            if raw.status == ResponseStatus::ByReference(item) {
                return Err(violation(format!("{item} refers to itself")));
            }
            if !raw.bindings.is_empty() && item.aspect() != Some(Aspect::Criterion) {
                return Err(violation(format!(
                    "{item} carries metric bindings but is not a criterion"
                )));
            }
            let mut bindings = Vec::with_capacity(raw.bindings.len());
            for b in raw.bindings {
                if let Err(MetricError::UnknownMetric(name)) = metrics::resolve_metric(&b.metric) {
                    return Err(violation(format!("{item}: unknown metric `{name}`")));
                }
                let t = b.target;
                let target = Interval::new(t.min, t.max, t.min_closed, t.max_closed)
                    .map_err(|e| violation(format!("{item}: {e}")))?;
                if b.measured.is_some_and(|v| !v.is_finite()) {
                    return Err(violation(format!("{item}: measured value must be finite")));
                }
                bindings.push(MetricBinding {
                    metric: b.metric,
                    dataset: b.dataset,
                    params: b.params,
                    target,
                    measured: b.measured,
                });
            }
            responses.push(ItemResponse {
                item,
                status: raw.status,
                evidence: raw.evidence,
                bindings,
                narrative: raw.narrative,
            });
        }

        let mut areas = BTreeSet::new();
        for oa in &self.overall {
            if !areas.insert(oa.risk_area) {
                return Err(violation(format!(
                    "duplicate overall assessment for {}",
                    oa.risk_area
                )));
            }
            for id in oa.criteria_status.keys() {
                if !oa.risk_area.contains(id) || id.aspect() != Some(Aspect::Criterion) {
                    return Err(violation(format!(
                        "overall assessment of {} lists {id}, which is not one of its criteria",
                        oa.risk_area
                    )));
                }
            }
        }

        let mut dims = BTreeSet::new();
        for s in &self.summaries {
            assessed(s.dimension, "summary")?;
            if !dims.insert(s.dimension) {
                return Err(violation(format!("duplicate summary for {}", s.dimension)));
            }
            if let Some(r) = s
                .referenced_deviations
                .iter()
                .find(|r| r.dimension() != s.dimension)
            {
                return Err(violation(format!(
                    "summary of {} references deviations of {r}",
                    s.dimension
                )));
            }
            for d in &s.cross_dimension_effects {
                assessed(*d, "cross-dimension effect")?;
            }
        }

        for t in &self.tradeoffs {
            assessed(t.dimension_a, "trade-off")?;
            assessed(t.dimension_b, "trade-off")?;
            if t.dimension_a == t.dimension_b {
                return Err(violation(format!(
                    "trade-off must relate two different dimensions, got {} twice",
                    t.dimension_a
                )));
            }
            if !t.involves(t.prioritized) {
                return Err(violation(format!(
                    "trade-off between {} and {} prioritizes {}",
                    t.dimension_a, t.dimension_b, t.prioritized
                )));
            }
        }

        Ok(AssessmentDocument {
            meta: self.meta,
            profile,
            protection,
            responses,
            overall: self.overall,
            summaries: self.summaries,
            tradeoffs: self.tradeoffs,
            signoff: self.signoff,
        })
    }
}

/// Is `id` a measure of the reliability risk area on intercepting errors at
/// model level (the trigger for the functional-safety exception)?
pub(crate) fn is_model_level_interception_measure(id: &CatalogId) -> bool {
    id.in_risk_area(Dimension::Reliability, crate::id::AreaCode::IM)
        && id.category() == Category::RiskArea
        && id.aspect() == Some(Aspect::Measure)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "meta": {"name": "x", "version": "1", "assessor": "a", "date": "2024-01-01"},
        "protection": {"FN": "high", "AC": {"level": "low", "justification": "j"},
                       "TR": "low", "RE": "medium", "S": "low", "DP": "low"},
        "responses": [
            {"item": "FN-R-FN-CR-01", "status": "addressed",
             "bindings": [{"metric": "statistical_parity_difference", "dataset": "d",
                           "params": {"group_a": "a", "group_b": "b"},
                           "target": {"min": 0, "max": 0.1}}]},
            {"item": "FN-R-FN-ME-01", "status": {"by_reference": "FN-R-FN-CR-01"}},
            {"item": "FN-R-FN-ME-02", "status": {"not_applicable": "no"}},
            {"item": "FN-R-FN-ME-99", "status": "open"}
        ],
        "signoff": null
    }"#;

    fn with(replace: &str, by: &str) -> Result<AssessmentDocument, DocumentError> {
        assert!(MINIMAL.contains(replace), "{replace}");
        parse_document(&MINIMAL.replacen(replace, by, 1))
    }

    #[test]
    fn parses_minimal() {
        let d = parse_document(MINIMAL).unwrap();
        assert_eq!(d.protection.len(), 6);
        assert_eq!(
            d.level(Dimension::AutonomyControl),
            Some(ProtectionLevel::Low)
        );
        assert_eq!(d.protection[&Dimension::AutonomyControl].justification, "j");
        assert_eq!(d.responses.len(), 4);
        assert_eq!(
            d.responses[0].bindings[0].target,
            Interval::closed(0.0, 0.1).unwrap()
        );
        // unknown but well-formed ids survive for lint to report
        assert_eq!(d.responses[3].item.to_string(), "FN-R-FN-ME-99");
        let again = parse_document(&d.to_json()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn reliability_cannot_be_low() {
        assert!(matches!(
            with(r#""RE": "medium""#, r#""RE": "low""#),
            Err(DocumentError::InvariantViolation(_))
        ));
    }

    #[test]
    fn syntax_and_schema_errors() {
        assert!(matches!(
            parse_document(""),
            Err(DocumentError::Syntax { .. })
        ));
        assert!(matches!(
            parse_document("{"),
            Err(DocumentError::Syntax { .. })
        ));
        assert!(matches!(
            parse_document("[]"),
            Err(DocumentError::Schema(_))
        ));
        assert!(matches!(
            with(r#""FN": "high""#, r#""FN": "extreme""#),
            Err(DocumentError::Schema(_))
        ));
        assert!(matches!(
            with(r#""item": "FN-R-FN-ME-99""#, r#""item": "FN-X""#),
            Err(DocumentError::Schema(_))
        ));
    }

    #[test]
    fn invariant_violations() {
        let cases = [
            (r#""TR": "low""#, r#""TR": "low", "FN": "low""#),
            (
                r#""status": "open""#,
                r#""status": {"by_reference": "FN-R-FN-ME-99"}"#,
            ),
            (r#""max": 0.1"#, r#""max": -1"#),
            (r#""statistical_parity_difference""#, r#""no_such_metric""#),
            (r#""FN-R-FN-ME-02""#, r#""FN-R-FN-CR-01""#),
            (
                r#""signoff": null"#,
                r#""tradeoffs": [{"dimension_a": "TR", "dimension_b": "TR", "prioritized": "TR"}], "signoff": null"#,
            ),
            (
                r#""signoff": null"#,
                r#""tradeoffs": [{"dimension_a": "TR", "dimension_b": "RE", "prioritized": "S"}], "signoff": null"#,
            ),
            (
                r#""signoff": null"#,
                r#""overall": [{"risk_area": "FN-R-FN", "criteria_status": {"FN-R-CD-CR-01": "met"}}], "signoff": null"#,
            ),
            (
                r#""signoff": null"#,
                r#""summaries": [{"dimension": "PF", "residual_class": "negligible"}], "signoff": null"#,
            ),
        ];
        for (from, to) in cases {
            assert!(
                matches!(with(from, to), Err(DocumentError::InvariantViolation(_))),
                "{to}"
            );
        }
    }

    #[test]
    fn bleu_binding_parses() {
        assert!(with(r#""statistical_parity_difference""#, r#""bleu""#).is_ok());
    }
}
