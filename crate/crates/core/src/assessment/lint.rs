//! Completeness, evidence and reference checks over an assessment document.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::document::{AssessmentDocument, CriterionStatus, ItemResponse, ResponseStatus};
use super::gating::{interception_addressed_in, required_for_levels};
use crate::catalog::{Catalog, CatalogItem, ItemKind, ProtectionLevel};
use crate::id::{Aspect, CatalogId, Category, Dimension, RiskAreaRef};
use crate::metrics::{self, MetricError};
use crate::verdict::{dimension_summary_check, SummaryCheckError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    RequiredItemMissing,
    ResponseOpen,
    UnknownItem,
    EvidenceTypeMissing,
    ConditionalEvidenceAbsent,
    EvidenceLocatorEmpty,
    DanglingReference,
    NotApplicableUnjustified,
    CriterionUnbound,
    MetricOutsideTarget,
    MetricNotSupported,
    MetricNotEvaluated,
    MetricEvaluationFailed,
    DatasetUnresolved,
    DeviationUnrecorded,
    OverallAssessmentMissing,
    SummaryMissing,
    SummaryRationaleEmpty,
    SummaryInconsistent,
    ProtectionMissing,
    ProtectionUnjustified,
    TradeoffUnjustified,
    CatalogVersionMismatch,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::RequiredItemMissing => "RequiredItemMissing",
            Rule::ResponseOpen => "ResponseOpen",
            Rule::UnknownItem => "UnknownItem",
            Rule::EvidenceTypeMissing => "EvidenceTypeMissing",
            Rule::ConditionalEvidenceAbsent => "ConditionalEvidenceAbsent",
            Rule::EvidenceLocatorEmpty => "EvidenceLocatorEmpty",
            Rule::DanglingReference => "DanglingReference",
            Rule::NotApplicableUnjustified => "NotApplicableUnjustified",
            Rule::CriterionUnbound => "CriterionUnbound",
            Rule::MetricOutsideTarget => "MetricOutsideTarget",
            Rule::MetricNotSupported => "MetricNotSupported",
            Rule::MetricNotEvaluated => "MetricNotEvaluated",
            Rule::MetricEvaluationFailed => "MetricEvaluationFailed",
            Rule::DatasetUnresolved => "DatasetUnresolved",
            Rule::DeviationUnrecorded => "DeviationUnrecorded",
            Rule::OverallAssessmentMissing => "OverallAssessmentMissing",
            Rule::SummaryMissing => "SummaryMissing",
            Rule::SummaryRationaleEmpty => "SummaryRationaleEmpty",
            Rule::SummaryInconsistent => "SummaryInconsistent",
            Rule::ProtectionMissing => "ProtectionMissing",
            Rule::ProtectionUnjustified => "ProtectionUnjustified",
            Rule::TradeoffUnjustified => "TradeoffUnjustified",
            Rule::CatalogVersionMismatch => "CatalogVersionMismatch",
        }
    }

    /// Severity when the rule fires on a required item.
    pub fn severity(self) -> Severity {
        match self {
            Rule::ResponseOpen
            | Rule::ConditionalEvidenceAbsent
            | Rule::CriterionUnbound
            | Rule::MetricNotSupported
            | Rule::MetricNotEvaluated
            | Rule::CatalogVersionMismatch => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule: Rule,
    pub severity: Severity,
    pub item: CatalogId,
    pub message: String,
}

impl Finding {
    pub fn new(rule: Rule, item: CatalogId, message: impl Into<String>) -> Finding {
        Finding {
            rule,
            severity: rule.severity(),
            item,
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}] {}",
            self.severity, self.rule, self.item, self.message
        )
    }
}

/// Sort findings by item, severity, rule and message.
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| {
        a.item
            .cmp(&b.item)
            .then(a.severity.cmp(&b.severity))
            .then(a.rule.code().cmp(b.rule.code()))
            .then(a.message.cmp(&b.message))
    });
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Error)
}

/// The overall-assessment item that stands for a whole risk area.
pub(crate) fn area_anchor(catalog: &Catalog, area: RiskAreaRef) -> CatalogId {
    catalog
        .risk_area(area)
        .and_then(|a| {
            a.items
                .iter()
                .find(|i| i.kind == ItemKind::OverallAssessment)
                .or(a.items.first())
        })
        .map(|i| i.id)
        .unwrap_or_else(|| CatalogId::summary(area.dimension()).expect("assessed dimension"))
}

fn area_of(id: &CatalogId) -> Option<RiskAreaRef> {
    if id.category() != Category::RiskArea {
        return None;
    }
    RiskAreaRef::new(id.dimension(), id.area()?).ok()
}

struct Linter<'a> {
    catalog: &'a Catalog,
    doc: &'a AssessmentDocument,
    index: HashMap<CatalogId, &'a CatalogItem>,
    responses: HashMap<CatalogId, &'a ItemResponse>,
    required: BTreeSet<CatalogId>,
    findings: Vec<Finding>,
}

impl<'a> Linter<'a> {
    fn push(&mut self, rule: Rule, item: CatalogId, message: impl Into<String>) {
        let mut f = Finding::new(rule, item, message);
        // Voluntary content outside the required set is checked, but never blocks.
        if f.severity == Severity::Error
            && rule != Rule::UnknownItem
            && self.index.contains_key(&item)
            && !self.required.contains(&item)
        {
            f.severity = Severity::Warning;
        }
        self.findings.push(f);
    }

    /// Follow a by-reference chain to an addressed response.
    fn resolve_reference(&self, from: CatalogId, target: CatalogId) -> Result<(), String> {
        let mut seen = BTreeSet::from([from]);
        let mut current = target;
        loop {
            if !self.index.contains_key(&current) {
                return Err(format!("reference target {current} is not in the catalog"));
            }
            let Some(r) = self.responses.get(&current) else {
                return Err(format!("reference target {current} has no response"));
            };
            match &r.status {
                ResponseStatus::Addressed => return Ok(()),
                ResponseStatus::ByReference(next) => {
                    if !seen.insert(current) || seen.contains(next) {
                        return Err(format!("reference cycle through {current}"));
                    }
                    current = *next;
                }
                ResponseStatus::Open => {
                    return Err(format!("reference target {current} is still open"))
                }
                ResponseStatus::NotApplicable(_) => {
                    return Err(format!(
                        "reference target {current} is marked not applicable"
                    ))
                }
            }
        }
    }

    fn criterion_status(&self, id: &CatalogId) -> Option<CriterionStatus> {
        let area = area_of(id)?;
        self.doc.overall_for(area)?.criteria_status.get(id).copied()
    }

    fn check_response(&mut self, r: &'a ItemResponse) {
        let Some(item) = self.index.get(&r.item).copied() else {
            self.push(
                Rule::UnknownItem,
                r.item,
                format!("{} is not a catalog item", r.item),
            );
            return;
        };
        match &r.status {
            ResponseStatus::Open => {
                if !self.required.contains(&r.item) {
                    self.push(Rule::ResponseOpen, r.item, "stub present, content empty");
                }
                return;
            }
            ResponseStatus::NotApplicable(why) => {
                if why.trim().is_empty() {
                    self.push(
                        Rule::NotApplicableUnjustified,
                        r.item,
                        "marked not applicable without justification",
                    );
                }
            }
            ResponseStatus::ByReference(target) => {
                if let Err(reason) = self.resolve_reference(r.item, *target) {
                    self.push(Rule::DanglingReference, r.item, reason);
                }
            }
            ResponseStatus::Addressed => {
                let given: BTreeSet<_> = r.evidence.iter().map(|e| e.kind).collect();
                for kind in item.mandatory_requirements() {
                    if !given.contains(&kind) {
                        self.push(
                            Rule::EvidenceTypeMissing,
                            r.item,
                            format!("requires {kind} evidence"),
                        );
                    }
                }
                for kind in item.conditional_requirements() {
                    if !given.contains(&kind) {
                        self.push(
                            Rule::ConditionalEvidenceAbsent,
                            r.item,
                            format!("{kind} evidence is expected where applicable"),
                        );
                    }
                }
                if item.kind == ItemKind::Criterion
                    && r.bindings.is_empty()
                    && r.narrative.trim().is_empty()
                {
                    self.push(
                        Rule::CriterionUnbound,
                        r.item,
                        "criterion has neither a metric binding nor a qualitative narrative",
                    );
                }
            }
        }
        for (n, e) in r.evidence.iter().enumerate() {
            if e.locator.trim().is_empty() {
                self.push(
                    Rule::EvidenceLocatorEmpty,
                    r.item,
                    format!("evidence #{} ({}) has an empty locator", n + 1, e.kind),
                );
            }
        }
        for b in &r.bindings {
            if let Err(MetricError::NotSupported { name, reason }) =
                metrics::resolve_metric(&b.metric)
            {
                self.push(
                    Rule::MetricNotSupported,
                    r.item,
                    format!("{name} cannot be computed ({reason})"),
                );
            }
            match b.measured {
                None => self.push(
                    Rule::MetricNotEvaluated,
                    r.item,
                    format!("{} on `{}` has no measured value", b.metric, b.dataset),
                ),
                Some(v) if !b.target.contains(v) => {
                    if self.criterion_status(&r.item) == Some(CriterionStatus::Met) {
                        self.push(
                            Rule::MetricOutsideTarget,
                            r.item,
                            format!(
                                "{} = {v} lies outside target {} but the criterion is recorded as met",
                                b.metric, b.target
                            ),
                        );
                    }
                }
                Some(_) => {}
            }
        }
    }

    fn check_required(&mut self) {
        let required: Vec<CatalogId> = self.required.iter().copied().collect();
        let mut anchored = BTreeSet::new();
        for id in required {
            let response = self.responses.get(&id).copied();
            let open = response.is_some_and(|r| r.status == ResponseStatus::Open);
            if id.dimension() == Dimension::Profile {
                let answer = self.doc.profile.get(&id);
                let answered = answer.is_some_and(|a| !a.trim().is_empty())
                    || response.is_some_and(|r| r.status != ResponseStatus::Open);
                if answered {
                    continue;
                }
                if answer.is_some() || open {
                    self.push(Rule::ResponseOpen, id, "profile question not yet answered");
                } else {
                    self.push(
                        Rule::RequiredItemMissing,
                        id,
                        "profile question has no answer",
                    );
                }
                continue;
            }
            match response {
                None => self.push(
                    Rule::RequiredItemMissing,
                    id,
                    "required item has no response",
                ),
                Some(_) if open => self.push(Rule::ResponseOpen, id, "stub present, content empty"),
                Some(_) => {}
            }
            if open || response.is_none() {
                continue;
            }
            let not_applicable =
                response.is_some_and(|r| matches!(r.status, ResponseStatus::NotApplicable(_)));
            match id.category() {
                Category::Protection => {
                    if let Some(p) = self.doc.protection.get(&id.dimension()) {
                        if p.justification.trim().is_empty() {
                            self.push(
                                Rule::ProtectionUnjustified,
                                id,
                                format!("protection requirement {} has no justification", p.level),
                            );
                        }
                    }
                }
                Category::Summary => self.check_summary(id),
                Category::RiskArea if id.aspect() == Some(Aspect::OverallAssessment) => {
                    let area = area_of(&id).expect("risk-area id");
                    if !not_applicable
                        && self.doc.overall_for(area).is_none()
                        && anchored.insert(area)
                    {
                        self.push(
                            Rule::OverallAssessmentMissing,
                            area_anchor(self.catalog, area),
                            format!("risk area {area} has no overall assessment record"),
                        );
                    }
                }
                _ => {}
            }
        }
    }

    fn check_summary(&mut self, id: CatalogId) {
        let d = id.dimension();
        match dimension_summary_check(self.doc, d) {
            Ok(_) | Err(SummaryCheckError::NotExamined(_)) => {}
            Err(SummaryCheckError::SummaryMissing(_)) => self.push(
                Rule::SummaryMissing,
                id,
                format!("dimension {d} has no summary record"),
            ),
            Err(SummaryCheckError::Unclassified(_)) => self.push(
                Rule::SummaryMissing,
                id,
                format!("summary of {d} has no residual-risk class"),
            ),
            Err(e @ SummaryCheckError::Consistency { .. }) => {
                self.push(Rule::SummaryInconsistent, id, e.to_string())
            }
        }
        if let Some(s) = self.doc.summary_for(d) {
            if s.rationale.trim().is_empty() {
                self.push(
                    Rule::SummaryRationaleEmpty,
                    id,
                    "summary rationale is empty",
                );
            }
        }
    }

    fn check_records(&mut self) {
        for oa in &self.doc.overall {
            let anchor = area_anchor(self.catalog, oa.risk_area);
            for cid in oa.criteria_status.keys() {
                if !self.index.contains_key(cid) {
                    self.push(
                        Rule::UnknownItem,
                        *cid,
                        format!("{cid} is not a catalog item"),
                    );
                }
            }
            let deviating: Vec<String> = oa
                .criteria_status
                .iter()
                .filter(|(_, s)| **s != CriterionStatus::Met)
                .map(|(c, _)| c.to_string())
                .collect();
            let recorded = oa.deviations.iter().any(|d| !d.trim().is_empty());
            if !deviating.is_empty() && !recorded {
                self.push(
                    Rule::DeviationUnrecorded,
                    anchor,
                    format!(
                        "criteria not fully met without recorded deviations: {}",
                        deviating.join(", ")
                    ),
                );
            }
        }
        for id in self.doc.profile.keys() {
            if !self.index.contains_key(id) {
                self.push(
                    Rule::UnknownItem,
                    *id,
                    format!("{id} is not a catalog item"),
                );
            }
        }
        let at = CatalogId::cross_dimensional();
        for t in &self.doc.tradeoffs {
            if t.justification.trim().is_empty() {
                self.push(
                    Rule::TradeoffUnjustified,
                    at,
                    format!(
                        "trade-off between {} and {} has no justification",
                        t.dimension_a, t.dimension_b
                    ),
                );
            }
        }
        if let Some(v) = &self.doc.meta.catalog_version {
            if *v != self.catalog.version {
                self.push(
                    Rule::CatalogVersionMismatch,
                    at,
                    format!(
                        "document targets catalog {v}, checked against {}",
                        self.catalog.version
                    ),
                );
            }
        }
    }
}

/// Lint a document against a catalog. Output order is deterministic.
pub fn lint(catalog: &Catalog, doc: &AssessmentDocument) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut levels = BTreeMap::new();
    for d in Dimension::ASSESSED {
        let level = match doc.level(d) {
            Some(l) => l,
            None => {
                findings.push(Finding::new(
                    Rule::ProtectionMissing,
                    CatalogId::protection(d).expect("assessed dimension"),
                    format!("no protection requirement given for {d}; examined as high"),
                ));
                ProtectionLevel::High
            }
        };
        levels.insert(d, level);
    }
    let required = required_for_levels(catalog, &levels, interception_addressed_in(doc))
        .expect("every dimension has a level");
    let mut linter = Linter {
        catalog,
        doc,
        index: catalog.index(),
        responses: doc.responses.iter().map(|r| (r.item, r)).collect(),
        required,
        findings,
    };
    for r in &doc.responses {
        linter.check_response(r);
    }
    linter.check_required();
    linter.check_records();
    let mut findings = linter.findings;
    sort_findings(&mut findings);
    findings
}
