//! Risk-area status, dimension summary checks and the cross-dimensional
//! trustworthiness verdict.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assessment::document::{
    AssessmentDocument, CriterionStatus, OverallAssessmentRecord, ResidualClass, TradeoffRecord,
};
use crate::assessment::gating::functional_safety_exception;
use crate::assessment::lint::{lint, Finding, Rule, Severity};
use crate::catalog::{Catalog, ProtectionLevel};
use crate::id::{Dimension, RiskAreaRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskAreaStatus {
    Clean,
    WithDeviations,
}

/// Clean iff every criterion is met and no deviation is recorded. Deviations
/// never fail a risk area by themselves.
pub fn risk_area_status(oa: &OverallAssessmentRecord) -> RiskAreaStatus {
    let all_met = oa
        .criteria_status
        .values()
        .all(|s| *s == CriterionStatus::Met);
    let no_deviations = oa.deviations.iter().all(|d| d.trim().is_empty());
    if all_met && no_deviations {
        RiskAreaStatus::Clean
    } else {
        RiskAreaStatus::WithDeviations
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SummaryCheckError {
    #[error("dimension {0} has protection requirement low and is not examined")]
    NotExamined(Dimension),
    #[error("dimension {0} has no summary record")]
    SummaryMissing(Dimension),
    #[error("summary of {0} has no residual-risk class")]
    Unclassified(Dimension),
    #[error("summary of {dimension} declares negligible residual risk but does not account for deviations in {}", join(unreferenced))]
    Consistency {
        dimension: Dimension,
        unreferenced: Vec<RiskAreaRef>,
    },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Return the declared residual class of an examined dimension after
/// checking it against the dimension's overall assessments.
pub fn dimension_summary_check(
    doc: &AssessmentDocument,
    dimension: Dimension,
) -> Result<ResidualClass, SummaryCheckError> {
    if doc.level(dimension) == Some(ProtectionLevel::Low) {
        return Err(SummaryCheckError::NotExamined(dimension));
    }
    let summary = doc
        .summary_for(dimension)
        .ok_or(SummaryCheckError::SummaryMissing(dimension))?;
    let class = summary
        .residual_class
        .ok_or(SummaryCheckError::Unclassified(dimension))?;
    if class == ResidualClass::Negligible {
        let mut unreferenced: Vec<RiskAreaRef> = doc
            .overall
            .iter()
            .filter(|oa| oa.risk_area.dimension() == dimension)
            .filter(|oa| risk_area_status(oa) == RiskAreaStatus::WithDeviations)
            .map(|oa| oa.risk_area)
            .filter(|a| !summary.referenced_deviations.contains(a))
            .collect();
        if !unreferenced.is_empty() {
            unreferenced.sort();
            return Err(SummaryCheckError::Consistency {
                dimension,
                unreferenced,
            });
        }
    }
    Ok(class)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    NotTrustworthy,
    TrustworthyWithResiduals,
    Trustworthy,
    NotAssessable,
}

impl Outcome {
    /// Position in the order NotTrustworthy < TrustworthyWithResiduals <
    /// Trustworthy. `NotAssessable` is unranked.
    pub fn rank(self) -> Option<u8> {
        match self {
            Outcome::NotTrustworthy => Some(0),
            Outcome::TrustworthyWithResiduals => Some(1),
            Outcome::Trustworthy => Some(2),
            Outcome::NotAssessable => None,
        }
    }

    pub fn compare(self, other: Outcome) -> Option<Ordering> {
        Some(self.rank()?.cmp(&other.rank()?))
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::NotTrustworthy => "not trustworthy",
            Outcome::TrustworthyWithResiduals => {
                "trustworthy with accepted non-negligible residual risks"
            }
            Outcome::Trustworthy => "trustworthy",
            Outcome::NotAssessable => "not assessable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocking {
    pub dimension: Dimension,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptedResidual {
    pub dimension: Dimension,
    /// Index into the document's trade-off list.
    pub tradeoff: usize,
    pub counterpart: Dimension,
    pub prioritized: Dimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub blocking: Vec<Blocking>,
    pub accepted_residuals: Vec<AcceptedResidual>,
    pub notes: Vec<String>,
    pub narrative: String,
}

/// One dimension as seen by the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionInput {
    pub dimension: Dimension,
    pub level: ProtectionLevel,
    /// Declared residual class; `None` when no usable summary exists.
    pub class: Option<ResidualClass>,
}

/// The decision procedure over examined (medium or high) dimensions.
pub fn decide(dims: &[DimensionInput], tradeoffs: &[TradeoffRecord], signoff: bool) -> Verdict {
    let examined: Vec<&DimensionInput> = dims
        .iter()
        .filter(|d| d.level.requires_examination())
        .collect();
    let level_of = |d: Dimension| dims.iter().find(|i| i.dimension == d).map(|i| i.level);
    let mut verdict = Verdict {
        outcome: Outcome::Trustworthy,
        blocking: Vec::new(),
        accepted_residuals: Vec::new(),
        notes: Vec::new(),
        narrative: String::new(),
    };

    let unacceptable: Vec<Dimension> = examined
        .iter()
        .filter(|d| d.class == Some(ResidualClass::Unacceptable))
        .map(|d| d.dimension)
        .collect();
    if !unacceptable.is_empty() {
        verdict.outcome = Outcome::NotTrustworthy;
        verdict.blocking = unacceptable
            .iter()
            .map(|d| Blocking {
                dimension: *d,
                reason: "unacceptable residual risks".into(),
            })
            .collect();
        verdict.narrative = format!(
            "Not trustworthy: unacceptable residual risks remain in {}.",
            join(&unacceptable)
        );
        return verdict;
    }

    let unclassified: Vec<Dimension> = examined
        .iter()
        .filter(|d| d.class.is_none())
        .map(|d| d.dimension)
        .collect();
    if !unclassified.is_empty() {
        verdict.outcome = Outcome::NotAssessable;
        verdict.blocking = unclassified
            .iter()
            .map(|d| Blocking {
                dimension: *d,
                reason: "no residual-risk classification".into(),
            })
            .collect();
        verdict.narrative = format!(
            "Not assessable: no residual-risk classification for {}.",
            join(&unclassified)
        );
        return verdict;
    }

    let residual: Vec<Dimension> = examined
        .iter()
        .filter(|d| d.class == Some(ResidualClass::NonNegligibleAcceptable))
        .map(|d| d.dimension)
        .collect();
    if residual.is_empty() {
        verdict.narrative = if examined.is_empty() {
            "Trustworthy: no dimension has a medium or high protection requirement.".into()
        } else {
            "Trustworthy: every examined dimension reports negligible residual risks.".into()
        };
        return verdict;
    }

    for d in &residual {
        let covering: Vec<(usize, &TradeoffRecord)> = tradeoffs
            .iter()
            .enumerate()
            .filter(|(_, t)| t.involves(*d))
            .collect();
        match covering.first() {
            None => verdict.blocking.push(Blocking {
                dimension: *d,
                reason: "non-negligible residual risks without a documented trade-off".into(),
            }),
            Some((index, t)) => verdict.accepted_residuals.push(AcceptedResidual {
                dimension: *d,
                tradeoff: *index,
                counterpart: if t.dimension_a == *d {
                    t.dimension_b
                } else {
                    t.dimension_a
                },
                prioritized: t.prioritized,
            }),
        }
        for (_, t) in covering {
            if level_of(t.yielded()) == Some(ProtectionLevel::High)
                && level_of(t.prioritized) == Some(ProtectionLevel::Medium)
            {
                let note = format!(
                    "warning: trade-off between {} and {} prioritizes {} (medium) over {} (high); \
                     the justification must account for the protection requirements",
                    t.dimension_a,
                    t.dimension_b,
                    t.prioritized,
                    t.yielded()
                );
                if !verdict.notes.contains(&note) {
                    verdict.notes.push(note);
                }
            }
        }
    }
    if !signoff {
        verdict.blocking.push(Blocking {
            dimension: Dimension::CrossDimensional,
            reason: "accepted residual risks require a sign-off".into(),
        });
    }
    if verdict.blocking.is_empty() {
        verdict.outcome = Outcome::TrustworthyWithResiduals;
        verdict.narrative = format!(
            "Trustworthy despite non-negligible residual risks in {}, accepted through documented \
             trade-offs and signed off.",
            join(&residual)
        );
    } else {
        verdict.outcome = Outcome::NotTrustworthy;
        verdict.accepted_residuals.clear();
        verdict.narrative = format!(
            "Not trustworthy: non-negligible residual risks in {} are not fully justified.",
            join(&residual)
        );
    }
    verdict
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerdictError {
    #[error("document is not lint-clean ({} blocking finding(s))", .0.len())]
    PreconditionViolated(Vec<Finding>),
}

/// Findings that prevent a verdict: every Error and every open stub.
pub fn blocking_findings(findings: &[Finding]) -> Vec<Finding> {
    findings
        .iter()
        .filter(|f| f.severity == Severity::Error || f.rule == Rule::ResponseOpen)
        .cloned()
        .collect()
}

pub fn dimension_inputs(doc: &AssessmentDocument) -> Vec<DimensionInput> {
    Dimension::ASSESSED
        .iter()
        .filter_map(|d| {
            let level = doc.level(*d)?;
            let class = if level.requires_examination() {
                dimension_summary_check(doc, *d).ok()
            } else {
                None
            };
            Some(DimensionInput {
                dimension: *d,
                level,
                class,
            })
        })
        .collect()
}

/// Notes about conventions that shaped the verdict for this document.
pub fn document_notes(doc: &AssessmentDocument) -> Vec<String> {
    let mut notes = Vec::new();
    if functional_safety_exception(doc) {
        notes.push(
            "safety has protection requirement low, but measures intercepting errors at model \
             level are addressed; the whole functional-safety risk area (S-R-FS) was therefore \
             required"
                .to_owned(),
        );
    }
    for s in &doc.summaries {
        if doc.level(s.dimension) == Some(ProtectionLevel::Low) {
            notes.push(format!(
                "voluntary summary of {} (protection requirement low) does not enter the verdict",
                s.dimension
            ));
        }
    }
    notes
}

pub fn cross_dimensional_verdict(
    catalog: &Catalog,
    doc: &AssessmentDocument,
) -> Result<Verdict, VerdictError> {
    verdict_given_findings(doc, &lint(catalog, doc))
}

/// The verdict when `findings` (lint plus any binding-evaluation findings)
/// are already known.
pub fn verdict_given_findings(
    doc: &AssessmentDocument,
    findings: &[Finding],
) -> Result<Verdict, VerdictError> {
    let blocking = blocking_findings(findings);
    if !blocking.is_empty() {
        return Err(VerdictError::PreconditionViolated(blocking));
    }
    let mut verdict = decide(
        &dimension_inputs(doc),
        &doc.tradeoffs,
        doc.signoff.is_some(),
    );
    let mut notes = document_notes(doc);
    notes.append(&mut verdict.notes);
    verdict.notes = notes;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::AreaCode;
    use std::collections::BTreeMap;

    fn oa(statuses: &[CriterionStatus], deviations: &[&str]) -> OverallAssessmentRecord {
        let area = RiskAreaRef::new(Dimension::Fairness, AreaCode::FN).unwrap();
        OverallAssessmentRecord {
            risk_area: area,
            criteria_status: statuses
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    (
                        crate::id::CatalogId::risk_area(
                            Dimension::Fairness,
                            AreaCode::FN,
                            crate::id::Aspect::Criterion,
                            Some(i as u8 + 1),
                        )
                        .unwrap(),
                        *s,
                    )
                })
                .collect::<BTreeMap<_, _>>(),
            deviations: deviations.iter().map(|s| s.to_string()).collect(),
            conclusion: String::new(),
        }
    }

    #[test]
    fn area_status() {
        use CriterionStatus::*;
        assert_eq!(
            risk_area_status(&oa(&[Met, Met], &[])),
            RiskAreaStatus::Clean
        );
        assert_eq!(
            risk_area_status(&oa(&[Met, PartiallyMet], &["gap"])),
            RiskAreaStatus::WithDeviations
        );
    }

    fn input(d: Dimension, level: ProtectionLevel, c: ResidualClass) -> DimensionInput {
        DimensionInput {
            dimension: d,
            level,
            class: Some(c),
        }
    }

    fn tradeoff(a: Dimension, b: Dimension, p: Dimension) -> TradeoffRecord {
        TradeoffRecord {
            dimension_a: a,
            dimension_b: b,
            prioritized: p,
            justification: "j".into(),
        }
    }

    #[test]
    fn decision_examples() {
        use Dimension::*;
        use ProtectionLevel::*;
        use ResidualClass::*;
        let base = vec![
            input(Transparency, Medium, Negligible),
            input(SafetySecurity, High, Negligible),
        ];
        assert_eq!(decide(&base, &[], false).outcome, Outcome::Trustworthy);

        let mut bad = base.clone();
        bad[1].class = Some(Unacceptable);
        let v = decide(&bad, &[], true);
        assert_eq!(v.outcome, Outcome::NotTrustworthy);
        assert_eq!(v.blocking[0].dimension, SafetySecurity);

        let mut res = base.clone();
        res[0].class = Some(NonNegligibleAcceptable);
        let t = [tradeoff(Transparency, SafetySecurity, SafetySecurity)];
        let v = decide(&res, &t, true);
        assert_eq!(v.outcome, Outcome::TrustworthyWithResiduals);
        assert_eq!(v.accepted_residuals[0].dimension, Transparency);
        assert!(v.notes.is_empty());
        assert_eq!(decide(&res, &[], true).outcome, Outcome::NotTrustworthy);
        assert_eq!(decide(&res, &t, false).outcome, Outcome::NotTrustworthy);
    }

    #[test]
    fn prioritization_note() {
        use Dimension::*;
        use ProtectionLevel::*;
        use ResidualClass::*;
        let dims = [
            input(Transparency, Medium, NonNegligibleAcceptable),
            input(SafetySecurity, High, Negligible),
        ];
        let v = decide(
            &dims,
            &[tradeoff(Transparency, SafetySecurity, Transparency)],
            true,
        );
        assert_eq!(v.outcome, Outcome::TrustworthyWithResiduals);
        assert_eq!(v.notes.len(), 1);
    }

    #[test]
    fn low_dimensions_are_ignored() {
        use Dimension::*;
        use ProtectionLevel::*;
        use ResidualClass::*;
        let dims = [
            input(Transparency, Low, Unacceptable),
            input(SafetySecurity, High, Negligible),
        ];
        assert_eq!(decide(&dims, &[], false).outcome, Outcome::Trustworthy);
    }
}
