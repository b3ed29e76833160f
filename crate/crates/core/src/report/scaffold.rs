use std::collections::BTreeMap;

use thiserror::Error;

use crate::assessment::document::{
    AssessmentDocument, DimensionSummaryRecord, ItemResponse, Meta, OverallAssessmentRecord,
    ProtectionEntry,
};
use crate::assessment::gating::required_for_levels;
use crate::catalog::{Catalog, ProtectionLevel};
use crate::id::{Dimension, RiskAreaRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaffoldError {
    #[error("invariant violation: protection requirement of {0} cannot be {1}")]
    InvariantViolation(Dimension, ProtectionLevel),
    #[error("no protection requirement given for {0}")]
    MissingLevel(Dimension),
    #[error("{0} is not an assessed dimension")]
    NotAssessed(Dimension),
}

/// Build a document skeleton: protection entries, one open stub per
/// required item and empty overall-assessment and summary records for the
/// examined dimensions.
pub fn scaffold(
    catalog: &Catalog,
    levels: &BTreeMap<Dimension, ProtectionLevel>,
) -> Result<AssessmentDocument, ScaffoldError> {
    for (d, level) in levels {
        if !Dimension::ASSESSED.contains(d) {
            return Err(ScaffoldError::NotAssessed(*d));
        }
        if !ProtectionLevel::allowed_for(*d).contains(level) {
            return Err(ScaffoldError::InvariantViolation(*d, *level));
        }
    }
    if let Some(d) = Dimension::ASSESSED.iter().find(|d| !levels.contains_key(d)) {
        return Err(ScaffoldError::MissingLevel(*d));
    }
    let required = required_for_levels(catalog, levels, false).expect("levels complete");

    let mut overall = Vec::new();
    let mut summaries = Vec::new();
    for spec in &catalog.dimensions {
        if !levels[&spec.code].requires_examination() {
            continue;
        }
        for area in &spec.risk_areas {
            overall.push(OverallAssessmentRecord {
                risk_area: RiskAreaRef::new(spec.code, area.code).expect("catalog area"),
                criteria_status: BTreeMap::new(),
                deviations: Vec::new(),
                conclusion: String::new(),
            });
        }
        summaries.push(DimensionSummaryRecord {
            dimension: spec.code,
            residual_class: None,
            rationale: String::new(),
            referenced_deviations: Vec::new(),
            cross_dimension_effects: Vec::new(),
        });
    }

    Ok(AssessmentDocument {
        meta: Meta {
            catalog_version: Some(catalog.version.clone()),
            ..Meta::default()
        },
        profile: catalog
            .profile
            .iter()
            .map(|i| (i.id, String::new()))
            .collect(),
        protection: levels
            .iter()
            .map(|(d, l)| {
                (
                    *d,
                    ProtectionEntry {
                        level: *l,
                        justification: String::new(),
                    },
                )
            })
            .collect(),
        responses: required.into_iter().map(ItemResponse::stub).collect(),
        overall,
        summaries,
        tradeoffs: Vec::new(),
        signoff: None,
    })
}

/// Parse `FN=high,AC=medium,...`.
pub fn parse_levels(text: &str) -> Result<BTreeMap<Dimension, ProtectionLevel>, String> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (d, l) = part
            .split_once('=')
            .ok_or_else(|| format!("expected DIM=LEVEL, got `{part}`"))?;
        let d: Dimension = d.trim().parse().map_err(|e| format!("{e}"))?;
        let l: ProtectionLevel = l.parse()?;
        if out.insert(d, l).is_some() {
            return Err(format!("level for {d} given twice"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assessment::lint::{lint, Rule, Severity};

    #[test]
    fn all_high_stubs_every_item() {
        let c = Catalog::shipped();
        let levels = parse_levels("FN=high,AC=high,TR=high,RE=high,S=high,DP=high").unwrap();
        let doc = scaffold(&c, &levels).unwrap();
        assert_eq!(doc.responses.len(), c.items().count());
        let findings = lint(&c, &doc);
        assert!(
            findings.iter().all(|f| f.severity == Severity::Warning),
            "{findings:?}"
        );
        assert!(findings.iter().all(|f| f.rule == Rule::ResponseOpen));
    }

    #[test]
    fn reliability_only() {
        let c = Catalog::shipped();
        let levels = parse_levels("FN=low,AC=low,TR=low,RE=medium,S=low,DP=low").unwrap();
        let doc = scaffold(&c, &levels).unwrap();
        for r in &doc.responses {
            let d = r.item.dimension();
            assert!(
                matches!(
                    d,
                    Dimension::Profile | Dimension::Reliability | Dimension::CrossDimensional
                ) || r.item.category() == crate::id::Category::Protection,
                "{}",
                r.item
            );
        }
        assert_eq!(doc.summaries.len(), 1);
    }

    #[test]
    fn reliability_low_rejected() {
        let c = Catalog::shipped();
        let levels = parse_levels("FN=low,AC=low,TR=low,RE=low,S=low,DP=low").unwrap();
        assert!(matches!(
            scaffold(&c, &levels),
            Err(ScaffoldError::InvariantViolation(..))
        ));
        assert!(parse_levels("FN=extreme").is_err());
        assert!(parse_levels("FN").is_err());
    }
}
