//! Per-dimension and per-risk-area response counts over required items.

use std::collections::BTreeSet;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use super::document::{AssessmentDocument, ResponseStatus};
use super::gating::{interception_addressed_in, levels_of, required_for_levels};
use crate::catalog::{Catalog, ProtectionLevel};
use crate::id::{CatalogId, Dimension, RiskAreaRef};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub required: usize,
    pub addressed: usize,
    pub by_reference: usize,
    pub not_applicable: usize,
    pub missing: usize,
}

impl Counts {
    /// Share of required items that are not missing, in percent.
    pub fn percent(&self) -> f64 {
        if self.required == 0 {
            100.0
        } else {
            100.0 * (self.required - self.missing) as f64 / self.required as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        self.missing == 0
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.required += o.required;
        self.addressed += o.addressed;
        self.by_reference += o.by_reference;
        self.not_applicable += o.not_applicable;
        self.missing += o.missing;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaCoverage {
    pub area: RiskAreaRef,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionCoverage {
    pub dimension: Dimension,
    pub level: Option<ProtectionLevel>,
    pub counts: Counts,
    pub areas: Vec<AreaCoverage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub profile: Counts,
    pub dimensions: Vec<DimensionCoverage>,
    pub cross_dimensional: Counts,
    pub total: Counts,
}

impl CoverageReport {
    pub fn dimension(&self, d: Dimension) -> Option<&DimensionCoverage> {
        self.dimensions.iter().find(|c| c.dimension == d)
    }
}

fn tally(doc: &AssessmentDocument, required: &BTreeSet<CatalogId>, ids: &[CatalogId]) -> Counts {
    let mut c = Counts::default();
    for id in ids.iter().filter(|i| required.contains(i)) {
        c.required += 1;
        let profile_answered = doc.profile.get(id).is_some_and(|a| !a.trim().is_empty());
        match doc.response(id).map(|r| &r.status) {
            Some(ResponseStatus::Addressed) => c.addressed += 1,
            Some(ResponseStatus::ByReference(_)) => c.by_reference += 1,
            Some(ResponseStatus::NotApplicable(_)) => c.not_applicable += 1,
            _ if profile_answered => c.addressed += 1,
            Some(ResponseStatus::Open) | None => c.missing += 1,
        }
    }
    c
}

/// Coverage of required items. Dimensions without a protection entry are
/// counted as if their level were high.
pub fn coverage(catalog: &Catalog, doc: &AssessmentDocument) -> CoverageReport {
    let mut levels = levels_of(doc);
    for d in Dimension::ASSESSED {
        levels.entry(d).or_insert(ProtectionLevel::High);
    }
    let required = required_for_levels(catalog, &levels, interception_addressed_in(doc))
        .expect("every dimension has a level");

    let profile_ids: Vec<CatalogId> = catalog.profile.iter().map(|i| i.id).collect();
    let profile = tally(doc, &required, &profile_ids);
    let cross_dimensional = tally(doc, &required, &[catalog.at.id]);
    let mut total = profile;
    total += cross_dimensional;

    let mut dimensions = Vec::new();
    for spec in &catalog.dimensions {
        let mut counts = tally(doc, &required, &[spec.protection_item.id, spec.summary.id]);
        let mut areas = Vec::new();
        for a in &spec.risk_areas {
            let ids: Vec<CatalogId> = a.items.iter().map(|i| i.id).collect();
            let c = tally(doc, &required, &ids);
            counts += c;
            areas.push(AreaCoverage {
                area: RiskAreaRef::new(spec.code, a.code).expect("catalog area"),
                counts: c,
            });
        }
        total += counts;
        dimensions.push(DimensionCoverage {
            dimension: spec.code,
            level: doc.level(spec.code),
            counts,
            areas,
        });
    }
    CoverageReport {
        profile,
        dimensions,
        cross_dimensional,
        total,
    }
}
