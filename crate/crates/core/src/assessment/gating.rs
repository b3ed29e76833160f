//! Which catalog items an assessment has to address.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::document::{is_model_level_interception_measure, AssessmentDocument, ResponseStatus};
use crate::catalog::{Catalog, ProtectionLevel};
use crate::id::{AreaCode, CatalogId, Dimension};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatingError {
    #[error("no protection requirement given for dimension {0}")]
    MissingProtectionEntry(Dimension),
}

/// True if the document triggers the functional-safety exception: safety
/// is at level low but a measure intercepting errors at model level is
/// addressed, so the functional-safety risk area must be examined anyway.
pub fn functional_safety_exception(doc: &AssessmentDocument) -> bool {
    doc.level(Dimension::SafetySecurity) == Some(ProtectionLevel::Low)
        && interception_addressed_in(doc)
}

pub(crate) fn interception_addressed_in(doc: &AssessmentDocument) -> bool {
    doc.responses.iter().any(|r| {
        is_model_level_interception_measure(&r.item) && r.status == ResponseStatus::Addressed
    })
}

/// Required items for explicit levels. `interception_addressed` states
/// whether any model-level interception measure is addressed.
pub fn required_for_levels(
    catalog: &Catalog,
    levels: &BTreeMap<Dimension, ProtectionLevel>,
    interception_addressed: bool,
) -> Result<BTreeSet<CatalogId>, GatingError> {
    let mut out: BTreeSet<CatalogId> = catalog.profile.iter().map(|i| i.id).collect();
    for spec in &catalog.dimensions {
        let level = *levels
            .get(&spec.code)
            .ok_or(GatingError::MissingProtectionEntry(spec.code))?;
        out.insert(spec.protection_item.id);
        if level.requires_examination() {
            out.extend(
                spec.risk_areas
                    .iter()
                    .flat_map(|a| a.items.iter().map(|i| i.id)),
            );
            out.insert(spec.summary.id);
        } else if spec.code == Dimension::SafetySecurity && interception_addressed {
            if let Some(fs) = spec.risk_area(AreaCode::FS) {
                out.extend(fs.items.iter().map(|i| i.id));
            }
        }
    }
    out.insert(catalog.at.id);
    Ok(out)
}

pub fn levels_of(doc: &AssessmentDocument) -> BTreeMap<Dimension, ProtectionLevel> {
    doc.protection.iter().map(|(d, p)| (*d, p.level)).collect()
}

/// Items the document must address given its protection levels.
pub fn required_items(
    catalog: &Catalog,
    doc: &AssessmentDocument,
) -> Result<BTreeSet<CatalogId>, GatingError> {
    required_for_levels(catalog, &levels_of(doc), interception_addressed_in(doc))
}
