//! Catalog-driven trustworthiness assessment for AI applications.
//!
//! The crate models the assessment catalog as data, computes which catalog
//! items an assessment must address given its protection levels, lints
//! assessor-authored documents, evaluates quantitative criteria against
//! prediction datasets, derives the cross-dimensional verdict and renders
//! the technical documentation report.

pub mod assessment;
pub mod catalog;
pub mod id;
pub mod metrics;
pub mod report;
pub mod verdict;

pub use assessment::{coverage, lint, parse_document, required_items, AssessmentDocument, Finding};
pub use catalog::{load_catalog, lookup, validate_catalog, Catalog, CatalogDefect, CatalogItem};
pub use id::{format_id, order_ids, parse_id, CatalogId, Dimension};
pub use verdict::{cross_dimensional_verdict, Outcome, Verdict};
