//! Assessment documents: parsing, required-item gating, linting and coverage.

pub mod coverage;
pub mod document;
pub mod gating;
pub mod lint;

pub use coverage::{coverage, AreaCoverage, Counts, CoverageReport, DimensionCoverage};
pub use document::{
    parse_document, AssessmentDocument, CriterionStatus, DimensionSummaryRecord, DocumentError,
    Evidence, ItemResponse, Meta, MetricBinding, OverallAssessmentRecord, ProtectionEntry,
    ResidualClass, ResponseStatus, Signoff, TradeoffRecord,
};
pub use gating::{
    functional_safety_exception, levels_of, required_for_levels, required_items, GatingError,
};
pub use lint::{has_errors, lint, sort_findings, Finding, Rule, Severity};
