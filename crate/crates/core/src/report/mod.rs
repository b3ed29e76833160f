//! Report model, document scaffolding, binding evaluation and rendering.

mod bindings;
mod scaffold;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use bindings::{evaluate_bindings, DatasetSource};
pub use scaffold::{parse_levels, scaffold, ScaffoldError};

use crate::assessment::coverage::{coverage, Counts, CoverageReport};
use crate::assessment::document::{AssessmentDocument, Meta, ResidualClass, ResponseStatus};
use crate::assessment::gating::{levels_of, required_for_levels};
use crate::assessment::lint::{lint, sort_findings, Finding, Severity};
use crate::catalog::{Catalog, CatalogItem, ProtectionLevel, RequirementType};
use crate::id::{CatalogId, Dimension, RiskAreaRef};
use crate::verdict::{
    document_notes, risk_area_status, verdict_given_findings, AcceptedResidual, Blocking, Outcome,
    RiskAreaStatus, Verdict, VerdictError,
};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub metric: String,
    pub dataset: String,
    pub measured: Option<f64>,
    pub target: String,
    /// Whether the measured value lies in the target interval.
    pub within_target: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemRow {
    pub id: CatalogId,
    pub title: String,
    pub status: String,
    pub evidence: Vec<RequirementType>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<MetricRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaSection {
    pub area: RiskAreaRef,
    pub name: String,
    /// `None` when the document has no overall assessment for the area.
    pub status: Option<RiskAreaStatus>,
    pub items: Vec<ItemRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryBlock {
    pub residual_class: Option<ResidualClass>,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSection {
    pub dimension: Dimension,
    pub name: String,
    pub level: Option<ProtectionLevel>,
    pub justification: String,
    /// Protection analysis and summary items.
    pub items: Vec<ItemRow>,
    pub areas: Vec<AreaSection>,
    pub summary: Option<SummaryBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictBlock {
    /// `None` when the document does not meet the verdict precondition.
    pub outcome: Option<Outcome>,
    pub blocking: Vec<Blocking>,
    pub accepted_residuals: Vec<AcceptedResidual>,
    pub notes: Vec<String>,
    pub narrative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine_version: String,
    pub catalog_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<String>,
    pub meta: Meta,
    pub profile: Vec<ItemRow>,
    pub dimensions: Vec<DimensionSection>,
    pub cross_dimensional: Vec<ItemRow>,
    pub findings: Vec<Finding>,
    pub coverage: CoverageReport,
    pub verdict: VerdictBlock,
}

fn status_text(doc: &AssessmentDocument, id: &CatalogId) -> String {
    let profile_answered = doc.profile.get(id).is_some_and(|a| !a.trim().is_empty());
    match doc.response(id).map(|r| &r.status) {
        Some(ResponseStatus::Addressed) => "addressed".into(),
        Some(ResponseStatus::ByReference(t)) => format!("by reference to {t}"),
        Some(ResponseStatus::NotApplicable(_)) => "not applicable".into(),
        _ if profile_answered => "answered".into(),
        Some(ResponseStatus::Open) => "open".into(),
        None => "missing".into(),
    }
}

fn item_row(doc: &AssessmentDocument, item: &CatalogItem) -> ItemRow {
    let response = doc.response(&item.id);
    let mut evidence: Vec<RequirementType> = response
        .map(|r| r.evidence.iter().map(|e| e.kind).collect())
        .unwrap_or_default();
    evidence.sort_by_key(|k| k.code());
    evidence.dedup();
    let metrics = response
        .map(|r| {
            r.bindings
                .iter()
                .map(|b| MetricRow {
                    metric: b.metric.clone(),
                    dataset: b.dataset.clone(),
                    measured: b.measured,
                    target: b.target.to_string(),
                    within_target: b.measured.map(|v| b.target.contains(v)),
                })
                .collect()
        })
        .unwrap_or_default();
    ItemRow {
        id: item.id,
        title: item.title.clone(),
        status: status_text(doc, &item.id),
        evidence,
        metrics,
    }
}

/// Assemble the report. `findings` should hold lint findings and any
/// binding-evaluation findings.
pub fn build_report(
    catalog: &Catalog,
    doc: &AssessmentDocument,
    findings: &[Finding],
    verdict: &Result<Verdict, VerdictError>,
    date: Option<&str>,
) -> Report {
    let mut levels = levels_of(doc);
    for d in Dimension::ASSESSED {
        levels.entry(d).or_insert(ProtectionLevel::High);
    }
    let interception = crate::assessment::gating::interception_addressed_in(doc);
    let required = required_for_levels(catalog, &levels, interception).expect("levels complete");
    let rows = |items: &mut dyn Iterator<Item = &CatalogItem>| -> Vec<ItemRow> {
        items
            .filter(|i| required.contains(&i.id))
            .map(|i| item_row(doc, i))
            .collect()
    };

    let dimensions = catalog
        .dimensions
        .iter()
        .map(|spec| {
            let areas = spec
                .risk_areas
                .iter()
                .filter_map(|a| {
                    let area = RiskAreaRef::new(spec.code, a.code).expect("catalog area");
                    let items = rows(&mut a.items.iter());
                    (!items.is_empty()).then(|| AreaSection {
                        area,
                        name: a.name.clone(),
                        status: doc.overall_for(area).map(risk_area_status),
                        items,
                    })
                })
                .collect();
            let examined = doc
                .level(spec.code)
                .is_none_or(|l| l.requires_examination());
            DimensionSection {
                dimension: spec.code,
                name: spec.name.clone(),
                level: doc.level(spec.code),
                justification: doc
                    .protection
                    .get(&spec.code)
                    .map(|p| p.justification.clone())
                    .unwrap_or_default(),
                items: rows(&mut [&spec.protection_item, &spec.summary].into_iter()),
                areas,
                summary: doc
                    .summary_for(spec.code)
                    .filter(|_| examined)
                    .map(|s| SummaryBlock {
                        residual_class: s.residual_class,
                        rationale: s.rationale.clone(),
                    }),
            }
        })
        .collect();

    let verdict = match verdict {
        Ok(v) => VerdictBlock {
            outcome: Some(v.outcome),
            blocking: v.blocking.clone(),
            accepted_residuals: v.accepted_residuals.clone(),
            notes: v.notes.clone(),
            narrative: v.narrative.clone(),
        },
        Err(VerdictError::PreconditionViolated(blocking)) => VerdictBlock {
            outcome: None,
            blocking: Vec::new(),
            accepted_residuals: Vec::new(),
            notes: document_notes(doc),
            narrative: format!(
                "No verdict: {} finding(s) must be resolved first (errors or open stubs).",
                blocking.len()
            ),
        },
    };

    Report {
        engine_version: ENGINE_VERSION.to_owned(),
        catalog_version: catalog.version.clone(),
        generated: date.map(str::to_owned),
        meta: doc.meta.clone(),
        profile: rows(&mut catalog.profile.iter()),
        dimensions,
        cross_dimensional: rows(&mut std::iter::once(&catalog.at)),
        findings: findings.to_vec(),
        coverage: coverage(catalog, doc),
        verdict,
    }
}

/// A document after binding evaluation, lint and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessed {
    pub document: AssessmentDocument,
    pub findings: Vec<Finding>,
    pub verdict: Result<Verdict, VerdictError>,
}

/// Evaluate bindings when `sources` is given, then lint and decide.
pub fn assess(
    catalog: &Catalog,
    doc: &AssessmentDocument,
    sources: Option<&BTreeMap<String, DatasetSource>>,
) -> Assessed {
    let (document, mut findings) = match sources {
        Some(s) => evaluate_bindings(doc, s),
        None => (doc.clone(), Vec::new()),
    };
    findings.extend(lint(catalog, &document));
    sort_findings(&mut findings);
    findings.dedup();
    let verdict = verdict_given_findings(&document, &findings);
    Assessed {
        document,
        findings,
        verdict,
    }
}

pub fn render_report(
    catalog: &Catalog,
    doc: &AssessmentDocument,
    findings: &[Finding],
    verdict: &Result<Verdict, VerdictError>,
    format: Format,
    date: Option<&str>,
) -> String {
    let report = build_report(catalog, doc, findings, verdict, date);
    match format {
        Format::Markdown => render_markdown(&report),
        Format::Json => render_json(&report),
    }
}

pub fn render_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// Table-cell safe text.
fn cell(text: &str) -> String {
    let flat = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if flat.is_empty() {
        "-".into()
    } else {
        flat.replace('|', "\\|")
    }
}

fn counts_row(out: &mut String, label: &str, c: &Counts) {
    let _ = writeln!(
        out,
        "| {label} | {} | {} | {} | {} | {} | {:.1}% |",
        c.required,
        c.addressed,
        c.by_reference,
        c.not_applicable,
        c.missing,
        c.percent()
    );
}

fn item_table(out: &mut String, rows: &[ItemRow]) {
    out.push_str("| Id | Title | Status | Evidence | Metrics |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in rows {
        let evidence = if r.evidence.is_empty() {
            "-".to_owned()
        } else {
            r.evidence
                .iter()
                .map(|k| k.code())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let metrics = if r.metrics.is_empty() {
            "-".to_owned()
        } else {
            r.metrics
                .iter()
                .map(|m| {
                    let value = m
                        .measured
                        .map_or("not evaluated".to_owned(), |v| format!("{v:.4}"));
                    let mark = match m.within_target {
                        Some(true) => "within",
                        Some(false) => "outside",
                        None => "vs",
                    };
                    format!("{} = {value} ({mark} {})", m.metric, m.target)
                })
                .collect::<Vec<_>>()
                .join("; ")
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.id,
            cell(&r.title),
            cell(&r.status),
            evidence,
            cell(&metrics)
        );
    }
    out.push('\n');
}

pub fn render_markdown(r: &Report) -> String {
    let mut out = String::new();
    let title = if r.meta.name.is_empty() {
        "(unnamed application)"
    } else {
        &r.meta.name
    };
    let _ = writeln!(out, "# Assessment report: {}\n", cell(title));
    out.push_str("| Field | Value |\n|---|---|\n");
    for (k, v) in [
        ("Version", r.meta.version.as_str()),
        ("Assessor", r.meta.assessor.as_str()),
        ("Date", r.meta.date.as_str()),
        ("Catalog version", r.catalog_version.as_str()),
        ("Engine version", r.engine_version.as_str()),
    ] {
        let _ = writeln!(out, "| {k} | {} |", cell(v));
    }
    if let Some(g) = &r.generated {
        let _ = writeln!(out, "| Generated | {} |", cell(g));
    }
    out.push('\n');

    out.push_str(
        "## Protection requirements\n\n| Dimension | Level | Justification |\n|---|---|---|\n",
    );
    for d in &r.dimensions {
        let _ = writeln!(
            out,
            "| {} {} | {} | {} |",
            d.dimension,
            cell(&d.name),
            d.level.map_or("missing".to_owned(), |l| l.to_string()),
            cell(&d.justification)
        );
    }
    out.push('\n');

    out.push_str("## Verdict\n\n");
    let outcome = r
        .verdict
        .outcome
        .map_or("no verdict".to_owned(), |o| o.label().to_owned());
    let _ = writeln!(out, "**Outcome:** {outcome}\n");
    let _ = writeln!(out, "{}\n", r.verdict.narrative);
    if !r.verdict.blocking.is_empty() {
        out.push_str("Blocking:\n\n");
        for b in &r.verdict.blocking {
            let _ = writeln!(out, "- {}: {}", b.dimension, b.reason);
        }
        out.push('\n');
    }
    if !r.verdict.accepted_residuals.is_empty() {
        out.push_str("Accepted residual risks:\n\n");
        for a in &r.verdict.accepted_residuals {
            let _ = writeln!(
                out,
                "- {}: trade-off #{} with {} ({} prioritized)",
                a.dimension,
                a.tradeoff + 1,
                a.counterpart,
                a.prioritized
            );
        }
        out.push('\n');
    }
    if !r.verdict.notes.is_empty() {
        out.push_str("Notes:\n\n");
        for n in &r.verdict.notes {
            let _ = writeln!(out, "- {n}");
        }
        out.push('\n');
    }

    out.push_str("## Coverage\n\n");
    out.push_str(
        "| Section | Required | Addressed | By reference | Not applicable | Missing | Coverage |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|\n");
    counts_row(&mut out, "PF", &r.coverage.profile);
    for d in &r.coverage.dimensions {
        counts_row(&mut out, d.dimension.code(), &d.counts);
    }
    counts_row(&mut out, "AT", &r.coverage.cross_dimensional);
    counts_row(&mut out, "Total", &r.coverage.total);
    out.push('\n');

    out.push_str("## Findings\n\n");
    if r.findings.is_empty() {
        out.push_str("No findings.\n\n");
    } else {
        let errors = r
            .findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count();
        let _ = writeln!(
            out,
            "{errors} error(s), {} warning(s).\n",
            r.findings.len() - errors
        );
        out.push_str("| Severity | Rule | Item | Message |\n|---|---|---|---|\n");
        for f in &r.findings {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                f.severity,
                f.rule,
                f.item,
                cell(&f.message)
            );
        }
        out.push('\n');
    }

    out.push_str("## PF: AI profile\n\n");
    item_table(&mut out, &r.profile);

    for d in &r.dimensions {
        let level = d.level.map_or("missing".to_owned(), |l| l.to_string());
        let _ = writeln!(
            out,
            "## {}: {} (protection requirement {level})\n",
            d.dimension,
            cell(&d.name)
        );
        item_table(&mut out, &d.items);
        if d.level == Some(ProtectionLevel::Low) {
            if d.areas.is_empty() {
                out.push_str("Protection requirement low: risk areas not examined.\n\n");
            } else {
                out.push_str(
                    "Protection requirement low: risk areas not examined except those below.\n\n",
                );
            }
        }
        for a in &d.areas {
            let status = match a.status {
                Some(RiskAreaStatus::Clean) => "clean",
                Some(RiskAreaStatus::WithDeviations) => "with deviations",
                None => "no overall assessment",
            };
            let _ = writeln!(out, "### {}: {} ({status})\n", a.area, cell(&a.name));
            item_table(&mut out, &a.items);
        }
        if let Some(s) = &d.summary {
            let class = s.residual_class.map_or("not classified", |c| c.label());
            let _ = writeln!(out, "Residual risk: **{class}**. {}\n", cell(&s.rationale));
        }
    }

    out.push_str("## AT: Cross-dimensional assessment\n\n");
    item_table(&mut out, &r.cross_dimensional);
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}
