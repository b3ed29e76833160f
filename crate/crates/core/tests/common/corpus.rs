//! The committed credit-scoring corpus: document, datasets, golden reports
//! and single-mutation variants.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use serde::Deserialize;
use trustcat::report::{assess, render_report, Assessed, DatasetSource, Format};
use trustcat::verdict::Outcome;
use trustcat::{parse_document, AssessmentDocument, Catalog};

pub const DOCUMENT: &str = "credit-scoring.assessment.json";

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read(rel: &str) -> String {
    let path = dir().join(rel);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn document(rel: &str) -> AssessmentDocument {
    parse_document(&read(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Every dataset under `data/`, named by file stem.
pub fn sources() -> BTreeMap<String, DatasetSource> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir().join("data")).expect("corpus data directory") {
        let path = entry.expect("directory entry").path();
        if path.extension().is_some_and(|e| e == "csv") {
            let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
            out.insert(stem, DatasetSource::Path(path));
        }
    }
    out
}

pub fn assess_file(catalog: &Catalog, rel: &str) -> Assessed {
    assess(catalog, &document(rel), Some(&sources()))
}

/// The committed document lints clean, re-evaluates to its recorded
/// measured values, yields trustworthy-with-residuals and renders the
/// golden reports byte for byte.
pub fn check_golden(catalog: &Catalog) -> Result<(), String> {
    let committed = document(DOCUMENT);
    let a = assess(catalog, &committed, Some(&sources()));
    if !a.findings.is_empty() {
        let list: Vec<String> = a.findings.iter().map(ToString::to_string).collect();
        return Err(format!("corpus findings: {}", list.join("; ")));
    }
    let mut evaluated = 0;
    for (before, after) in committed.responses.iter().zip(&a.document.responses) {
        for (b0, b1) in before.bindings.iter().zip(&after.bindings) {
            if b1.measured.is_none() || b0.measured != b1.measured {
                return Err(format!(
                    "{} {}: recorded {:?}, evaluated {:?}",
                    before.item, b0.metric, b0.measured, b1.measured
                ));
            }
            evaluated += 1;
        }
    }
    if evaluated == 0 {
        return Err("corpus has no metric bindings".into());
    }
    match &a.verdict {
        Ok(v) if v.outcome == Outcome::TrustworthyWithResiduals => {}
        other => return Err(format!("unexpected verdict {other:?}")),
    }
    for (format, file) in [
        (Format::Markdown, "golden/credit-scoring.report.md"),
        (Format::Json, "golden/credit-scoring.report.json"),
    ] {
        let rendered = render_report(catalog, &a.document, &a.findings, &a.verdict, format, None);
        if rendered != read(file) {
            return Err(format!("{file} differs from the rendered report"));
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
pub struct Expectation {
    pub file: String,
    pub change: String,
    pub finding: Option<ExpectedFinding>,
    pub verdict: Option<Outcome>,
}

#[derive(Debug, Deserialize)]
pub struct ExpectedFinding {
    pub rule: String,
    pub item: String,
}

pub fn expectations() -> Vec<Expectation> {
    serde_json::from_str(&read("mutations/expected.json")).expect("mutation manifest")
}

/// Each variant yields exactly its intended finding, or no finding and
/// its intended verdict. Returns the number of variants checked.
pub fn check_mutations(catalog: &Catalog) -> Result<usize, String> {
    let list = expectations();
    for e in &list {
        let a = assess_file(catalog, &format!("mutations/{}", e.file));
        let found: Vec<String> = a.findings.iter().map(ToString::to_string).collect();
        match (&e.finding, e.verdict) {
            (Some(f), None) => {
                let ok = a.findings.len() == 1
                    && a.findings[0].rule.code() == f.rule
                    && a.findings[0].item.to_string() == f.item;
                if !ok {
                    return Err(format!(
                        "{}: expected only {} on {}, got [{}]",
                        e.file,
                        f.rule,
                        f.item,
                        found.join("; ")
                    ));
                }
            }
            (None, Some(outcome)) => {
                if !a.findings.is_empty() {
                    return Err(format!(
                        "{}: unexpected findings [{}]",
                        e.file,
                        found.join("; ")
                    ));
                }
                match &a.verdict {
                    Ok(v) if v.outcome == outcome => {}
                    other => {
                        return Err(format!("{}: expected {outcome:?}, got {other:?}", e.file))
                    }
                }
            }
            _ => {
                return Err(format!(
                    "{}: manifest entry needs a finding or a verdict",
                    e.file
                ))
            }
        }
    }
    Ok(list.len())
}
