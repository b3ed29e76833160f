use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use trustcat::assessment::lint::{has_errors, Finding};
use trustcat::catalog::{from_json_str, validate_catalog};
use trustcat::report::{assess, parse_levels, render_report, scaffold, DatasetSource, Format};
use trustcat::verdict::{Outcome, Verdict, VerdictError};
use trustcat::{parse_document, AssessmentDocument, Catalog};

const EXIT_CLEAN: u8 = 0;
const EXIT_LINT: u8 = 1;
const EXIT_NOT_TRUSTWORTHY: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "trustcat",
    version,
    about = "Catalog-driven trustworthiness assessment of AI applications"
)]
struct Cli {
    /// Catalog file to use instead of the bundled one.
    #[arg(long, env = "TRUSTCAT_CATALOG", global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Work with assessment documents.
    #[command(subcommand)]
    Assess(AssessCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Check a catalog for structural defects.
    Validate { file: Option<PathBuf> },
    /// Print one catalog item.
    Show {
        id: String,
        /// Print the item as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum AssessCommand {
    /// Write a document skeleton for the given protection requirements.
    Init {
        /// e.g. FN=high,AC=medium,TR=medium,RE=high,S=low,DP=high
        #[arg(long)]
        levels: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a document against the catalog.
    Lint {
        doc: PathBuf,
        /// Dataset for metric bindings, as NAME=FILE.
        #[arg(long = "data", value_name = "NAME=FILE")]
        data: Vec<String>,
    },
    /// Fill measured values of metric bindings from datasets.
    Metrics {
        doc: PathBuf,
        #[arg(long = "data", value_name = "NAME=FILE")]
        data: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive the cross-dimensional verdict.
    Verdict {
        doc: PathBuf,
        #[arg(long = "data", value_name = "NAME=FILE")]
        data: Vec<String>,
    },
    /// Render the documentation report.
    Report {
        doc: PathBuf,
        #[arg(long, default_value = "md")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Generation date to embed (omitted when not given).
        #[arg(long)]
        date: Option<String>,
        #[arg(long = "data", value_name = "NAME=FILE")]
        data: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_CLEAN
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Catalog(CatalogCommand::Validate { file }) => {
            let path = file.or(cli.catalog);
            let catalog = load_catalog(path.as_deref())?;
            let defects = validate_catalog(&catalog);
            for d in &defects {
                eprintln!("{d}");
            }
            let name = path.map_or("bundled catalog".to_owned(), |p| p.display().to_string());
            eprintln!(
                "{name}: version {}, {} items, {} defect(s)",
                catalog.version,
                catalog.items().count(),
                defects.len()
            );
            Ok(if defects.is_empty() {
                EXIT_CLEAN
            } else {
                EXIT_LINT
            })
        }
        Command::Catalog(CatalogCommand::Show { id, json }) => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            let item = catalog.find(&id)?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(item)?;
                s.push('\n');
                s
            } else {
                show_item(item)
            };
            emit(None, &text)?;
            Ok(EXIT_CLEAN)
        }
        Command::Assess(cmd) => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            assess_command(&catalog, cmd)
        }
    }
}

fn assess_command(catalog: &Catalog, cmd: AssessCommand) -> Result<u8> {
    match cmd {
        AssessCommand::Init { levels, output } => {
            let levels = parse_levels(&levels).map_err(|e| anyhow!(e))?;
            let doc = scaffold(catalog, &levels)?;
            emit(output.as_deref(), &doc.to_json())?;
            eprintln!("{} response stub(s) written", doc.responses.len());
            Ok(EXIT_CLEAN)
        }
        AssessCommand::Lint { doc, data } => {
            let doc = load_document(&doc)?;
            let sources = parse_sources(&data)?;
            let assessed = assess(catalog, &doc, sources.as_ref());
            print_findings(&assessed.findings);
            Ok(if has_errors(&assessed.findings) {
                EXIT_LINT
            } else {
                EXIT_CLEAN
            })
        }
        AssessCommand::Metrics { doc, data, output } => {
            let doc = load_document(&doc)?;
            let sources = parse_sources(&data)?.unwrap_or_default();
            let (filled, findings) = trustcat::report::evaluate_bindings(&doc, &sources);
            print_findings(&findings);
            emit(output.as_deref(), &filled.to_json())?;
            Ok(if has_errors(&findings) {
                EXIT_LINT
            } else {
                EXIT_CLEAN
            })
        }
        AssessCommand::Verdict { doc, data } => {
            let doc = load_document(&doc)?;
            let sources = parse_sources(&data)?;
            let assessed = assess(catalog, &doc, sources.as_ref());
            let code = verdict_exit(&assessed.verdict);
            match &assessed.verdict {
                Ok(v) => {
                    let mut text = serde_json::to_string_pretty(v)?;
                    text.push('\n');
                    emit(None, &text)?;
                    eprintln!("verdict: {}", v.outcome);
                }
                Err(VerdictError::PreconditionViolated(blocking)) => {
                    print_findings(blocking);
                    eprintln!("no verdict: the document is not lint-clean");
                }
            }
            Ok(code)
        }
        AssessCommand::Report {
            doc,
            format,
            output,
            date,
            data,
        } => {
            let doc = load_document(&doc)?;
            let sources = parse_sources(&data)?;
            let assessed = assess(catalog, &doc, sources.as_ref());
            let text = render_report(
                catalog,
                &assessed.document,
                &assessed.findings,
                &assessed.verdict,
                format,
                date.as_deref(),
            );
            emit(output.as_deref(), &text)?;
            Ok(verdict_exit(&assessed.verdict))
        }
    }
}

fn verdict_exit(verdict: &Result<Verdict, VerdictError>) -> u8 {
    match verdict {
        Err(_) => EXIT_LINT,
        Ok(v) => match v.outcome {
            Outcome::NotTrustworthy => EXIT_NOT_TRUSTWORTHY,
            Outcome::NotAssessable => EXIT_LINT,
            Outcome::Trustworthy | Outcome::TrustworthyWithResiduals => EXIT_CLEAN,
        },
    }
}

fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        None => Ok(Catalog::shipped()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            from_json_str(&text).with_context(|| format!("loading catalog {}", p.display()))
        }
    }
}

fn load_document(path: &Path) -> Result<AssessmentDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_sources(data: &[String]) -> Result<Option<BTreeMap<String, DatasetSource>>> {
    if data.is_empty() {
        return Ok(None);
    }
    let mut out = BTreeMap::new();
    for spec in data {
        let (name, file) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("expected NAME=FILE, got `{spec}`"))?;
        if out
            .insert(
                name.trim().to_owned(),
                DatasetSource::Path(PathBuf::from(file)),
            )
            .is_some()
        {
            return Err(anyhow!("dataset `{name}` given twice"));
        }
    }
    Ok(Some(out))
}

fn print_findings(findings: &[Finding]) {
    for f in findings {
        eprintln!("{f}");
    }
    let errors = findings
        .iter()
        .filter(|f| f.severity == trustcat::assessment::lint::Severity::Error)
        .count();
    eprintln!("{errors} error(s), {} warning(s)", findings.len() - errors);
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .context("writing to standard output")?;
            out.flush().context("writing to standard output")
        }
    }
}

fn show_item(item: &trustcat::CatalogItem) -> String {
    let mut s = format!("{} ({})\n{}\n", item.id, item.kind.label(), item.title);
    if let Some(label) = &item.printed_label {
        s.push_str(&format!("printed as: {label}\n"));
    }
    if !item.requirements.is_empty() {
        let reqs: Vec<String> = item
            .requirements
            .iter()
            .map(|r| {
                if r.conditional {
                    format!("({})", r.kind.code())
                } else {
                    r.kind.code().to_owned()
                }
            })
            .collect();
        s.push_str(&format!("requirements: {}\n", reqs.join(", ")));
    }
    if let Some(l) = &item.lifecycle {
        s.push_str(&format!("lifecycle: {l:?}\n"));
    }
    if !item.refs.is_empty() {
        let refs: Vec<String> = item.refs.iter().map(ToString::to_string).collect();
        s.push_str(&format!("refs: {}\n", refs.join(", ")));
    }
    if !item.body.is_empty() {
        s.push('\n');
        s.push_str(&item.body);
        s.push('\n');
    }
    s
}
