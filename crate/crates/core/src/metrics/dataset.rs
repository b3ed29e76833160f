//! CSV ingestion of prediction datasets.
//!
//! Classification files carry `group,y_true,y_pred[,score]`, regression files
//! `y_true,y_pred`. Extra columns are ignored. Row numbers are the 1-based
//! line numbers of the source file so that diagnostics point at the file.

use std::io::Read;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("CSV error at row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("row {row}: value `{value}` out of range for `{field}`")]
    Range {
        row: usize,
        field: &'static str,
        value: String,
    },
    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
    #[error("cannot read dataset {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Classification,
    Regression,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRecord {
    pub group: String,
    pub y_true: bool,
    pub y_pred: bool,
    /// Confidence that the true label is 1.
    pub score: Option<f64>,
    pub row: usize,
}

impl ClassificationRecord {
    pub fn new(group: impl Into<String>, y_true: bool, y_pred: bool, score: Option<f64>) -> Self {
        ClassificationRecord {
            group: group.into(),
            y_true,
            y_pred,
            score,
            row: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionRecord {
    pub y_true: f64,
    pub y_pred: f64,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Classification(Vec<ClassificationRecord>),
    Regression(Vec<RegressionRecord>),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Classification(r) => r.len(),
            Dataset::Regression(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn schema(&self) -> Schema {
        match self {
            Dataset::Classification(_) => Schema::Classification,
            Dataset::Regression(_) => Schema::Regression,
        }
    }
}

pub fn load_dataset<R: Read>(source: R, schema: Schema) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    let column = |name: &'static str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or(DatasetError::MissingColumn(name))
    };
    match schema {
        Schema::Classification => {
            let group = column("group")?;
            let y_true = column("y_true")?;
            let y_pred = column("y_pred")?;
            let score = headers.iter().position(|h| h == "score");
            let mut records = Vec::new();
            for result in reader.records() {
                let rec = result.map_err(|e| csv_error(&e, 0))?;
                let row = line_of(&rec);
                let score = match score.map(|i| rec.get(i).unwrap_or("")) {
                    None | Some("") => None,
                    Some(text) => {
                        let v = parse_real(text, row, "score")?;
                        if !(0.0..=1.0).contains(&v) {
                            return Err(DatasetError::Range {
                                row,
                                field: "score",
                                value: text.to_owned(),
                            });
                        }
                        Some(v)
                    }
                };
                records.push(ClassificationRecord {
                    group: rec.get(group).unwrap_or("").to_owned(),
                    y_true: parse_label(rec.get(y_true).unwrap_or(""), row, "y_true")?,
                    y_pred: parse_label(rec.get(y_pred).unwrap_or(""), row, "y_pred")?,
                    score,
                    row,
                });
            }
            Ok(Dataset::Classification(records))
        }
        Schema::Regression => {
            let y_true = column("y_true")?;
            let y_pred = column("y_pred")?;
            let mut records = Vec::new();
            for result in reader.records() {
                let rec = result.map_err(|e| csv_error(&e, 0))?;
                let row = line_of(&rec);
                records.push(RegressionRecord {
                    y_true: parse_finite(rec.get(y_true).unwrap_or(""), row, "y_true")?,
                    y_pred: parse_finite(rec.get(y_pred).unwrap_or(""), row, "y_pred")?,
                    row,
                });
            }
            Ok(Dataset::Regression(records))
        }
    }
}

pub fn load_dataset_file(path: &Path, schema: Schema) -> Result<Dataset, DatasetError> {
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_dataset(std::io::BufReader::new(file), schema)
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map(|p| p.line() as usize).unwrap_or(0)
}

fn csv_error(e: &csv::Error, fallback: usize) -> DatasetError {
    let row = e.position().map(|p| p.line() as usize).unwrap_or(fallback);
    DatasetError::Csv {
        row,
        message: e.to_string(),
    }
}

fn parse_real(text: &str, row: usize, field: &'static str) -> Result<f64, DatasetError> {
    text.parse::<f64>().map_err(|_| DatasetError::Csv {
        row,
        message: format!("`{text}` is not a decimal number in column `{field}`"),
    })
}

fn parse_finite(text: &str, row: usize, field: &'static str) -> Result<f64, DatasetError> {
    let v = parse_real(text, row, field)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DatasetError::Range {
            row,
            field,
            value: text.to_owned(),
        })
    }
}

fn parse_label(text: &str, row: usize, field: &'static str) -> Result<bool, DatasetError> {
    match text {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(DatasetError::Range {
            row,
            field,
            value: text.to_owned(),
        }),
    }
}
