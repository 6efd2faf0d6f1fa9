//! Reading abstract records from JSONL or CSV.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use topicscope_core::corpus::RawDocument;

use crate::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl InputFormat {
    /// Guesses from the file extension (`.csv` or anything else as JSONL).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Jsonl,
        }
    }
}

/// Year may arrive as a number or a numeric string.
#[derive(Deserialize)]
#[serde(untagged)]
enum YearField {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
struct Record {
    id: serde_json::Value,
    #[serde(rename = "abstract", default)]
    abstract_text: Option<String>,
    journal: String,
    year: YearField,
}

fn year_of(field: YearField, line: u64) -> AppResult<i32> {
    let parsed = match field {
        YearField::Int(y) => i32::try_from(y).ok(),
        YearField::Text(s) => s.trim().parse().ok(),
    };
    parsed.ok_or_else(|| AppError::input(format!("line {line}: year is not an integer")))
}

fn id_of(v: serde_json::Value, line: u64) -> AppResult<String> {
    match v {
        serde_json::Value::String(s) if !s.is_empty() => Ok(s),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        _ => Err(AppError::input(format!("line {line}: id must be a non-empty string or number"))),
    }
}

pub fn parse_jsonl(text: &str) -> AppResult<Vec<RawDocument>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: Record =
            serde_json::from_str(raw).map_err(|e| AppError::input(format!("line {line}: {e}")))?;
        out.push(RawDocument {
            id: id_of(rec.id, line)?,
            abstract_text: rec.abstract_text.unwrap_or_default(),
            journal: rec.journal,
            year: year_of(rec.year, line)?,
        });
    }
    Ok(out)
}

pub fn parse_csv(text: &str) -> AppResult<Vec<RawDocument>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| AppError::input(format!("line 1: {e}")))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| AppError::input(format!("line 1: missing column {name:?}")))
    };
    let (id, abs, journal, year) = (col("id")?, col("abstract")?, col("journal")?, col("year")?);
    let mut out = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            AppError::input(format!("line {line}: malformed CSV row: {e}"))
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("");
        if field(id).is_empty() {
            return Err(AppError::input(format!("line {line}: empty id")));
        }
        out.push(RawDocument {
            id: field(id).to_string(),
            abstract_text: field(abs).to_string(),
            journal: field(journal).to_string(),
            year: year_of(YearField::Text(field(year).to_string()), line)?,
        });
    }
    Ok(out)
}

pub fn read_records(path: &Path, format: Option<InputFormat>) -> AppResult<Vec<RawDocument>> {
    let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    match format.unwrap_or_else(|| InputFormat::from_path(path)) {
        InputFormat::Jsonl => parse_jsonl(&text),
        InputFormat::Csv => parse_csv(&text),
    }
    .map_err(|e| match e {
        AppError::Input(m) => AppError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}
