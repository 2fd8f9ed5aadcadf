//! Batch grading of CSV or JSON-lines corpora.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tashih_core::{grade, Classification, GradeResult, GradingConfig, StemMode};

use crate::input::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn guess(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Jsonl,
        }
    }
}

#[derive(Debug, Deserialize)]
struct Record {
    id: Value,
    student_answer: String,
    model_answer: String,
}

#[derive(Serialize)]
struct Outcome<'a> {
    id: &'a Value,
    mark_sum: f64,
    classification: Classification,
    result: &'a GradeResult,
}

/// Parsed records tagged with their 1-based source line.
fn parse(text: &str, format: Format) -> Vec<(usize, Result<Record, String>)> {
    match format {
        Format::Jsonl => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, serde_json::from_str::<Record>(l).map_err(|e| e.to_string())))
            .collect(),
        Format::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .flexible(true)
                .from_reader(text.as_bytes());
            let headers = match reader.headers() {
                Ok(h) => h.clone(),
                Err(e) => return vec![(1, Err(e.to_string()))],
            };
            reader
                .records()
                .map(|row| match row {
                    Ok(row) => {
                        let line = row.position().map_or(0, |p| p.line() as usize);
                        let record = row
                            .deserialize::<Record>(Some(&headers))
                            .map_err(|e| e.to_string());
                        (line, record)
                    }
                    Err(e) => {
                        let line = e.position().map_or(0, |p| p.line() as usize);
                        (line, Err(e.to_string()))
                    }
                })
                .collect()
        }
    }
}

/// Grades every record in parallel and writes one JSON line per success in
/// input order. Failures go to stderr; their count is returned.
pub fn run(
    text: &str,
    format: Format,
    mode: StemMode,
    settings: &GradingConfig,
    out: &mut impl Write,
) -> Result<usize, CliError> {
    let records = parse(text, format);
    let graded: Vec<(usize, Result<String, String>)> = records
        .into_par_iter()
        .map(|(line, record)| {
            let result = record.and_then(|r| {
                let result = grade(&r.student_answer, &r.model_answer, mode, &settings.stemmer, &settings.policy)
                    .map_err(|e| e.to_string())?;
                let outcome = Outcome {
                    id: &r.id,
                    mark_sum: result.mark_sum,
                    classification: result.classification,
                    result: &result,
                };
                Ok(serde_json::to_string(&outcome).expect("outcomes serialize"))
            });
            (line, result)
        })
        .collect();
    let mut failures = 0;
    for (line, result) in graded {
        match result {
            Ok(json) => writeln!(out, "{json}")?,
            Err(message) => {
                failures += 1;
                eprintln!("line {line}: {message}");
            }
        }
    }
    Ok(failures)
}
