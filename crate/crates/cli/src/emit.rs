//! Rendering an [`Outcome`] as JSON, CSV or a markdown table.

use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::error::CliError;
use crate::job::{Format, Job};

/// Column names in first-appearance order across rows.
fn columns(outcome: &Outcome) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for row in &outcome.rows {
        for key in row.keys() {
            if !cols.contains(key) {
                cols.push(key.clone());
            }
        }
    }
    cols
}

fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

fn status(outcome: &Outcome) -> Value {
    match outcome.passed {
        Some(true) => json!("pass"),
        Some(false) => json!("fail"),
        None => Value::Null,
    }
}

pub fn render(job: &Job, outcome: &Outcome) -> Result<String, CliError> {
    match job.format {
        Format::Json => {
            let doc = json!({
                "command": job.command.label(),
                "status": status(outcome),
                "flagged": outcome.flagged,
                "rows": outcome.rows,
            });
            let mut text =
                serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let cols = columns(outcome);
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&cols)?;
            for row in &outcome.rows {
                writer.write_record(cols.iter().map(|c| cell(row.get(c))))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output of UTF-8 cells is UTF-8"))
        }
        Format::Md => {
            if let Some(md) = &outcome.markdown {
                return Ok(md.clone());
            }
            let cols = columns(outcome);
            let mut text = format!("| {} |\n|{}\n", cols.join(" | "), "---|".repeat(cols.len()));
            for row in &outcome.rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| cell(row.get(c)).replace('|', "\\|"))
                    .collect();
                text.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            Ok(text)
        }
    }
}
