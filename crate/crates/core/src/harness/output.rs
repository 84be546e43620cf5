//! Result files.
//!
//! CSV output is a sequence of blocks separated by blank lines, each with its own
//! header: an experiment contributes a one-row summary block followed by its trial
//! block. JSON output is one object per line.

use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::experiment::{CubicReport, ExperimentOutcome};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn csv_block<T: Serialize>(out: &mut dyn Write, records: &[T]) -> Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for r in records {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    writeln!(out)?;
    Ok(())
}

pub fn write_experiment(out: &mut dyn Write, format: OutputFormat, outcome: &ExperimentOutcome) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            csv_block(out, std::slice::from_ref(&outcome.summary))?;
            csv_block(out, &outcome.rows)
        }
        OutputFormat::Json => {
            let line = json!({ "summary": outcome.summary, "trials": outcome.rows });
            writeln!(out, "{line}")?;
            Ok(())
        }
    }
}

pub fn write_cubic_report(out: &mut dyn Write, format: OutputFormat, report: &CubicReport) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            csv_block(out, &report.uncapped)?;
            if let Some(capped) = &report.capped {
                csv_block(out, capped)?;
            }
            csv_block(out, &report.histogram)
        }
        OutputFormat::Json => {
            let line = json!({
                "uncapped": report.uncapped,
                "capped": report.capped,
                "histogram": report.histogram,
            });
            writeln!(out, "{line}")?;
            Ok(())
        }
    }
}
