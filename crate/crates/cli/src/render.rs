//! Output formats: JSON, CSV and an aligned plain-text table derived from
//! the CSV rows.

use serde::Serialize;

use trireflect_core::metrics::{LambdaReport, SqrtBoundReport};
use trireflect_core::survey::Counterexample;
use trireflect_core::verify::Details;
use trireflect_core::{
    ConjectureScanResult, SharpnessReport, SurveyRow, VerificationReport, WPrimeSequence,
    WordLengthTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Table => "txt",
        }
    }
}

pub trait Render: Serialize {
    /// Header line plus one line per row, newline-terminated.
    fn csv(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => align(&self.csv()),
        }
    }
}

fn csv_lines(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Pads comma-separated columns to a common width.
pub fn align(csv: &str) -> String {
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:>w$}", w = widths[c]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

impl Render for WordLengthTable {
    fn csv(&self) -> String {
        self.to_csv()
    }
}

impl Render for WPrimeSequence {
    fn csv(&self) -> String {
        csv_lines(
            "l,size,members",
            self.levels.iter().enumerate().map(|(l, level)| {
                let members: Vec<String> = level.iter().map(|m| m.to_string()).collect();
                format!("{l},{},{}", level.len(), members.join(" "))
            }),
        )
    }
}

impl Render for LambdaReport {
    fn csv(&self) -> String {
        csv_lines(LambdaReport::CSV_HEADER, [self.csv_row()])
    }
}

impl Render for Vec<SqrtBoundReport> {
    fn csv(&self) -> String {
        csv_lines(
            SqrtBoundReport::CSV_HEADER,
            self.iter().map(SqrtBoundReport::csv_row),
        )
    }
}

impl Render for Vec<SurveyRow> {
    fn csv(&self) -> String {
        csv_lines(SurveyRow::CSV_HEADER, self.iter().map(SurveyRow::csv_row))
    }
}

fn counterexample_row(c: &Counterexample) -> String {
    let members: Vec<String> = c.stabilizer.iter().map(|m| m.to_string()).collect();
    format!("{},{},{},{},{}", c.n, c.a, c.b, c.l, members.join(" "))
}

impl Render for ConjectureScanResult {
    /// One row per counterexample; rejected candidates are flagged.
    fn csv(&self) -> String {
        let rows = self
            .counterexamples
            .iter()
            .map(|c| format!("{},true", counterexample_row(c)))
            .chain(
                self.rejected
                    .iter()
                    .map(|c| format!("{},false", counterexample_row(c))),
            );
        csv_lines("n,a,b,l,stabilizer,reproduced", rows)
    }
}

impl Render for VerificationReport {
    /// Per-case rows for sweeps that carry them, else a one-line summary.
    fn csv(&self) -> String {
        match &self.details {
            Some(Details::Sharpness(rows)) => csv_lines(
                SharpnessReport::CSV_HEADER,
                rows.iter().map(SharpnessReport::csv_row),
            ),
            Some(Details::Sqrt(rows)) => rows.csv(),
            Some(Details::BoundAttained(rows)) => csv_lines(
                "n,bound_attained",
                rows.iter().map(|r| format!("{},{}", r.n, r.bound_attained)),
            ),
            None => csv_lines(VerificationReport::CSV_HEADER, [self.csv_row()]),
        }
    }
}
