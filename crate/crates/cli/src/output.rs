//! Rendering of command results as JSON, CSV or Markdown.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// A titled grid of cells.
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Everything a command produces: the structured value for JSON, tables
/// and free-form notes for the other formats, and the verdict.
pub struct Report {
    pub heading: String,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub json: Value,
    pub pass: bool,
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Md => self.markdown(),
        }
    }

    fn csv(&self) -> String {
        let mut blocks = Vec::new();
        for t in &self.tables {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["table".to_string()];
            header.extend(t.headers.iter().cloned());
            w.write_record(&header).expect("in-memory write");
            for r in &t.rows {
                let mut row = vec![t.title.clone()];
                row.extend(r.iter().cloned());
                w.write_record(&row).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            blocks.push(String::from_utf8(bytes).expect("utf-8 input"));
        }
        blocks.join("\n")
    }

    fn markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}\n", self.heading);
        for n in &self.notes {
            let _ = writeln!(s, "{n}  ");
        }
        if !self.notes.is_empty() {
            s.push('\n');
        }
        for t in &self.tables {
            let _ = writeln!(s, "## {}\n", t.title);
            if t.rows.is_empty() {
                s.push_str("(none)\n\n");
                continue;
            }
            let _ = writeln!(
                s,
                "| {} |",
                t.headers
                    .iter()
                    .map(|h| md_cell(h))
                    .collect::<Vec<_>>()
                    .join(" | ")
            );
            let _ = writeln!(s, "|{}", "---|".repeat(t.headers.len()));
            for r in &t.rows {
                let _ = writeln!(
                    s,
                    "| {} |",
                    r.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | ")
                );
            }
            s.push('\n');
        }
        let _ = writeln!(s, "**{}**", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}
