use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub method: String,
    pub values: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool_version: String,
    pub seed: Option<u64>,
    pub reading: Option<String>,
    pub notes: Vec<String>,
}

/// The one output shape shared by every verb.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub verb: String,
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl ReportDocument {
    pub fn new(verb: &str, columns: &[&str]) -> Self {
        ReportDocument {
            verb: verb.to_string(),
            metadata: Metadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed: None,
                reading: None,
                notes: Vec::new(),
            },
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, method: &str, values: Vec<Cell>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row {
            label: label.into(),
            method: method.to_string(),
            values,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.metadata.notes.push(text.into());
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Pretty => self.write_pretty(out),
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)
            }
        }
    }

    fn write_pretty<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut table: Vec<Vec<String>> = vec![["label", "method"]
            .iter()
            .map(|s| s.to_string())
            .chain(self.columns.iter().cloned())
            .collect()];
        for row in &self.rows {
            table.push(
                [row.label.clone(), row.method.clone()]
                    .into_iter()
                    .chain(row.values.iter().map(pretty_cell))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|j| {
                table
                    .iter()
                    .map(|r| r[j].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for (i, r) in table.iter().enumerate() {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (s, w))| {
                    if j < 2 {
                        format!("{s:<w$}")
                    } else {
                        format!("{s:>w$}")
                    }
                })
                .collect();
            writeln!(out, "{}", line.join("  ").trim_end())?;
            if i == 0 {
                let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                writeln!(out, "{}", "-".repeat(total))?;
            }
        }
        if let Some(seed) = self.metadata.seed {
            writeln!(out, "seed: {seed}")?;
        }
        if let Some(reading) = &self.metadata.reading {
            writeln!(out, "reading: {reading}")?;
        }
        for n in &self.metadata.notes {
            writeln!(out, "note: {n}")?;
        }
        Ok(())
    }

    fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header = ["label", "method"]
            .into_iter()
            .map(str::to_string)
            .chain(self.columns.iter().cloned());
        w.write_record(header)?;
        for row in &self.rows {
            let record =
                [row.label.clone(), row.method.clone()]
                    .into_iter()
                    .chain(row.values.iter().map(|c| match c {
                        Cell::Num(v) => format!("{v:e}"),
                        Cell::Text(s) => s.clone(),
                        Cell::Missing => String::new(),
                    }));
            w.write_record(record)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn pretty_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => sig6(*v),
        Cell::Text(s) => s.clone(),
        Cell::Missing => "-".to_string(),
    }
}

/// Six significant digits, `%g` style.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
