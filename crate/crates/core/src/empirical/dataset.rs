use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::EmpiricalSample;
use crate::error::{Error, Result};

/// Tag for the embedded lifetime data of 43 blood cancer patients.
pub const BLOOD_CANCER_TAG: &str = "blood_cancer_43";

const LITERAL: &str = include_str!("../../data/blood_cancer_43_literal.txt");
const CORRECTED: &str = include_str!("../../data/blood_cancer_43_corrected.txt");

/// Which transcription of the embedded data to use.
///
/// The commonly reprinted listing has `15999` between `1578` and `1603`.
/// `Literal` keeps that entry and the listed order; `Corrected` reads it as
/// `1599` and sorts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reading {
    Literal,
    #[default]
    Corrected,
}

impl Reading {
    pub fn name(self) -> &'static str {
        match self {
            Reading::Literal => "literal",
            Reading::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Reading::Literal),
            "corrected" => Ok(Reading::Corrected),
            other => Err(Error::domain(format!(
                "unknown reading '{other}', expected literal or corrected"
            ))),
        }
    }
}

/// Loads the builtin tag or a file of comma/whitespace separated values.
/// `reading` only affects the builtin.
pub fn load_dataset(source: &str, reading: Reading) -> Result<EmpiricalSample> {
    if source == BLOOD_CANCER_TAG {
        let label = format!("{BLOOD_CANCER_TAG} ({reading})");
        return match reading {
            Reading::Literal => EmpiricalSample::as_listed(parse_values(LITERAL)?, label),
            Reading::Corrected => EmpiricalSample::new(parse_values(CORRECTED)?, label),
        };
    }
    let text = std::fs::read_to_string(Path::new(source))?;
    parse_sample(&text, source)
}

/// Parses and sorts. Lines starting with `#` and blank lines are skipped.
pub fn parse_sample(text: &str, source: &str) -> Result<EmpiricalSample> {
    EmpiricalSample::new(parse_values(text)?, source)
}

fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for field in line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|f| !f.is_empty())
        {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("'{field}' is not a number"),
            })?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            message: "no numeric values found".into(),
        });
    }
    Ok(values)
}

/// Writes a provenance comment then one value per line; the output parses
/// back to the same sample.
pub fn write_sample<W: Write>(sample: &EmpiricalSample, mut out: W) -> Result<()> {
    writeln!(out, "# source: {}", sample.source().replace('\n', " "))?;
    writeln!(out, "# n: {}", sample.n())?;
    for v in sample.values() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_readings() {
        let lit = load_dataset(BLOOD_CANCER_TAG, Reading::Literal).unwrap();
        assert_eq!(lit.n(), 43);
        assert_eq!(lit.min(), 115.0);
        assert_eq!(lit.max(), 15999.0);
        assert!(!lit.is_sorted());
        assert_eq!(lit.values()[32], 15999.0);

        let cor = load_dataset(BLOOD_CANCER_TAG, Reading::Corrected).unwrap();
        assert_eq!(cor.n(), 43);
        assert_eq!(cor.max(), 1965.0);
        assert!(cor.is_sorted());
        assert!(cor.values().contains(&1599.0));
        assert!(cor.source().contains("corrected"));
    }

    #[test]
    fn parse_errors_carry_line() {
        match parse_sample("1 2\n# c\n3 x\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_sample("", "t"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_sample("# only\n\n", "t"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_sample("1, -2", "t"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(parse_sample("4", "t"), Err(Error::Validation(_))));
    }

    #[test]
    fn csv_and_whitespace_mix() {
        let s = parse_sample("3,1;2\n 5\t4 \n", "t").unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn export_round_trip() {
        let s = parse_sample("0.1 1e-300 3.3333333333333335 7", "t").unwrap();
        let mut buf = Vec::new();
        write_sample(&s, &mut buf).unwrap();
        let back = parse_sample(std::str::from_utf8(&buf).unwrap(), "t").unwrap();
        assert_eq!(back.values(), s.values());
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(
            load_dataset("/nonexistent/x.txt", Reading::Corrected),
            Err(Error::Io(_))
        ));
    }
}
