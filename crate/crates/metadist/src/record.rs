//! Result tables and their CSV / JSON forms.
//!
//! CSV layout:
//!
//! ```text
//! # schema=1
//! # spec_hash=<sha256 of the sweep spec>
//! # seed=<u64>
//! # version=metadist <x.y.z>
//! # units=<unit of column 1>,<unit of column 2>,...
//! <column names>
//! <rows; an empty cell is a value that was not computed>
//! ```
//!
//! JSON carries the same fields with each column as an array. Numbers are
//! written in shortest round-trip form, so re-parsing either file gives back
//! the identical record. Wall time is reported on stderr only; keeping it out
//! of the files makes identical runs byte-identical.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    /// `1` for dimensionless quantities.
    pub unit: String,
    pub values: Vec<Option<f64>>,
}

impl Column {
    pub fn new(name: &str, unit: &str, values: Vec<Option<f64>>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            values,
        }
    }

    pub fn full(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self::new(name, unit, values.into_iter().map(Some).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub spec_hash: String,
    pub seed: u64,
    pub version: String,
    /// The first column is the swept axis.
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl RunRecord {
    pub fn new(spec_hash: String, seed: u64, columns: Vec<Column>) -> CliResult<Self> {
        let rec = Self {
            schema: SCHEMA_VERSION,
            spec_hash,
            seed,
            version: crate::version_string(),
            columns,
        };
        rec.check()?;
        Ok(rec)
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    fn check(&self) -> CliResult<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Ingest(format!("unsupported schema {}", self.schema)));
        }
        if self.columns.is_empty() {
            return Err(CliError::Ingest("record has no columns".into()));
        }
        let n = self.rows();
        for c in &self.columns {
            if c.values.len() != n {
                return Err(CliError::Ingest(format!(
                    "column `{}` has {} values, the grid has {n}",
                    c.name,
                    c.values.len()
                )));
            }
            if c.name.is_empty() || c.name.contains([',', '\n']) || c.unit.contains([',', '\n']) {
                return Err(CliError::Ingest(format!("invalid column name or unit `{}`", c.name)));
            }
            if c.values.iter().flatten().any(|v| !v.is_finite()) {
                return Err(CliError::Ingest(format!("column `{}` has a non-finite value", c.name)));
            }
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> CliResult<()> {
        match format {
            Format::Csv => out.write_all(self.to_csv().as_bytes())?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# schema={}\n# spec_hash={}\n# seed={}\n# version={}\n# units={}\n",
            self.schema,
            self.spec_hash,
            self.seed,
            self.version,
            self.columns.iter().map(|c| c.unit.as_str()).collect::<Vec<_>>().join(",")
        );
        s.push_str(&self.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(","));
        s.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|c| c.values[i].map(format_f64).unwrap_or_default())
                .collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> CliResult<Self> {
        let mut meta = std::collections::BTreeMap::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(c) = line.strip_prefix('#') {
                let (k, v) = c
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| CliError::Ingest(format!("malformed comment line `{line}`")))?;
                meta.insert(k.trim().to_string(), v.trim().to_string());
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let get = |k: &str| {
            meta.get(k)
                .cloned()
                .ok_or_else(|| CliError::Ingest(format!("missing `# {k}=` line")))
        };
        let schema: u32 = get("schema")?
            .parse()
            .map_err(|_| CliError::Ingest("schema is not an integer".into()))?;
        let seed: u64 = get("seed")?
            .parse()
            .map_err(|_| CliError::Ingest("seed is not an integer".into()))?;
        let units_line = get("units")?;
        let units: Vec<&str> = units_line.split(',').collect();

        let mut rdr = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let names: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
        if names.len() != units.len() {
            return Err(CliError::Ingest(format!(
                "{} units for {} columns",
                units.len(),
                names.len()
            )));
        }
        let mut columns: Vec<Column> = names
            .iter()
            .zip(&units)
            .map(|(n, u)| Column::new(n, u, Vec::new()))
            .collect();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            for (c, cell) in columns.iter_mut().zip(row.iter()) {
                let v = if cell.is_empty() {
                    None
                } else {
                    Some(cell.parse::<f64>().map_err(|e| {
                        CliError::Ingest(format!("row {}: column `{}`: {e}", i + 1, c.name))
                    })?)
                };
                c.values.push(v);
            }
        }
        let rec = Self {
            schema,
            spec_hash: get("spec_hash")?,
            seed,
            version: get("version")?,
            columns,
        };
        rec.check()?;
        Ok(rec)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let rec: Self = serde_json::from_str(text)?;
        rec.check()?;
        Ok(rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, -0.0, 1.0, 0.1, 1e-300, 6.02e23, 1.0 / 3.0, 2f64.sqrt() * 1e-7, f64::MAX, 1e15] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(format_f64(0.25), "0.25");
        assert_eq!(format_f64(1e-9), "1e-9");
    }

    #[test]
    fn ragged_columns_rejected() {
        let cols = vec![Column::full("p2", "1", vec![0.1, 0.2]), Column::full("R", "1", vec![0.5])];
        assert!(RunRecord::new("x".into(), 1, cols).is_err());
    }
}
