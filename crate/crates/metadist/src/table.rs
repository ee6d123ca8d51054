//! Absorption-table CSV: a `frequency_hz,k_per_m` header, one sample per row,
//! `#` comment lines allowed.

use std::io::{Read, Write};
use std::path::Path;

use metadist_core::thz::AbsorptionTable;

use crate::error::{CliError, CliResult};
use crate::record::format_f64;

pub const TABLE_HEADER: [&str; 2] = ["frequency_hz", "k_per_m"];

pub fn read_table<R: Read>(reader: R) -> CliResult<AbsorptionTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != TABLE_HEADER {
        return Err(CliError::Ingest(format!(
            "absorption table header must be `{}`, found `{}`",
            TABLE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let parse = |j: usize| -> CliResult<f64> {
            row[j]
                .parse::<f64>()
                .map_err(|e| CliError::Ingest(format!("row {}: column {}: {e}", i + 1, TABLE_HEADER[j])))
        };
        samples.push((parse(0)?, parse(1)?));
    }
    AbsorptionTable::new(samples).map_err(|e| CliError::Ingest(e.to_string()))
}

pub fn read_table_file(path: &Path) -> CliResult<AbsorptionTable> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Ingest(format!("cannot open {}: {e}", path.display())))?;
    read_table(file)
}

pub fn write_table<W: Write>(table: &AbsorptionTable, writer: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TABLE_HEADER)?;
    for (f, k) in table.samples() {
        w.write_record([format_f64(f), format_f64(k)])?;
    }
    w.flush()?;
    Ok(())
}

/// Resolves `builtin:valley`, `builtin:monotone` or a file path.
pub fn load_table(spec: &str) -> CliResult<AbsorptionTable> {
    match spec {
        "builtin:valley" => Ok(AbsorptionTable::synthetic_valley()),
        "builtin:monotone" => Ok(AbsorptionTable::synthetic_monotone()),
        path => read_table_file(Path::new(path)),
    }
}
