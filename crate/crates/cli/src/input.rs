use std::io::Read;
use std::path::Path;

use multisym::{Configuration, GeneratorBasis, LabeledDataset};
use serde_json::Value;

use crate::Failure;

pub fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn source_name(path: Option<&Path>) -> String {
    path.map_or_else(|| "stdin".to_string(), |p| p.display().to_string())
}

fn parse_number(cell: &str, row: usize, column: &str, source: &str) -> Result<f64, Failure> {
    match cell.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err(Failure::Domain(format!(
            "{source}: row {row}, field {column}: value {cell:?} is not finite"
        ))),
        Err(_) => Err(Failure::Domain(format!(
            "{source}: row {row}, field {column}: cannot parse {cell:?} as a number"
        ))),
    }
}

/// Header plus data rows; rows are numbered from 1 after the header.
fn read_table(text: &str, source: &str) -> Result<(Vec<String>, Vec<csv::StringRecord>), Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Failure::Domain(format!("{source}: malformed header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Failure::Domain(format!("{source}: missing CSV header")));
    }
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Domain(format!("{source}: row {}: {e}", k + 1)))?;
        rows.push(record);
    }
    if rows.is_empty() {
        return Err(Failure::Domain(format!("{source}: no data rows")));
    }
    Ok((header, rows))
}

/// Configuration CSV: header `x1,...,xd`, one point per row.
pub fn configuration(text: &str, source: &str) -> Result<Configuration, Failure> {
    let (header, rows) = read_table(text, source)?;
    for (k, name) in header.iter().enumerate() {
        let expected = format!("x{}", k + 1);
        if *name != expected {
            return Err(Failure::Domain(format!(
                "{source}: header field {} is {name:?}, expected {expected:?}",
                k + 1
            )));
        }
    }
    let mut points = Vec::with_capacity(rows.len());
    for (r, record) in rows.iter().enumerate() {
        let point = record
            .iter()
            .zip(&header)
            .map(|(cell, column)| parse_number(cell, r + 1, column, source))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(point);
    }
    Configuration::new(points).map_err(Failure::from)
}

pub fn configuration_file(path: Option<&Path>) -> Result<Configuration, Failure> {
    let text = read_text(path)?;
    configuration(&text, &source_name(path))
}

/// Labelled dataset CSV: `d*n` coordinate columns (point-major) plus an `f` column.
pub fn dataset(text: &str, source: &str, d: usize) -> Result<LabeledDataset, Failure> {
    let (header, rows) = read_table(text, source)?;
    let f_col = header
        .iter()
        .position(|h| h == "f")
        .ok_or_else(|| Failure::Domain(format!("{source}: no \"f\" column in header")))?;
    let coord_cols: Vec<usize> = (0..header.len()).filter(|&c| c != f_col).collect();
    if d == 0 || coord_cols.is_empty() || !coord_cols.len().is_multiple_of(d) {
        return Err(Failure::Domain(format!(
            "{source}: {} coordinate columns cannot be split into points of dimension {d}",
            coord_cols.len()
        )));
    }
    let n = coord_cols.len() / d;
    let basis = multisym::enumerate_generators(d, n, false)?;
    let mut ds = LabeledDataset::new(basis);
    for (r, record) in rows.iter().enumerate() {
        let coords = coord_cols
            .iter()
            .map(|&c| parse_number(&record[c], r + 1, &header[c], source))
            .collect::<Result<Vec<_>, _>>()?;
        let value = parse_number(&record[f_col], r + 1, "f", source)?;
        ds.push(Configuration::from_flat(d, coords)?, value)?;
    }
    Ok(ds)
}

/// Basis listed alongside the values, if any, and the values.
pub type EmbeddingInput = (Option<Vec<Vec<u32>>>, Vec<f64>);

/// Embedding values from `embed` output: a JSON object with `values` (and
/// optionally `basis`), a bare JSON array, or a single-row CSV with or
/// without a header line.
pub fn embedding_values(text: &str, source: &str) -> Result<EmbeddingInput, Failure> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Failure::Domain(format!("{source}: malformed JSON: {e}")))?;
        let (basis, values) = match &value {
            Value::Object(map) => (map.get("basis"), map.get("values")),
            Value::Array(_) => (None, Some(&value)),
            _ => (None, None),
        };
        let values = values.ok_or_else(|| Failure::Domain(format!("{source}: missing field \"values\"")))?;
        let values: Vec<f64> = serde_json::from_value(values.clone())
            .map_err(|e| Failure::Domain(format!("{source}: field \"values\": {e}")))?;
        let basis = basis
            .map(|b| {
                serde_json::from_value::<Vec<Vec<u32>>>(b.clone())
                    .map_err(|e| Failure::Domain(format!("{source}: field \"basis\": {e}")))
            })
            .transpose()?;
        return Ok((basis, values));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (k, record) in reader.records().enumerate() {
        records.push(record.map_err(|e| Failure::Domain(format!("{source}: row {}: {e}", k + 1)))?);
    }
    let numeric = |r: &csv::StringRecord| r.iter().all(|c| c.parse::<f64>().is_ok());
    let (header, data): (Option<&csv::StringRecord>, &[csv::StringRecord]) = match records.as_slice() {
        [h, rest @ ..] if !numeric(h) => (Some(h), rest),
        all => (None, all),
    };
    let [row] = data else {
        return Err(Failure::Domain(format!(
            "{source}: expected exactly one row of embedding values, found {}",
            data.len()
        )));
    };
    let values = row
        .iter()
        .enumerate()
        .map(|(k, cell)| {
            let column = header
                .and_then(|h| h.get(k))
                .map_or_else(|| format!("{}", k + 1), str::to_string);
            parse_number(cell, 1, &column, source)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((None, values))
}

pub fn json_file(path: &Path) -> Result<Value, Failure> {
    let text = read_text(Some(path))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: malformed JSON: {e}", path.display())))
}

pub fn check_basis(basis: &GeneratorBasis, listed: &[Vec<u32>], source: &str) -> Result<(), Failure> {
    let canonical: Vec<&[u32]> = basis.exponents().iter().map(|s| s.entries()).collect();
    let listed: Vec<&[u32]> = listed.iter().map(Vec::as_slice).collect();
    if canonical != listed {
        return Err(Failure::Domain(format!(
            "{source}: basis does not match the canonical basis for d = {}, n = {}",
            basis.d(),
            basis.n()
        )));
    }
    Ok(())
}
