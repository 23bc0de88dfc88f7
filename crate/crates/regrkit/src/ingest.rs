//! Raw analytics-export ingestion.
//!
//! Exports carry unit-suffixed cells like `1k`, `$2,500` or `1,150k`. The
//! quantity grammar is: optional `$`, digits with optional `,` thousands
//! separators, optional decimal fraction, optional trailing `k`/`K`
//! multiplier (x1000). Ingestion parses every non-label cell through that
//! grammar and drops exact duplicate rows, keeping the first occurrence.

use std::collections::HashSet;

use crate::dataset::{AttributeSpec, Dataset, Value};
use crate::error::{Error, Result};

/// Parses one quantity token. Exact for integer-valued results: the mantissa
/// is accumulated as an integer and scaled by powers of ten, so `12.5k` is
/// exactly 12500 and `1,150k` exactly 1150000.
pub fn parse_quantity(token: &str) -> Result<f64> {
    let malformed = || Error::MalformedQuantity(token.to_string());
    let mut s = token.trim();
    if s.is_empty() {
        return Err(malformed());
    }
    if let Some(rest) = s.strip_prefix('$') {
        s = rest;
    }
    let mut pow10: i32 = 0;
    if let Some(rest) = s.strip_suffix(['k', 'K']) {
        s = rest;
        pow10 = 3;
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };

    // Integer digits, optionally grouped: 1-3 digits then groups of exactly 3.
    let mut mantissa: u128 = 0;
    let mut digits = 0usize;
    if int_part.is_empty() {
        return Err(malformed());
    }
    if int_part.contains(',') {
        let groups: Vec<&str> = int_part.split(',').collect();
        if groups[0].is_empty() || groups[0].len() > 3 {
            return Err(malformed());
        }
        if !groups.iter().skip(1).all(|g| g.len() == 3) {
            return Err(malformed());
        }
        for g in &groups {
            for c in g.chars() {
                let d = c.to_digit(10).ok_or_else(malformed)?;
                mantissa = mantissa.checked_mul(10).ok_or_else(malformed)?;
                mantissa += d as u128;
                digits += 1;
            }
        }
    } else {
        for c in int_part.chars() {
            let d = c.to_digit(10).ok_or_else(malformed)?;
            mantissa = mantissa.checked_mul(10).ok_or_else(malformed)?;
            mantissa += d as u128;
            digits += 1;
        }
    }
    if let Some(frac) = frac_part {
        if frac.is_empty() {
            return Err(malformed());
        }
        for c in frac.chars() {
            let d = c.to_digit(10).ok_or_else(malformed)?;
            mantissa = mantissa.checked_mul(10).ok_or_else(malformed)?;
            mantissa += d as u128;
            digits += 1;
        }
        pow10 -= frac.len() as i32;
    }
    if digits == 0 || digits > 30 {
        return Err(malformed());
    }

    let value = if pow10 >= 0 {
        match mantissa.checked_mul(10u128.pow(pow10 as u32)) {
            Some(v) => v as f64,
            None => return Err(malformed()),
        }
    } else {
        mantissa as f64 / 10f64.powi(-pow10)
    };
    Ok(value)
}

/// Parses a raw CSV export into a dataset. Columns named in `label_columns`
/// become label attributes; every other cell goes through [`parse_quantity`].
/// Rows that equal an earlier row in every column are dropped.
pub fn ingest_csv(text: &str, label_columns: &[String]) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::CsvHeader(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::CsvHeader("empty header row".into()));
    }
    for (i, h) in headers.iter().enumerate() {
        if h.is_empty() {
            return Err(Error::CsvHeader(format!(
                "empty column name at position {i}"
            )));
        }
        if headers[..i].contains(h) {
            return Err(Error::CsvHeader(format!("duplicate column name '{h}'")));
        }
    }
    for l in label_columns {
        if !headers.contains(l) {
            return Err(Error::UnknownLabelColumn(l.clone()));
        }
    }

    let specs: Vec<AttributeSpec> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            if label_columns.contains(h) {
                AttributeSpec::label(h.clone(), i)
            } else {
                AttributeSpec::numeric(h.clone(), i)
            }
        })
        .collect();

    let mut rows: Vec<Vec<Value>> = Vec::new();
    let mut seen: HashSet<Vec<RowKey>> = HashSet::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(Error::WidthMismatch {
                row: r,
                expected: headers.len(),
                found: record.len(),
            });
        }
        let mut row = Vec::with_capacity(headers.len());
        for (spec, cell) in specs.iter().zip(record.iter()) {
            match spec.kind {
                crate::dataset::AttributeKind::Label => {
                    row.push(Value::Text(cell.trim().to_string()));
                }
                crate::dataset::AttributeKind::Numeric => {
                    let v = parse_quantity(cell).map_err(|_| Error::MalformedCell {
                        token: cell.trim().to_string(),
                        row: r,
                        column: spec.name.clone(),
                    })?;
                    row.push(Value::Num(v));
                }
            }
        }
        if seen.insert(row.iter().map(RowKey::of).collect()) {
            rows.push(row);
        }
    }

    Dataset::new(specs, rows)
}

/// Hashable row fingerprint for duplicate removal; -0.0 folds onto 0.0 so the
/// fingerprint agrees with numeric equality.
#[derive(Hash, PartialEq, Eq)]
enum RowKey {
    Num(u64),
    Text(String),
}

impl RowKey {
    fn of(v: &Value) -> RowKey {
        match v {
            Value::Num(x) => RowKey::Num((x + 0.0).to_bits()),
            Value::Text(t) => RowKey::Text(t.clone()),
        }
    }
}
