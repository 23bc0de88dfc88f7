//! Core dataset model and descriptive statistics.
//!
//! A [`Dataset`] is an ordered list of attribute declarations plus row-major
//! instances. Numeric attributes are the modeling surface; label attributes
//! (e.g. a month tag) are carried through for reporting only. All statistics
//! use the sample (n-1) standard deviation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    /// Zero-based position within the dataset.
    pub index: usize,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>, index: usize) -> Self {
        AttributeSpec {
            name: name.into(),
            kind: AttributeKind::Numeric,
            index,
        }
    }

    pub fn label(name: impl Into<String>, index: usize) -> Self {
        AttributeSpec {
            name: name.into(),
            kind: AttributeKind::Label,
            index,
        }
    }
}

/// One cell of an instance: numeric for numeric attributes, text for labels.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    attributes: Vec<AttributeSpec>,
    rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
    pub n: usize,
}

/// Pearson correlations over the numeric attributes of a dataset, in dataset
/// order, together with the per-column sample stddevs (consumed by the CFS
/// evaluator).
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub stddevs: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }
}

impl Dataset {
    /// Validates and builds a dataset. Rejects duplicate or empty attribute
    /// names, rows of the wrong width, non-finite numerics, and cells whose
    /// type does not match the attribute kind.
    pub fn new(attributes: Vec<AttributeSpec>, rows: Vec<Vec<Value>>) -> Result<Self> {
        for (i, spec) in attributes.iter().enumerate() {
            if spec.name.is_empty() {
                return Err(Error::EmptyAttributeName(i));
            }
            if attributes[..i].iter().any(|s| s.name == spec.name) {
                return Err(Error::DuplicateAttribute(spec.name.clone()));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(Error::WidthMismatch {
                    row: r,
                    expected: attributes.len(),
                    found: row.len(),
                });
            }
            for (spec, cell) in attributes.iter().zip(row) {
                match (spec.kind, cell) {
                    (AttributeKind::Numeric, Value::Num(v)) => {
                        if !v.is_finite() {
                            return Err(Error::NonFiniteValue {
                                attribute: spec.name.clone(),
                                row: r,
                                value: *v,
                            });
                        }
                    }
                    (AttributeKind::Label, Value::Text(_)) => {}
                    (AttributeKind::Numeric, Value::Text(_)) => {
                        return Err(Error::NotNumeric(spec.name.clone()))
                    }
                    (AttributeKind::Label, Value::Num(_)) => {
                        return Err(Error::AttributeMismatch(format!(
                            "label attribute '{}' holds a numeric cell at row {}",
                            spec.name, r
                        )))
                    }
                }
            }
        }
        Ok(Dataset { attributes, rows })
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn attribute(&self, name: &str) -> Result<&AttributeSpec> {
        self.attributes
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Numeric attributes in dataset order.
    pub fn numeric_attributes(&self) -> Vec<&AttributeSpec> {
        self.attributes
            .iter()
            .filter(|s| s.kind == AttributeKind::Numeric)
            .collect()
    }

    /// First label attribute, if any (used as the report row label).
    pub fn label_attribute(&self) -> Option<&AttributeSpec> {
        self.attributes
            .iter()
            .find(|s| s.kind == AttributeKind::Label)
    }

    pub fn value(&self, row: usize, attr: &AttributeSpec) -> &Value {
        &self.rows[row][attr.index]
    }

    /// Numeric value of `name` at `row`.
    pub fn numeric_value(&self, row: usize, name: &str) -> Result<f64> {
        let spec = self.attribute(name)?;
        if spec.kind != AttributeKind::Numeric {
            return Err(Error::NotNumeric(name.to_string()));
        }
        Ok(self.rows[row][spec.index]
            .as_num()
            .expect("numeric column holds numeric cells"))
    }

    /// Whole numeric column of `name`, in row order.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<f64>> {
        let spec = self.attribute(name)?;
        if spec.kind != AttributeKind::Numeric {
            return Err(Error::NotNumeric(name.to_string()));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r[spec.index].as_num().expect("numeric column"))
            .collect())
    }

    pub fn column_stats(&self, name: &str) -> Result<ColumnStats> {
        let col = self.numeric_column(name)?;
        if col.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(stats_of(&col))
    }

    /// Pearson correlation of two numeric columns. Errors if either column is
    /// constant (the correlation is undefined) or has fewer than two rows.
    pub fn pearson(&self, a: &str, b: &str) -> Result<f64> {
        let xa = self.numeric_column(a)?;
        let xb = self.numeric_column(b)?;
        if xa.len() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: xa.len(),
            });
        }
        pearson_of(&xa, &xb).map_err(|name_first| {
            if name_first {
                Error::ConstantColumn(a.to_string(), "correlation undefined")
            } else {
                Error::ConstantColumn(b.to_string(), "correlation undefined")
            }
        })
    }

    /// Symmetric correlation matrix over the numeric attributes, unit
    /// diagonal, entries in dataset order.
    pub fn correlation_matrix(&self) -> Result<CorrelationMatrix> {
        let numeric = self.numeric_attributes();
        if numeric.len() < 2 {
            return Err(Error::AttributeMismatch(
                "correlation matrix needs at least two numeric attributes".into(),
            ));
        }
        let names: Vec<String> = numeric.iter().map(|s| s.name.clone()).collect();
        let cols: Vec<Vec<f64>> = names
            .iter()
            .map(|n| self.numeric_column(n))
            .collect::<Result<_>>()?;
        if self.n_rows() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: self.n_rows(),
            });
        }
        let k = names.len();
        let mut m = vec![vec![0.0; k]; k];
        for i in 0..k {
            m[i][i] = 1.0;
            for j in i + 1..k {
                let r = pearson_of(&cols[i], &cols[j]).map_err(|first| {
                    let name = if first { &names[i] } else { &names[j] };
                    Error::ConstantColumn(name.clone(), "correlation matrix undefined")
                })?;
                m[i][j] = r;
                m[j][i] = r;
            }
        }
        let stddevs = cols.iter().map(|c| stats_of(c).stddev).collect();
        Ok(CorrelationMatrix {
            names,
            values: m,
            stddevs,
        })
    }
}

fn stats_of(col: &[f64]) -> ColumnStats {
    let n = col.len();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in col {
        min = min.min(v);
        max = max.max(v);
        sum += v;
    }
    let mean = sum / n as f64;
    let stddev = if n < 2 {
        0.0
    } else {
        let ss: f64 = col.iter().map(|&v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    ColumnStats {
        min,
        max,
        mean,
        stddev,
        n,
    }
}

/// Err(true) means the first column is constant, Err(false) the second.
fn pearson_of(xa: &[f64], xb: &[f64]) -> std::result::Result<f64, bool> {
    let n = xa.len() as f64;
    let ma = xa.iter().sum::<f64>() / n;
    let mb = xb.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&a, &b) in xa.iter().zip(xb) {
        let da = a - ma;
        let db = b - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if saa == 0.0 {
        return Err(true);
    }
    if sbb == 0.0 {
        return Err(false);
    }
    Ok(sab / (saa * sbb).sqrt())
}
