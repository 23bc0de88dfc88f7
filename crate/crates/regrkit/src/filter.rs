//! Min-max normalization and z-score standardization with exact inverses.
//!
//! A fitted [`FilterModel`] records per-attribute parameters for every
//! filtered attribute, including the target; applying it never refits, and
//! out-of-range values extrapolate linearly (no clamping), so forecasting
//! beyond the fitted range stays well-defined.

use crate::dataset::{AttributeKind, Dataset, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    None,
    Normalize,
    Standardize,
}

impl FilterKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FilterKind::None => "none",
            FilterKind::Normalize => "normalize",
            FilterKind::Standardize => "standardize",
        }
    }

    pub fn parse(s: &str) -> Option<FilterKind> {
        match s {
            "none" => Some(FilterKind::None),
            "normalize" => Some(FilterKind::Normalize),
            "standardize" => Some(FilterKind::Standardize),
            _ => None,
        }
    }
}

/// Per-attribute scaling parameters: (min, max) for normalize,
/// (mean, stddev) for standardize.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterModel {
    pub kind: FilterKind,
    pub params: Vec<(String, f64, f64)>,
}

impl FilterModel {
    pub fn identity() -> Self {
        FilterModel {
            kind: FilterKind::None,
            params: Vec::new(),
        }
    }

    /// Fits scaling parameters for `attrs` (normally the model inputs plus
    /// the target) from `d`. `kind = None` records nothing.
    pub fn fit(d: &Dataset, kind: FilterKind, attrs: &[String]) -> Result<Self> {
        if kind == FilterKind::None {
            return Ok(FilterModel::identity());
        }
        if d.n_rows() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: d.n_rows(),
            });
        }
        let mut params = Vec::with_capacity(attrs.len());
        for name in attrs {
            let s = d.column_stats(name)?;
            match kind {
                FilterKind::Normalize => {
                    if s.max <= s.min {
                        return Err(Error::ConstantColumn(name.clone(), "cannot normalize"));
                    }
                    params.push((name.clone(), s.min, s.max));
                }
                FilterKind::Standardize => {
                    if s.stddev <= 0.0 {
                        return Err(Error::ConstantColumn(name.clone(), "cannot standardize"));
                    }
                    params.push((name.clone(), s.mean, s.stddev));
                }
                FilterKind::None => unreachable!(),
            }
        }
        Ok(FilterModel { kind, params })
    }

    fn param(&self, attr: &str) -> Result<(f64, f64)> {
        self.params
            .iter()
            .find(|(n, _, _)| n == attr)
            .map(|&(_, a, b)| (a, b))
            .ok_or_else(|| Error::UnknownAttribute(attr.to_string()))
    }

    /// Filtered-space image of a raw value. Identity for `kind = None` or
    /// attributes the filter was not fitted on.
    pub fn transform(&self, attr: &str, x: f64) -> f64 {
        match self.kind {
            FilterKind::None => x,
            FilterKind::Normalize => match self.param(attr) {
                Ok((min, max)) => (x - min) / (max - min),
                Err(_) => x,
            },
            FilterKind::Standardize => match self.param(attr) {
                Ok((mean, sd)) => (x - mean) / sd,
                Err(_) => x,
            },
        }
    }

    /// Applies the filter to every fitted attribute of `d`; label columns and
    /// unfitted columns pass through. Errors if `d` lacks a fitted attribute.
    pub fn apply(&self, d: &Dataset) -> Result<Dataset> {
        for (name, _, _) in &self.params {
            let spec = d.attribute(name).map_err(|_| {
                Error::AttributeMismatch(format!("dataset lacks attribute '{name}'"))
            })?;
            if spec.kind != AttributeKind::Numeric {
                return Err(Error::AttributeMismatch(format!(
                    "attribute '{name}' is not numeric in this dataset"
                )));
            }
        }
        let specs = d.attributes().to_vec();
        let rows = d
            .rows()
            .iter()
            .map(|row| {
                specs
                    .iter()
                    .map(|spec| match &row[spec.index] {
                        Value::Num(x) => Value::Num(self.transform(&spec.name, *x)),
                        Value::Text(t) => Value::Text(t.clone()),
                    })
                    .collect()
            })
            .collect();
        Dataset::new(specs, rows)
    }

    /// Exact inverse of [`FilterModel::transform`] on `attr`.
    pub fn invert(&self, attr: &str, v: f64) -> Result<f64> {
        match self.kind {
            FilterKind::None => Ok(v),
            FilterKind::Normalize => {
                let (min, max) = self.param(attr)?;
                Ok(min + v * (max - min))
            }
            FilterKind::Standardize => {
                let (mean, sd) = self.param(attr)?;
                Ok(mean + v * sd)
            }
        }
    }
}
