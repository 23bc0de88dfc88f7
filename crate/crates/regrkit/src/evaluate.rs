//! Per-instance prediction tables, the evaluation correlation coefficient,
//! and the growth/profit report.

use crate::dataset::{Dataset, Value};
use crate::error::{Error, Result};
use crate::model_io::Model;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub actual: f64,
    pub predicted: f64,
    /// predicted - actual, exactly.
    pub difference: f64,
    /// 100 * (predicted - actual) / actual, full precision.
    pub error_pct: f64,
}

/// One prediction row per instance, in dataset order. Rows with a zero
/// actual are rejected (their error percent is undefined).
pub fn evaluate_model(model: &Model, d: &Dataset) -> Result<Vec<PredictionRow>> {
    let actuals = d.numeric_column(model.target())?;
    let mut rows = Vec::with_capacity(actuals.len());
    for (r, &actual) in actuals.iter().enumerate() {
        if actual == 0.0 {
            return Err(Error::ZeroActual(r));
        }
        let predicted = model.predict(d, r)?;
        let difference = predicted - actual;
        rows.push(PredictionRow {
            actual,
            predicted,
            difference,
            error_pct: 100.0 * difference / actual,
        });
    }
    Ok(rows)
}

/// Display convention of the published analysis tables: predictions are
/// shown as the ceiling integer.
pub fn display_prediction(v: f64) -> i64 {
    v.ceil() as i64
}

/// Error percent in thousandths from the displayed (integer) prediction
/// difference, rounded away from zero -- the print convention of the
/// published tables. Integer arithmetic keeps exact boundaries exact.
pub fn error_pct_millis(diff: i64, actual: i64) -> i64 {
    let num = diff as i128 * 100_000;
    let den = actual as i128;
    debug_assert!(den != 0);
    let sign = num.signum() * den.signum();
    let q = (num.abs() + den.abs() - 1) / den.abs();
    (sign * q) as i64
}

/// Renders thousandths as a 3-decimal percent string.
pub fn format_millis(millis: i64) -> String {
    let sign = if millis < 0 { "-" } else { "" };
    let a = millis.unsigned_abs();
    format!("{sign}{}.{:03}", a / 1000, a % 1000)
}

/// Pearson correlation between the predicted and actual vectors.
pub fn correlation_coefficient(rows: &[PredictionRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: rows.len(),
        });
    }
    let n = rows.len() as f64;
    let ma = rows.iter().map(|r| r.actual).sum::<f64>() / n;
    let mp = rows.iter().map(|r| r.predicted).sum::<f64>() / n;
    let mut sap = 0.0;
    let mut saa = 0.0;
    let mut spp = 0.0;
    for r in rows {
        let da = r.actual - ma;
        let dp = r.predicted - mp;
        sap += da * dp;
        saa += da * da;
        spp += dp * dp;
    }
    if saa == 0.0 {
        return Err(Error::ConstantVector("actual"));
    }
    if spp == 0.0 {
        return Err(Error::ConstantVector("prediction"));
    }
    Ok(sap / (saa * spp).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Nil,
    Inc,
    Dec,
    Flat,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Nil => "NIL",
            Trend::Inc => "INC",
            Trend::Dec => "DEC",
            Trend::Flat => "FLAT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub label: String,
    pub page_views: f64,
    pub total_cost: f64,
    /// ceil(total_cost / c0) where c0 is the baseline cost per page view.
    pub estimated_views: i64,
    pub diff: f64,
    /// ceil(100 * diff / page_views); exact integer quotients are unchanged.
    pub profit_pct: i64,
    pub trend: Trend,
}

/// Builds the growth table: per-row spend summed over `cost_attrs`, page-view
/// equivalents of that spend at the baseline-month rate, and the profit
/// trend. `baseline_row` is 1-based.
pub fn growth_report(
    d: &Dataset,
    pv_attr: &str,
    cost_attrs: &[String],
    baseline_row: usize,
) -> Result<Vec<GrowthRow>> {
    if cost_attrs.is_empty() {
        return Err(Error::AttributeMismatch("no cost attributes given".into()));
    }
    let n = d.n_rows();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if baseline_row == 0 || baseline_row > n {
        return Err(Error::RowOutOfRange(baseline_row, n));
    }
    let pv = d.numeric_column(pv_attr)?;
    let cost_cols: Vec<Vec<f64>> = cost_attrs
        .iter()
        .map(|a| d.numeric_column(a))
        .collect::<Result<_>>()?;
    for (a, col) in cost_attrs.iter().zip(&cost_cols) {
        if let Some((row, &value)) = col.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::NegativeCost {
                attribute: a.clone(),
                row,
                value,
            });
        }
    }
    let total_cost: Vec<f64> = (0..n)
        .map(|r| cost_cols.iter().map(|c| c[r]).sum())
        .collect();

    let pv_base = pv[baseline_row - 1];
    let cost_base = total_cost[baseline_row - 1];
    if pv_base <= 0.0 || cost_base <= 0.0 {
        return Err(Error::ZeroBaseline(baseline_row));
    }

    let label_attr = d.label_attribute();
    let mut out = Vec::with_capacity(n);
    let mut prev_profit: Option<i64> = None;
    for r in 0..n {
        if pv[r] <= 0.0 {
            return Err(Error::ZeroActual(r));
        }
        // grouped so the quotient is rounded once; dividing by a precomputed
        // c0 = cost_base/pv_base can push exact integers across the ceiling
        let estimated = (total_cost[r] * pv_base / cost_base).ceil() as i64;
        let diff = pv[r] - estimated as f64;
        let profit_pct = (100.0 * diff / pv[r]).ceil() as i64;
        let trend = match prev_profit {
            None => Trend::Nil,
            Some(p) if profit_pct > p => Trend::Inc,
            Some(p) if profit_pct < p => Trend::Dec,
            Some(_) => Trend::Flat,
        };
        prev_profit = Some(profit_pct);
        let label = match label_attr {
            Some(spec) => match &d.rows()[r][spec.index] {
                Value::Text(t) => t.clone(),
                Value::Num(v) => v.to_string(),
            },
            None => (r + 1).to_string(),
        };
        out.push(GrowthRow {
            label,
            page_views: pv[r],
            total_cost: total_cost[r],
            estimated_views: estimated,
            diff,
            profit_pct,
            trend,
        });
    }
    Ok(out)
}

/// CSV rendering of a prediction table: `actual,predicted,difference,error_pct`.
pub fn prediction_table_csv(rows: &[PredictionRow]) -> String {
    let mut out = String::from("actual,predicted,difference,error_pct\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.actual, r.predicted, r.difference, r.error_pct
        ));
    }
    out
}

/// CSV rendering of a growth table:
/// `label,page_views,total_cost,estimated_views,diff,profit_pct,trend`.
pub fn growth_table_csv(rows: &[GrowthRow]) -> String {
    let mut out =
        String::from("label,page_views,total_cost,estimated_views,diff,profit_pct,trend\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_escape(&r.label),
            r.page_views,
            r.total_cost,
            r.estimated_views,
            r.diff,
            r.profit_pct,
            r.trend.as_str()
        ));
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
