//! Ordinary least squares with optional stepwise attribute elimination.
//!
//! Fitting solves the mean-centered normal equations (Gaussian elimination
//! with partial pivoting); a singular system is retried once with a ridge of
//! 1e-8 * trace/p on the diagonal. Subset selection scores candidates with
//! the scaled-SSE Akaike criterion `SSE_S/SSE_full * (n - p_full) + 2(|S|+1)`
//! anchored at the full candidate model, either greedily (backward
//! elimination) or by exhaustive enumeration.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Largest candidate set `Selection::Exhaustive` will enumerate.
pub const EXHAUSTIVE_GUARD: usize = 20;

const SINGULAR_TOL: f64 = 1e-12;
const RIDGE_SCALE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub target: String,
    /// (attribute, coefficient) pairs in dataset order.
    pub terms: Vec<(String, f64)>,
    pub intercept: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    None,
    Greedy,
    Exhaustive,
}

impl Selection {
    pub fn parse(s: &str) -> Option<Selection> {
        match s {
            "none" => Some(Selection::None),
            "greedy" => Some(Selection::Greedy),
            "exhaustive" => Some(Selection::Exhaustive),
            _ => None,
        }
    }
}

impl LinearModel {
    /// intercept + sum of coefficient * value over the model terms.
    pub fn predict(&self, d: &Dataset, row: usize) -> Result<f64> {
        let mut y = self.intercept;
        for (name, coef) in &self.terms {
            y += coef * d.numeric_value(row, name)?;
        }
        Ok(y)
    }

    /// One-line equation with coefficients at 4 decimals, print style of the
    /// usual regression tools.
    pub fn equation(&self) -> String {
        let mut s = format!("{} =", self.target);
        for (name, coef) in &self.terms {
            s.push_str(&format!("\n  {coef:+.4} * {name}"));
        }
        s.push_str(&format!("\n  {:+.4}", self.intercept));
        s
    }
}

/// Least-squares fit of `target` on `attrs` (all numeric, target excluded).
pub fn fit_ols(d: &Dataset, target: &str, attrs: &[String]) -> Result<LinearModel> {
    if attrs.is_empty() {
        return Err(Error::AttributeMismatch(
            "no regressor attributes given".into(),
        ));
    }
    if attrs.iter().any(|a| a == target) {
        return Err(Error::AttributeMismatch(format!(
            "target '{target}' cannot be a regressor"
        )));
    }
    if let Some(dup) = attrs
        .iter()
        .enumerate()
        .find(|(i, a)| attrs[..*i].contains(a))
    {
        return Err(Error::DuplicateAttribute(dup.1.clone()));
    }
    let y = d.numeric_column(target)?;
    let cols: Vec<Vec<f64>> = attrs
        .iter()
        .map(|a| d.numeric_column(a))
        .collect::<Result<_>>()?;
    let n = y.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let p = attrs.len();

    // Mean-center for conditioning; sums are order-independent so the fit is
    // bit-identical under row permutation.
    let xbar: Vec<f64> = cols.iter().map(|c| stable_mean(c)).collect();
    let ybar = stable_mean(&y);

    let mut gram = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    for i in 0..p {
        for j in i..p {
            let mut prods: Vec<f64> = (0..n)
                .map(|r| (cols[i][r] - xbar[i]) * (cols[j][r] - xbar[j]))
                .collect();
            let g = stable_sum(&mut prods);
            gram[i][j] = g;
            gram[j][i] = g;
        }
        let mut prods: Vec<f64> = (0..n)
            .map(|r| (cols[i][r] - xbar[i]) * (y[r] - ybar))
            .collect();
        rhs[i] = stable_sum(&mut prods);
    }

    let coefs = match solve_symmetric(&gram, &rhs) {
        Some(c) => c,
        None => {
            let trace: f64 = (0..p).map(|i| gram[i][i]).sum();
            let lambda = RIDGE_SCALE * trace / p as f64;
            let mut ridged = gram.clone();
            for (i, row) in ridged.iter_mut().enumerate() {
                row[i] += lambda;
            }
            solve_symmetric(&ridged, &rhs).ok_or(Error::DegenerateSystem)?
        }
    };
    if coefs.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateSystem);
    }

    let intercept = ybar - coefs.iter().zip(&xbar).map(|(c, m)| c * m).sum::<f64>();
    Ok(LinearModel {
        target: target.to_string(),
        terms: attrs.iter().cloned().zip(coefs).collect(),
        intercept,
    })
}

/// Gaussian elimination with partial pivoting. None when a pivot falls below
/// `SINGULAR_TOL` times the largest initial diagonal.
#[allow(clippy::needless_range_loop)]
fn solve_symmetric(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let p = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = b.to_vec();
    let max_diag = (0..p).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    let tol = SINGULAR_TOL * max_diag;

    for col in 0..p {
        let pivot_row = (col..p)
            .max_by(|&r1, &r2| m[r1][col].abs().total_cmp(&m[r2][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= tol {
            return None;
        }
        m.swap(col, pivot_row);
        v.swap(col, pivot_row);
        for row in col + 1..p {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..p {
                m[row][k] -= f * m[col][k];
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = vec![0.0; p];
    for col in (0..p).rev() {
        let mut s = v[col];
        for k in col + 1..p {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

/// Sums after sorting by total order, so the result depends only on the
/// multiset of addends (row-order invariance).
fn stable_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

fn stable_mean(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    stable_sum(&mut v) / values.len() as f64
}

fn sse_of(d: &Dataset, model: &LinearModel) -> Result<f64> {
    let y = d.numeric_column(&model.target)?;
    let mut sse = 0.0;
    for (r, &yr) in y.iter().enumerate() {
        let e = model.predict(d, r)? - yr;
        sse += e * e;
    }
    Ok(sse)
}

/// Selection score for subset `S`: the fit term scales the subset SSE by the
/// residual df of the full candidate model, the complexity term charges two
/// per estimated parameter.
fn score(sse_s: f64, subset_len: usize, sse_full: f64, p_full: usize, n: usize) -> f64 {
    let fit = if sse_full > 0.0 {
        sse_s / sse_full * (n.saturating_sub(p_full)) as f64
    } else if sse_s <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    fit + 2.0 * (subset_len + 1) as f64
}

/// Candidate subsets, ordered by (score, size, lexicographic dataset-index
/// order). Indices index into `candidates`.
struct Search<'a> {
    d: &'a Dataset,
    target: &'a str,
    candidates: &'a [String],
    order: Vec<usize>, // dataset attribute index per candidate, for tie-breaks
    sse_full: f64,
    n: usize,
}

impl<'a> Search<'a> {
    fn new(d: &'a Dataset, target: &'a str, candidates: &'a [String]) -> Result<Self> {
        let full = fit_ols(d, target, candidates)?;
        let sse_full = sse_of(d, &full)?;
        let order = candidates
            .iter()
            .map(|c| d.attribute(c).map(|s| s.index))
            .collect::<Result<_>>()?;
        Ok(Search {
            d,
            target,
            candidates,
            order,
            sse_full,
            n: d.n_rows(),
        })
    }

    fn score_subset(&self, subset: &[usize]) -> Result<f64> {
        let names: Vec<String> = subset.iter().map(|&i| self.candidates[i].clone()).collect();
        let model = fit_ols(self.d, self.target, &names)?;
        let sse = sse_of(self.d, &model)?;
        Ok(score(
            sse,
            subset.len(),
            self.sse_full,
            self.candidates.len(),
            self.n,
        ))
    }

    fn tie_key(&self, subset: &[usize]) -> Vec<usize> {
        let mut k: Vec<usize> = subset.iter().map(|&i| self.order[i]).collect();
        k.sort_unstable();
        k
    }
}

/// Backward elimination from the full candidate set: each round drops the
/// attribute whose removal scores best, stopping when no removal improves.
fn select_greedy(search: &Search) -> Result<Vec<usize>> {
    let mut current: Vec<usize> = (0..search.candidates.len()).collect();
    let mut current_score = search.score_subset(&current)?;
    while current.len() > 1 {
        let mut best: Option<(f64, usize)> = None;
        for (pos, _) in current.iter().enumerate() {
            let mut trial = current.clone();
            trial.remove(pos);
            let s = search.score_subset(&trial)?;
            if best.is_none_or(|(bs, _)| s < bs) {
                best = Some((s, pos));
            }
        }
        match best {
            Some((s, pos)) if s < current_score => {
                current.remove(pos);
                current_score = s;
            }
            _ => break,
        }
    }
    Ok(current)
}

fn select_exhaustive(search: &Search) -> Result<Vec<usize>> {
    let k = search.candidates.len();
    if k > EXHAUSTIVE_GUARD {
        return Err(Error::GuardExceeded(k, EXHAUSTIVE_GUARD));
    }
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for mask in 1u32..(1u32 << k) {
        let subset: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        let s = search.score_subset(&subset)?;
        let key = search.tie_key(&subset);
        let better = match &best {
            None => true,
            Some((bs, bkey, _)) => {
                s < *bs
                    || (s == *bs
                        && (key.len() < bkey.len() || (key.len() == bkey.len() && key < *bkey)))
            }
        };
        if better {
            best = Some((s, key, subset));
        }
    }
    Ok(best.expect("at least one subset").2)
}

/// Selected attribute names in dataset order.
pub fn select_attributes(
    d: &Dataset,
    target: &str,
    candidates: &[String],
    mode: Selection,
) -> Result<Vec<String>> {
    if candidates.is_empty() {
        return Err(Error::AttributeMismatch("no candidate attributes".into()));
    }
    let search = Search::new(d, target, candidates)?;
    let mut picked = match mode {
        Selection::None => (0..candidates.len()).collect(),
        Selection::Greedy => select_greedy(&search)?,
        Selection::Exhaustive => select_exhaustive(&search)?,
    };
    picked.sort_by_key(|&i| search.order[i]);
    Ok(picked.iter().map(|&i| candidates[i].clone()).collect())
}

/// Fits `target` on `candidates`, optionally selecting a subset first.
pub fn fit_linreg(
    d: &Dataset,
    target: &str,
    candidates: &[String],
    selection: Selection,
) -> Result<LinearModel> {
    let attrs = match selection {
        Selection::None => candidates.to_vec(),
        _ => select_attributes(d, target, candidates, selection)?,
    };
    fit_ols(d, target, &attrs)
}
