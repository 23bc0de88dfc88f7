//! Epsilon-insensitive support vector regression trained by sequential
//! minimal optimization, linear kernel.
//!
//! The solver works on the compact duals beta_i = alpha_i - alpha_i* in
//! [-C, C] with sum(beta) = 0. Each instance admits an interval of feasible
//! bias values derived from the KKT conditions (E_i = w.x_i - y_i):
//!
//!   beta = 0        ->  [-E-eps, -E+eps]
//!   0 < beta < C    ->  {-E-eps}
//!   beta = C        ->  (-inf, -E-eps]
//!   -C < beta < 0   ->  {-E+eps}
//!   beta = -C       ->  [-E+eps, +inf)
//!
//! The solution is optimal when the intervals intersect; the maximal
//! violating pair is (argmax lower bound, argmin upper bound), and the
//! violation is half the gap between them. Each step increases beta of the
//! first index and decreases beta of the second by the analytic minimizer of
//! the piecewise-quadratic one-dimensional restriction (the epsilon-|beta|
//! term contributes slope kinks where a beta crosses zero), clipped to the
//! box. At termination the bias sits midway between the two bounds.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::filter::{FilterKind, FilterModel};

#[derive(Debug, Clone, PartialEq)]
pub struct SvrParams {
    /// Box constraint on each dual.
    pub c: f64,
    /// Half-width of the insensitive tube, in filtered target units.
    pub epsilon: f64,
    /// KKT violation threshold for convergence.
    pub tolerance: f64,
    /// Pair-update budget before the solver reports non-convergence.
    pub max_passes: usize,
    /// Verify dual-objective monotonicity after every pair update.
    pub debug_checks: bool,
}

impl Default for SvrParams {
    fn default() -> Self {
        SvrParams {
            c: 1.0,
            epsilon: 1e-3,
            tolerance: 1e-3,
            max_passes: 10_000_000,
            debug_checks: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvrModel {
    pub target: String,
    /// Model inputs, dataset order preserved from the fit call.
    pub attrs: Vec<String>,
    /// Weights in filtered space, one per attribute in `attrs` order.
    pub weights: Vec<f64>,
    /// Bias in filtered target units.
    pub bias: f64,
    pub filter: FilterModel,
    pub params: SvrParams,
    /// Per-instance duals beta_i = alpha_i - alpha_i*; empty when the model
    /// was loaded from a file.
    pub duals: Vec<f64>,
}

pub fn fit_smoreg(
    d: &Dataset,
    target: &str,
    attrs: &[String],
    filter_kind: FilterKind,
    params: SvrParams,
) -> Result<SvrModel> {
    if attrs.is_empty() {
        return Err(Error::AttributeMismatch("no input attributes given".into()));
    }
    if attrs.iter().any(|a| a == target) {
        return Err(Error::AttributeMismatch(format!(
            "target '{target}' cannot be an input"
        )));
    }
    if d.n_rows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: d.n_rows(),
        });
    }
    if !params.c.is_finite() || params.c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "C must be > 0, got {}",
            params.c
        )));
    }
    if !params.epsilon.is_finite() || params.epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be >= 0, got {}",
            params.epsilon
        )));
    }
    if !params.tolerance.is_finite() || params.tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be > 0, got {}",
            params.tolerance
        )));
    }

    let mut filtered_attrs: Vec<String> = attrs.to_vec();
    filtered_attrs.push(target.to_string());
    let filter = FilterModel::fit(d, filter_kind, &filtered_attrs)?;

    let n = d.n_rows();
    let p = attrs.len();
    let mut x = vec![vec![0.0; p]; n];
    let mut y = vec![0.0; n];
    for r in 0..n {
        for (j, a) in attrs.iter().enumerate() {
            x[r][j] = filter.transform(a, d.numeric_value(r, a)?);
        }
        y[r] = filter.transform(target, d.numeric_value(r, target)?);
    }

    let solved = Solver::new(&x, &y, &params).run()?;
    Ok(SvrModel {
        target: target.to_string(),
        attrs: attrs.to_vec(),
        weights: solved.weights,
        bias: solved.bias,
        filter,
        params,
        duals: solved.duals,
    })
}

impl SvrModel {
    /// Filters the inputs, evaluates w.x + b, and maps the result back to raw
    /// target units.
    pub fn predict(&self, d: &Dataset, row: usize) -> Result<f64> {
        let mut s = self.bias;
        for (a, w) in self.attrs.iter().zip(&self.weights) {
            s += w * self.filter.transform(a, d.numeric_value(row, a)?);
        }
        self.filter.invert(&self.target, s)
    }

    /// Weight equation with 4-decimal coefficients, filter prefix included.
    pub fn equation(&self) -> String {
        let prefix = match self.filter.kind {
            FilterKind::None => "",
            FilterKind::Normalize => "(normalized) ",
            FilterKind::Standardize => "(standardized) ",
        };
        let mut s = String::from("weights (not support vectors):");
        for (a, w) in self.attrs.iter().zip(&self.weights) {
            s.push_str(&format!("\n  {w:+.4} * {prefix}{a}"));
        }
        s.push_str(&format!("\n  {:+.4}", self.bias));
        s
    }
}

/// Recomputes the maximum KKT violation of `m` on `d` in filtered space:
/// the largest distance by which the model bias falls outside an instance's
/// admissible interval. A converged fit reports at most `params.tolerance`.
pub fn kkt_report(m: &SvrModel, d: &Dataset) -> Result<f64> {
    let n = d.n_rows();
    if m.duals.len() != n {
        return Err(Error::MissingDuals(n));
    }
    let eps = m.params.epsilon;
    let c = m.params.c;
    let mut max_violation: f64 = 0.0;
    for r in 0..n {
        let mut f = 0.0;
        for (a, w) in m.attrs.iter().zip(&m.weights) {
            f += w * m.filter.transform(a, d.numeric_value(r, a)?);
        }
        let e = f - m
            .filter
            .transform(&m.target, d.numeric_value(r, &m.target)?);
        let beta = m.duals[r];
        let low = if beta >= c {
            f64::NEG_INFINITY
        } else if beta < 0.0 {
            -e + eps
        } else {
            -e - eps
        };
        let up = if beta <= -c {
            f64::INFINITY
        } else if beta > 0.0 {
            -e - eps
        } else {
            -e + eps
        };
        max_violation = max_violation.max(low - m.bias).max(m.bias - up);
    }
    Ok(max_violation)
}

struct Solved {
    weights: Vec<f64>,
    bias: f64,
    duals: Vec<f64>,
}

struct Solver<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    c: f64,
    eps: f64,
    tol: f64,
    max_passes: usize,
    debug_checks: bool,
    n: usize,
    kernel: Vec<f64>, // n x n, row-major
    beta: Vec<f64>,
    f: Vec<f64>, // w.x_i, maintained incrementally
}

/// Incremental f/beta state is recomputed from scratch this often to cap
/// floating-point drift.
const REFRESH_INTERVAL: usize = 4096;

impl<'a> Solver<'a> {
    fn new(x: &'a [Vec<f64>], y: &'a [f64], params: &SvrParams) -> Self {
        let n = x.len();
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = dot(&x[i], &x[j]);
                kernel[i * n + j] = k;
                kernel[j * n + i] = k;
            }
        }
        Solver {
            x,
            y,
            c: params.c,
            eps: params.epsilon,
            tol: params.tolerance,
            max_passes: params.max_passes,
            debug_checks: params.debug_checks,
            n,
            kernel,
            beta: vec![0.0; n],
            f: vec![0.0; n],
        }
    }

    fn bounds_of(&self, i: usize) -> (f64, f64) {
        let e = self.f[i] - self.y[i];
        let beta = self.beta[i];
        let low = if beta >= self.c {
            f64::NEG_INFINITY
        } else if beta < 0.0 {
            -e + self.eps
        } else {
            -e - self.eps
        };
        let up = if beta <= -self.c {
            f64::INFINITY
        } else if beta > 0.0 {
            -e - self.eps
        } else {
            -e + self.eps
        };
        (low, up)
    }

    /// Maximal violating pair: (argmax low, max low, argmin up, min up).
    /// Ties go to the lowest index.
    fn violating_pair(&self) -> (usize, f64, usize, f64) {
        let mut i = 0;
        let mut b_low = f64::NEG_INFINITY;
        let mut j = 0;
        let mut b_up = f64::INFINITY;
        for k in 0..self.n {
            let (low, up) = self.bounds_of(k);
            if low > b_low {
                b_low = low;
                i = k;
            }
            if up < b_up {
                b_up = up;
                j = k;
            }
        }
        (i, b_low, j, b_up)
    }

    fn refresh(&mut self) -> Vec<f64> {
        let p = self.x[0].len();
        let mut w = vec![0.0; p];
        for (i, &b) in self.beta.iter().enumerate() {
            if b != 0.0 {
                for (wk, xk) in w.iter_mut().zip(&self.x[i]) {
                    *wk += b * xk;
                }
            }
        }
        for i in 0..self.n {
            self.f[i] = dot(&w, &self.x[i]);
        }
        w
    }

    fn dual_objective(&self) -> f64 {
        let mut quad = 0.0;
        let mut l1 = 0.0;
        let mut lin = 0.0;
        for i in 0..self.n {
            quad += self.beta[i] * self.f[i];
            l1 += self.beta[i].abs();
            lin += self.y[i] * self.beta[i];
        }
        -0.5 * quad - self.eps * l1 + lin
    }

    /// Analytic minimizer of the restriction to beta_i += d, beta_j -= d,
    /// d in [0, dmax]. `gap` is b_low - b_up > 0, so the initial slope -gap
    /// is strictly negative and some progress is always possible.
    fn step_size(&self, i: usize, j: usize, gap: f64) -> f64 {
        let eta = self.kernel[i * self.n + i] + self.kernel[j * self.n + j]
            - 2.0 * self.kernel[i * self.n + j];
        let dmax = (self.c - self.beta[i]).min(self.beta[j] + self.c);
        let s0 = -gap;

        // slope kinks from the epsilon*|beta| terms
        let mut kinks = [f64::INFINITY; 2];
        let mut nk = 0;
        if self.beta[i] < 0.0 {
            kinks[nk] = -self.beta[i];
            nk += 1;
        }
        if self.beta[j] > 0.0 {
            kinks[nk] = self.beta[j];
            nk += 1;
        }
        kinks[..nk].sort_by(f64::total_cmp);

        let mut segment_start = 0.0;
        let mut crossed = 0usize;
        loop {
            let segment_end = if crossed < nk && kinks[crossed] < dmax {
                kinks[crossed]
            } else {
                dmax
            };
            let slope_start = s0 + eta * segment_start + 2.0 * self.eps * crossed as f64;
            if slope_start >= 0.0 {
                return segment_start;
            }
            if eta > 0.0 {
                let candidate = segment_start + (-slope_start) / eta;
                if candidate <= segment_end {
                    return candidate;
                }
            }
            if segment_end >= dmax {
                return dmax;
            }
            segment_start = segment_end;
            crossed += 1;
        }
    }

    fn run(mut self) -> Result<Solved> {
        let mut updates = 0usize;
        let mut since_refresh = 0usize;
        let mut prev_objective = 0.0_f64;
        loop {
            let (mut i, mut b_low, mut j, mut b_up) = self.violating_pair();
            let mut gap = b_low - b_up;
            if gap <= 2.0 * self.tol {
                // confirm on freshly recomputed state before accepting
                let weights = self.refresh();
                since_refresh = 0;
                let pair = self.violating_pair();
                (i, b_low, j, b_up) = pair;
                gap = b_low - b_up;
                if gap <= 2.0 * self.tol {
                    return Ok(Solved {
                        weights,
                        bias: 0.5 * (b_low + b_up),
                        duals: self.beta,
                    });
                }
            }
            if updates >= self.max_passes {
                return Err(Error::NonConvergence {
                    updates,
                    violation: gap / 2.0,
                });
            }
            let d = self.step_size(i, j, gap);
            if d.is_nan() || d <= 0.0 {
                // no representable progress left at this precision
                return Err(Error::NonConvergence {
                    updates,
                    violation: gap / 2.0,
                });
            }
            self.beta[i] = (self.beta[i] + d).min(self.c);
            self.beta[j] = (self.beta[j] - d).max(-self.c);
            for k in 0..self.n {
                self.f[k] += d * (self.kernel[i * self.n + k] - self.kernel[j * self.n + k]);
            }
            updates += 1;
            since_refresh += 1;
            if since_refresh >= REFRESH_INTERVAL {
                self.refresh();
                since_refresh = 0;
            }
            if self.debug_checks {
                let obj = self.dual_objective();
                if obj < prev_objective - 1e-10 * prev_objective.abs().max(1.0) {
                    return Err(Error::ObjectiveDecreased {
                        update: updates,
                        from: prev_objective,
                        to: obj,
                    });
                }
                prev_objective = obj;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
