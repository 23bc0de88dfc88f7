//! Correlation-based feature subset selection.
//!
//! Subsets are scored by how strongly their attributes correlate with the
//! target and how little they correlate with each other. The search-facing
//! evaluator weights each attribute by its column stddev,
//!
//!   merit_w(S) = sum_i s_i*|r_ic| / sqrt(sum_i s_i^2 + 2*sum_{i<j} s_i*s_j*|r_ij|),
//!
//! which reduces exactly to the classic form k*rcf / sqrt(k + k(k-1)*rff)
//! when all stddevs coincide (standardized data); [`cfs_merit`] exposes that
//! classic form. Search is best-first from the empty set with a staleness
//! cutoff, followed by the locally-predictive augmentation pass.

use crate::dataset::{AttributeKind, CorrelationMatrix, Dataset};
use crate::error::{Error, Result};

/// Classic (unweighted) CFS merit of `subset` for `target`, using mean
/// absolute correlations. The empty subset scores 0 by convention.
pub fn cfs_merit(corr: &CorrelationMatrix, subset: &[String], target: &str) -> Result<f64> {
    if subset.is_empty() {
        return Ok(0.0);
    }
    let t = corr.index_of(target)?;
    let idx: Vec<usize> = subset
        .iter()
        .map(|s| corr.index_of(s))
        .collect::<Result<_>>()?;
    let k = idx.len() as f64;
    let rcf = idx.iter().map(|&i| corr.get(i, t).abs()).sum::<f64>() / k;
    if idx.len() == 1 {
        return Ok(rcf);
    }
    let mut rff = 0.0;
    let mut pairs = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            rff += corr.get(i, j).abs();
            pairs += 1.0;
        }
    }
    rff /= pairs;
    Ok(k * rcf / (k + k * (k - 1.0) * rff).sqrt())
}

/// Stddev-weighted merit over candidate indices (positions in `corr`).
fn weighted_merit(corr: &CorrelationMatrix, members: &[usize], target: usize) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let s = &corr.stddevs;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, &i) in members.iter().enumerate() {
        num += s[i] * corr.get(i, target).abs();
        den += s[i] * s[i];
        for &j in &members[a + 1..] {
            den += 2.0 * s[i] * s[j] * corr.get(i, j).abs();
        }
    }
    if den <= 0.0 {
        0.0
    } else {
        num / den.sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct CfsResult {
    /// Selected attributes, dataset order.
    pub selected: Vec<String>,
    /// 1-based positions among the numeric attributes (label columns do not
    /// count), the numbering the usual tools print.
    pub indices: Vec<usize>,
    /// Weighted evaluator merit of the final subset.
    pub merit: f64,
    /// (subset, merit) pairs in evaluation order during the search phase.
    pub trace: Vec<(Vec<String>, f64)>,
}

pub const DEFAULT_STALE_LIMIT: usize = 5;

/// Best-first search over subsets of `candidates`, expanding by single
/// additions from the empty set; stops after `stale_limit` consecutive
/// expansions that fail to improve the best merit seen. Ties keep the
/// earlier (lower attribute index) subset.
pub fn best_first_search(
    corr: &CorrelationMatrix,
    candidates: &[String],
    target: &str,
    stale_limit: usize,
) -> Result<(Vec<String>, f64)> {
    let (best_mask, merit, _) = search_with_trace(corr, candidates, target, stale_limit)?;
    Ok((mask_names(best_mask, candidates), merit))
}

fn mask_names(mask: u64, candidates: &[String]) -> Vec<String> {
    (0..candidates.len())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| candidates[i].clone())
        .collect()
}

type SearchOutcome = (u64, f64, Vec<(Vec<String>, f64)>);

fn search_with_trace(
    corr: &CorrelationMatrix,
    candidates: &[String],
    target: &str,
    stale_limit: usize,
) -> Result<SearchOutcome> {
    if candidates.is_empty() {
        return Err(Error::AttributeMismatch("no candidate attributes".into()));
    }
    if candidates.len() > 63 {
        return Err(Error::InvalidParameter(format!(
            "best-first search supports at most 63 candidates, got {}",
            candidates.len()
        )));
    }
    let t = corr.index_of(target)?;
    let cand_idx: Vec<usize> = candidates
        .iter()
        .map(|c| corr.index_of(c))
        .collect::<Result<_>>()?;
    if cand_idx.contains(&t) {
        return Err(Error::AttributeMismatch(format!(
            "target '{target}' cannot be a candidate"
        )));
    }

    let evaluate = |mask: u64| -> f64 {
        let members: Vec<usize> = (0..candidates.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| cand_idx[i])
            .collect();
        weighted_merit(corr, &members, t)
    };

    let mut trace: Vec<(Vec<String>, f64)> = Vec::new();
    let mut visited: std::collections::HashSet<u64> = std::collections::HashSet::new();
    // open list entries: (merit, mask); popped by best merit, ties by smaller mask
    let mut open: Vec<(f64, u64)> = vec![(0.0, 0)];
    visited.insert(0);
    let mut best_mask = 0u64;
    let mut best_merit = 0.0f64;
    let mut stale = 0usize;

    while stale < stale_limit {
        let Some(pos) = open
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(p, _)| p)
        else {
            break;
        };
        let (_, mask) = open.swap_remove(pos);
        let mut improved = false;
        for i in 0..candidates.len() {
            let bit = 1u64 << i;
            if mask & bit != 0 {
                continue;
            }
            let child = mask | bit;
            if !visited.insert(child) {
                continue;
            }
            let merit = evaluate(child);
            trace.push((mask_names(child, candidates), merit));
            open.push((merit, child));
            if merit > best_merit {
                best_merit = merit;
                best_mask = child;
                improved = true;
            }
        }
        if improved {
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok((best_mask, best_merit, trace))
}

/// Augments `selected` with every unselected candidate whose absolute
/// correlation with the target exceeds its absolute correlation with each
/// already-accepted attribute. Candidates are visited in decreasing target
/// correlation, and accepted attributes join the comparison set immediately.
pub fn add_locally_predictive(
    corr: &CorrelationMatrix,
    selected: &[String],
    candidates: &[String],
    target: &str,
) -> Result<Vec<String>> {
    let t = corr.index_of(target)?;
    let mut current: Vec<usize> = selected
        .iter()
        .map(|s| corr.index_of(s))
        .collect::<Result<_>>()?;
    let mut rest: Vec<usize> = candidates
        .iter()
        .map(|c| corr.index_of(c))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|i| !current.contains(i))
        .collect();
    rest.sort_by(|&a, &b| {
        corr.get(b, t)
            .abs()
            .total_cmp(&corr.get(a, t).abs())
            .then(a.cmp(&b))
    });
    let mut out: Vec<String> = selected.to_vec();
    for a in rest {
        let with_target = corr.get(a, t).abs();
        let with_selected = current
            .iter()
            .map(|&s| corr.get(a, s).abs())
            .fold(0.0f64, f64::max);
        if with_target > with_selected {
            current.push(a);
            out.push(corr.names[a].clone());
        }
    }
    Ok(out)
}

/// Full selection pipeline: correlation matrix, best-first search, then the
/// locally-predictive pass. The result lists attributes in dataset order.
pub fn cfs_select(d: &Dataset, target: &str) -> Result<CfsResult> {
    let spec = d.attribute(target)?;
    if spec.kind != AttributeKind::Numeric {
        return Err(Error::NotNumeric(target.to_string()));
    }
    let corr = d.correlation_matrix()?;
    let candidates: Vec<String> = corr
        .names
        .iter()
        .filter(|n| n.as_str() != target)
        .cloned()
        .collect();
    if candidates.is_empty() {
        return Err(Error::AttributeMismatch(
            "need at least one numeric non-target attribute".into(),
        ));
    }
    let (mask, _, trace) = search_with_trace(&corr, &candidates, target, DEFAULT_STALE_LIMIT)?;
    let searched = mask_names(mask, &candidates);
    let augmented = add_locally_predictive(&corr, &searched, &candidates, target)?;

    let mut selected: Vec<String> = corr
        .names
        .iter()
        .filter(|n| augmented.contains(n))
        .cloned()
        .collect();
    selected.dedup();
    let indices: Vec<usize> = selected
        .iter()
        .map(|s| corr.index_of(s).map(|i| i + 1))
        .collect::<Result<_>>()?;
    let member_idx: Vec<usize> = selected
        .iter()
        .map(|s| corr.index_of(s))
        .collect::<Result<_>>()?;
    let merit = weighted_merit(&corr, &member_idx, corr.index_of(target)?);
    Ok(CfsResult {
        selected,
        indices,
        merit,
        trace,
    })
}
