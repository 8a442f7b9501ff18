//! Omega Index and Soft Omega Index.
//!
//! Both count, over all unordered node pairs, how many clusters of each
//! clustering contain the pair. The hard index rewards exact agreement of
//! the two counts; the soft index also credits partial agreement with
//! `min(gn, cn) / max(gn, cn)` and corrects the expected agreement for it.

use rayon::prelude::*;

use crate::align::ClusteringPair;
use crate::error::{Error, Result};
use crate::index::{mutual, NodeIndex};

/// Rows of the pair triangle handled as one unit of work. Fixed so that
/// floating-point partial sums never depend on the worker count.
const BLOCK_ROWS: usize = 64;

/// Pair counts ranked by the number of shared clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct PairProfile {
    /// `ranked_gt[j]`: pairs sharing exactly `j` ground-truth clusters.
    pub ranked_gt: Vec<u64>,
    /// `ranked_cand[j]`: pairs sharing exactly `j` candidate clusters.
    pub ranked_cand: Vec<u64>,
    /// Observed agreement: exact matches (hard) or weighted matches (soft).
    pub agreed: f64,
    /// `N (N - 1) / 2`.
    pub total_pairs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaScore {
    pub value: f64,
    pub observed: f64,
    pub expected: f64,
}

struct Partial {
    ranked_gt: Vec<u64>,
    ranked_cand: Vec<u64>,
    agreed: f64,
}

fn profile_block(
    gt: &NodeIndex,
    cand: &NodeIndex,
    rows: std::ops::Range<usize>,
    soft: bool,
    lens: (usize, usize),
) -> Partial {
    let n = gt.nodes();
    let mut ranked_gt = vec![0u64; lens.0];
    let mut ranked_cand = vec![0u64; lens.1];
    let mut agreed = 0.0;
    for i in rows {
        let (gi, ci) = (gt.relations(i as u32), cand.relations(i as u32));
        for j in i + 1..n {
            let gn = mutual(gi, gt.relations(j as u32));
            let cn = mutual(ci, cand.relations(j as u32));
            if gn == cn {
                agreed += 1.0;
            } else if soft && gn != 0 && cn != 0 {
                agreed += gn.min(cn) as f64 / gn.max(cn) as f64;
            }
            ranked_gt[gn] += 1;
            ranked_cand[cn] += 1;
        }
    }
    Partial {
        ranked_gt,
        ranked_cand,
        agreed,
    }
}

/// Ranked length: the cluster count, extended only when some pair is shared
/// by every cluster of the clustering.
fn trim(mut ranked: Vec<u64>, clusters: usize) -> Vec<u64> {
    let keep = if ranked.get(clusters).copied().unwrap_or(0) > 0 {
        clusters + 1
    } else {
        clusters
    };
    ranked.truncate(keep);
    ranked
}

/// Enumerates all node pairs. `workers > 1` spreads row blocks over a
/// thread pool; the result is bit-identical for every worker count.
pub fn pair_profile(pair: &ClusteringPair, soft: bool, workers: usize) -> Result<PairProfile> {
    let n = pair.nodes();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "{n} node(s), at least 2 required"
        )));
    }
    let (gt, cand) = (&pair.gt.index, &pair.cand.index);
    if gt.nodes() != cand.nodes() {
        return Err(Error::UniverseMismatch {
            only_gt: gt.nodes().saturating_sub(cand.nodes()),
            only_cand: cand.nodes().saturating_sub(gt.nodes()),
        });
    }
    let lens = (pair.gt.len() + 1, pair.cand.len() + 1);
    let blocks: Vec<_> = (0..n)
        .step_by(BLOCK_ROWS)
        .map(|s| s..(s + BLOCK_ROWS).min(n))
        .collect();
    let run = |r: std::ops::Range<usize>| profile_block(gt, cand, r, soft, lens);
    let partials: Vec<Partial> = if workers <= 1 {
        blocks.into_iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| blocks.into_par_iter().map(run).collect())
    };

    let mut ranked_gt = vec![0u64; lens.0];
    let mut ranked_cand = vec![0u64; lens.1];
    let mut agreed = 0.0;
    for p in partials {
        for (a, b) in ranked_gt.iter_mut().zip(&p.ranked_gt) {
            *a += b;
        }
        for (a, b) in ranked_cand.iter_mut().zip(&p.ranked_cand) {
            *a += b;
        }
        agreed += p.agreed;
    }
    Ok(PairProfile {
        ranked_gt: trim(ranked_gt, pair.gt.len()),
        ranked_cand: trim(ranked_cand, pair.cand.len()),
        agreed,
        total_pairs: (n as u64) * (n as u64 - 1) / 2,
    })
}

fn finish(observed: f64, expected: f64) -> Result<OmegaScore> {
    let value = if expected == 1.0 {
        if observed == 1.0 {
            1.0
        } else {
            return Err(Error::SaturatedExpectation);
        }
    } else {
        (observed - expected) / (1.0 - expected)
    };
    Ok(OmegaScore {
        value,
        observed,
        expected,
    })
}

impl PairProfile {
    /// Hard chance agreement: `sum_j P'_j P_j / P^2`.
    pub fn expected_hard(&self) -> f64 {
        let p = self.total_pairs as f64;
        let dot: f64 = self
            .ranked_gt
            .iter()
            .zip(&self.ranked_cand)
            .map(|(&a, &b)| a as f64 * b as f64)
            .sum();
        dot / (p * p)
    }

    /// Soft chance agreement: the dot product over the common prefix of the
    /// ranked sequences plus the raw tail of the longer one, over `P^2`.
    pub fn expected_soft(&self) -> f64 {
        let p = self.total_pairs as f64;
        let common = self.ranked_gt.len().min(self.ranked_cand.len());
        let dot: f64 = self.ranked_gt[..common]
            .iter()
            .zip(&self.ranked_cand[..common])
            .map(|(&a, &b)| a as f64 * b as f64)
            .sum();
        let longer = if self.ranked_gt.len() > common {
            &self.ranked_gt
        } else {
            &self.ranked_cand
        };
        let tail: f64 = longer[common..].iter().map(|&v| v as f64).sum();
        (dot + tail) / (p * p)
    }

    pub fn observed(&self) -> f64 {
        self.agreed / self.total_pairs as f64
    }
}

/// Omega Index of `pair.cand` against `pair.gt`.
pub fn omega(pair: &ClusteringPair, workers: usize) -> Result<OmegaScore> {
    let prof = pair_profile(pair, false, workers)?;
    finish(prof.observed(), prof.expected_hard())
}

/// Soft Omega Index of `pair.cand` against `pair.gt`.
pub fn omega_soft(pair: &ClusteringPair, workers: usize) -> Result<OmegaScore> {
    let prof = pair_profile(pair, true, workers)?;
    finish(prof.observed(), prof.expected_soft())
}
