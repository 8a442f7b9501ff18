//! Mean F1 family: F1a, F1h and F1p.
//!
//! Best matches are found in one pass over the members of the traversed
//! clusters. Every counterpart cluster carries a [`MatchCounter`] that is
//! advanced by each shared member and restarted whenever a different
//! traversed cluster touches it, so the counter always holds the overlap
//! with the cluster currently being traversed. Work is proportional to the
//! number of (member, containing counterpart) relations rather than to the
//! number of cluster pairs.

use crate::align::{ClusteringPair, Side};
use crate::contrib::{cluster_weights, matched_contribution, ContributionMode, MatchCounter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Variant {
    /// Arithmetic mean of the two directional averages of F1 best matches.
    F1a,
    /// Harmonic mean of the two directional averages of F1 best matches.
    F1h,
    /// Harmonic mean of the directional averages of square-rooted
    /// pair-probability best matches.
    F1p,
}

impl F1Variant {
    fn prob(self) -> bool {
        matches!(self, F1Variant::F1p)
    }
}

/// How per-cluster best matches are averaged within one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Each cluster counts proportionally to its weight `|x|`.
    #[default]
    Weighted,
    /// Each cluster counts once.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeanF1Options {
    pub mode: ContributionMode,
    pub averaging: Averaging,
}

/// F1 of a matched mass `m` between clusters of weights `w_gt` and `w_cand`.
#[inline]
pub fn match_f1(m: f64, w_gt: f64, w_cand: f64) -> f64 {
    2.0 * m / (w_gt + w_cand)
}

/// Probability that a random member of each cluster lies in the overlap.
#[inline]
pub fn match_pprob(m: f64, w_gt: f64, w_cand: f64) -> f64 {
    m * m / (w_gt * w_cand)
}

/// Best local match of every traversed cluster, in traversal order.
#[derive(Debug, Clone, PartialEq)]
pub struct BestMatches {
    pub values: Vec<f64>,
}

/// Evaluates the best match of each cluster of `traversed` against the
/// clusters of `target`.
///
/// `prob` selects [`match_pprob`] (square-rooted on emission) instead of
/// [`match_f1`].
pub fn best_matches(
    traversed: &Side,
    traversed_weights: &[f64],
    target: &Side,
    target_weights: &[f64],
    prob: bool,
    mode: ContributionMode,
) -> BestMatches {
    let fmatch = if prob { match_pprob } else { match_f1 };
    let mut counters = vec![MatchCounter::default(); target.len()];
    let mut values = Vec::with_capacity(traversed.len());
    for (ci, members) in traversed.clusters.iter().enumerate() {
        let own_weight = traversed_weights[ci];
        let mut best = 0.0_f64;
        for &node in members {
            let cont = matched_contribution(node, &target.index, &traversed.index, mode);
            for &tc in target.index.relations(node) {
                let tc = tc as usize;
                let mass = counters[tc].add(ci as u32, cont);
                let mt = fmatch(mass, target_weights[tc], own_weight);
                if best < mt {
                    best = mt;
                }
            }
        }
        values.push(if prob { best.sqrt() } else { best });
    }
    BestMatches { values }
}

fn average(values: &[f64], weights: &[f64], averaging: Averaging) -> f64 {
    match averaging {
        Averaging::Uniform => values.iter().sum::<f64>() / values.len() as f64,
        Averaging::Weighted => {
            let num: f64 = values.iter().zip(weights).map(|(v, w)| v * w).sum();
            num / weights.iter().sum::<f64>()
        }
    }
}

/// Score together with its two directional averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanF1 {
    pub value: f64,
    /// Average best match of ground-truth clusters (recall-like).
    pub f_gt: f64,
    /// Average best match of candidate clusters (precision-like).
    pub f_cand: f64,
}

fn harmonic(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

/// Mean F1 score with explicit options.
pub fn mean_f1_with(pair: &ClusteringPair, variant: F1Variant, opts: MeanF1Options) -> MeanF1 {
    let wg = cluster_weights(&pair.gt.clusters, &pair.gt.index, opts.mode);
    let wc = cluster_weights(&pair.cand.clusters, &pair.cand.index, opts.mode);
    let prob = variant.prob();
    let (bg, bc) = rayon::join(
        || best_matches(&pair.gt, &wg, &pair.cand, &wc, prob, opts.mode),
        || best_matches(&pair.cand, &wc, &pair.gt, &wg, prob, opts.mode),
    );
    let f_gt = average(&bg.values, &wg, opts.averaging);
    let f_cand = average(&bc.values, &wc, opts.averaging);
    let value = match variant {
        F1Variant::F1a => 0.5 * (f_gt + f_cand),
        F1Variant::F1h | F1Variant::F1p => harmonic(f_gt, f_cand),
    };
    MeanF1 {
        value,
        f_gt,
        f_cand,
    }
}

/// Mean F1 score with weighted averaging.
pub fn mean_f1(pair: &ClusteringPair, variant: F1Variant, mode: ContributionMode) -> f64 {
    mean_f1_with(
        pair,
        variant,
        MeanF1Options {
            mode,
            averaging: Averaging::Weighted,
        },
    )
    .value
}
