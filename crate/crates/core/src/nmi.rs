//! Entropy, mutual information and NMI from the exact joint overlap table.

use std::collections::HashMap;

use crate::align::ClusteringPair;
use crate::error::{Error, Result};
use crate::model::Clustering;

/// Normalization of mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `max(H(C'), H(C))`.
    #[default]
    Max,
    /// Arithmetic mean of the entropies.
    Avg,
    /// Geometric mean of the entropies.
    Geo,
}

impl Normalization {
    pub fn denominator(self, h_gt: f64, h_cand: f64) -> f64 {
        match self {
            Normalization::Max => h_gt.max(h_cand),
            Normalization::Avg => 0.5 * (h_gt + h_cand),
            Normalization::Geo => (h_gt * h_cand).sqrt(),
        }
    }
}

/// Shannon entropy in bits of a mass vector, normalized by its own sum.
pub fn entropy_of(masses: &[f64]) -> f64 {
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let h = -masses
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| {
            let p = m / total;
            p * p.log2()
        })
        .sum::<f64>();
    h.max(0.0)
}

/// Entropy in bits of the cluster-size distribution `p(x) = |x| / sum |x|`.
pub fn entropy(c: &Clustering) -> f64 {
    let sizes: Vec<f64> = c.clusters().iter().map(|x| x.len() as f64).collect();
    entropy_of(&sizes)
}

/// Co-occurrence masses of (category, cluster) pairs.
///
/// Built from the node index: every node adds one unit to each pair of its
/// containing category and containing cluster. Marginals are the row and
/// column sums of the table, so the normalized table is a proper joint
/// distribution for overlapping inputs as well.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOverlapTable {
    pub entries: HashMap<(u32, u32), f64>,
    pub gt_marginals: Vec<f64>,
    pub cand_marginals: Vec<f64>,
    pub total_mass: f64,
}

impl JointOverlapTable {
    /// Collects a table from arbitrary weighted entries.
    pub fn from_entries(entries: HashMap<(u32, u32), f64>, gt_len: usize, cand_len: usize) -> Self {
        let mut gt_marginals = vec![0.0; gt_len];
        let mut cand_marginals = vec![0.0; cand_len];
        let mut total_mass = 0.0;
        // Sorted traversal keeps the floating-point sums reproducible.
        let mut keys: Vec<_> = entries.iter().collect();
        keys.sort_unstable_by_key(|(k, _)| **k);
        for (&(g, c), &m) in keys {
            gt_marginals[g as usize] += m;
            cand_marginals[c as usize] += m;
            total_mass += m;
        }
        Self {
            entries,
            gt_marginals,
            cand_marginals,
            total_mass,
        }
    }

    /// Mutual information in bits of the normalized table.
    pub fn mutual_information(&self) -> f64 {
        if self.total_mass <= 0.0 {
            return 0.0;
        }
        let t = self.total_mass;
        let mut keys: Vec<_> = self.entries.iter().filter(|(_, &m)| m > 0.0).collect();
        keys.sort_unstable_by_key(|(k, _)| **k);
        keys.into_iter()
            .map(|(&(g, c), &m)| {
                let pg = self.gt_marginals[g as usize];
                let pc = self.cand_marginals[c as usize];
                m / t * (m * t / (pg * pc)).log2()
            })
            .sum()
    }

    pub fn gt_entropy(&self) -> f64 {
        entropy_of(&self.gt_marginals)
    }

    pub fn cand_entropy(&self) -> f64 {
        entropy_of(&self.cand_marginals)
    }

    /// NMI of the table; `None` when the normalizing entropy is zero.
    pub fn nmi(&self, norm: Normalization) -> Option<f64> {
        let den = norm.denominator(self.gt_entropy(), self.cand_entropy());
        if den <= 0.0 {
            return None;
        }
        Some((self.mutual_information() / den).clamp(0.0, 1.0))
    }
}

/// Builds the exact table in one pass over the node index; the cost is the
/// sum over nodes of `shares_gt * shares_cand`.
pub fn joint_overlap_table(pair: &ClusteringPair) -> JointOverlapTable {
    let mut entries: HashMap<(u32, u32), f64> = HashMap::new();
    for n in 0..pair.nodes() as u32 {
        for &g in pair.gt.index.relations(n) {
            for &c in pair.cand.index.relations(n) {
                *entries.entry((g, c)).or_insert(0.0) += 1.0;
            }
        }
    }
    JointOverlapTable::from_entries(entries, pair.gt.len(), pair.cand.len())
}

/// Exact NMI of `pair.cand` against `pair.gt`, clamped to `[0, 1]`.
pub fn nmi_exact(pair: &ClusteringPair, norm: Normalization) -> Result<f64> {
    joint_overlap_table(pair)
        .nmi(norm)
        .ok_or_else(|| Error::Degenerate("degenerate clustering (single cluster)".into()))
}
