//! Reconciling the node universes of two clusterings, and the aligned pair
//! every metric consumes.

use crate::error::{Error, Result};
use crate::index::NodeIndex;
use crate::model::{Clustering, NodeId};

/// How to treat nodes present in only one of the clusterings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniversePolicy {
    /// Universes must be identical.
    #[default]
    Strict,
    /// Both clusterings are restricted to the shared nodes.
    Intersect,
}

/// Outcome of [`align_universes`].
#[derive(Debug, Clone)]
pub struct Aligned {
    pub gt: Clustering,
    pub cand: Clustering,
    /// Nodes dropped from the ground truth (Intersect only).
    pub removed_gt: usize,
    /// Nodes dropped from the candidate (Intersect only).
    pub removed_cand: usize,
}

fn one_sided(a: &[NodeId], b: &[NodeId]) -> (usize, usize) {
    let (mut i, mut j) = (0, 0);
    let (mut only_a, mut only_b) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                only_a += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                only_b += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    (only_a + a.len() - i, only_b + b.len() - j)
}

pub fn align_universes(
    gt: &Clustering,
    cand: &Clustering,
    policy: UniversePolicy,
) -> Result<Aligned> {
    let (only_gt, only_cand) = one_sided(gt.universe(), cand.universe());
    if only_gt == 0 && only_cand == 0 {
        return Ok(Aligned {
            gt: gt.clone(),
            cand: cand.clone(),
            removed_gt: 0,
            removed_cand: 0,
        });
    }
    match policy {
        UniversePolicy::Strict => Err(Error::UniverseMismatch { only_gt, only_cand }),
        UniversePolicy::Intersect => {
            let shared: Vec<NodeId> = gt
                .universe()
                .iter()
                .copied()
                .filter(|n| cand.universe().binary_search(n).is_ok())
                .collect();
            let no_overlap = || Error::Degenerate("the clusterings share no nodes".into());
            Ok(Aligned {
                gt: gt.restrict(&shared).ok_or_else(no_overlap)?,
                cand: cand.restrict(&shared).ok_or_else(no_overlap)?,
                removed_gt: only_gt,
                removed_cand: only_cand,
            })
        }
    }
}

/// One side of a [`ClusteringPair`]: clusters in shared dense ids plus
/// their node index.
#[derive(Debug, Clone)]
pub struct Side {
    pub clusters: Vec<Vec<u32>>,
    pub index: NodeIndex,
}

impl Side {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn memberships(&self) -> usize {
        self.index.total_relations()
    }
}

/// Ground truth and candidate over one shared dense node universe.
#[derive(Debug, Clone)]
pub struct ClusteringPair {
    universe: Vec<NodeId>,
    pub gt: Side,
    pub cand: Side,
}

impl ClusteringPair {
    /// Requires identical universes; run [`align_universes`] first otherwise.
    pub fn new(gt: &Clustering, cand: &Clustering) -> Result<Self> {
        let (only_gt, only_cand) = one_sided(gt.universe(), cand.universe());
        if only_gt != 0 || only_cand != 0 {
            return Err(Error::UniverseMismatch { only_gt, only_cand });
        }
        let universe = gt.universe().to_vec();
        let n = universe.len();
        let side = |c: &Clustering| {
            let clusters = c.dense_clusters(&universe);
            let index = NodeIndex::build(&clusters, n);
            Side { clusters, index }
        };
        Ok(Self {
            gt: side(gt),
            cand: side(cand),
            universe,
        })
    }

    /// Aligns with `policy`, then builds the pair.
    pub fn aligned(gt: &Clustering, cand: &Clustering, policy: UniversePolicy) -> Result<Self> {
        let a = align_universes(gt, cand, policy)?;
        Self::new(&a.gt, &a.cand)
    }

    pub fn universe(&self) -> &[NodeId] {
        &self.universe
    }

    pub fn nodes(&self) -> usize {
        self.universe.len()
    }

    /// The same pair with ground truth and candidate exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            universe: self.universe.clone(),
            gt: self.cand.clone(),
            cand: self.gt.clone(),
        }
    }
}
