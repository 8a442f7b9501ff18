//! Node → clusters association map.

use crate::model::Clustering;

/// For every dense node id, the ascending list of clusters containing it.
///
/// Stored in compressed rows: `offsets[n]..offsets[n + 1]` delimits the
/// relations of node `n` inside `clusters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeIndex {
    offsets: Vec<u32>,
    clusters: Vec<u32>,
}

impl NodeIndex {
    /// Indexes clusters given in dense ids `0..nodes`.
    pub fn build(clusters: &[Vec<u32>], nodes: usize) -> Self {
        let total: usize = clusters.iter().map(Vec::len).sum();
        // 32-bit offsets halve the index size
        assert!(total <= u32::MAX as usize, "more than 2^32 memberships");
        let mut counts = vec![0u32; nodes + 1];
        for c in clusters {
            for &m in c {
                counts[m as usize + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut rel = vec![0u32; offsets[nodes] as usize];
        // Clusters are visited in ascending order, so each row comes out sorted.
        for (ci, c) in clusters.iter().enumerate() {
            for &m in c {
                let slot = &mut fill[m as usize];
                rel[*slot as usize] = ci as u32;
                *slot += 1;
            }
        }
        Self {
            offsets,
            clusters: rel,
        }
    }

    /// Indexes a clustering over its own universe.
    pub fn of(clustering: &Clustering) -> Self {
        let dense = clustering.dense_clusters(clustering.universe());
        Self::build(&dense, clustering.universe().len())
    }

    /// Number of indexed nodes.
    pub fn nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Clusters containing `node`, ascending.
    #[inline]
    pub fn relations(&self, node: u32) -> &[u32] {
        let n = node as usize;
        &self.clusters[self.offsets[n] as usize..self.offsets[n + 1] as usize]
    }

    /// Number of clusters containing `node`.
    #[inline]
    pub fn shares(&self, node: u32) -> usize {
        let n = node as usize;
        (self.offsets[n + 1] - self.offsets[n]) as usize
    }

    /// Total number of (node, cluster) relations.
    pub fn total_relations(&self) -> usize {
        self.clusters.len()
    }

    /// Maximal number of clusters sharing a single node.
    pub fn max_shares(&self) -> usize {
        (0..self.nodes() as u32)
            .map(|n| self.shares(n))
            .max()
            .unwrap_or(0)
    }
}

/// Number of clusters two sorted relation lists have in common.
#[inline]
pub(crate) fn mutual(a: &[u32], b: &[u32]) -> usize {
    if a.len() == 1 && b.len() == 1 {
        return usize::from(a[0] == b[0]);
    }
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NodeId;

    #[test]
    fn relations_list_containing_clusters() {
        let c = Clustering::new([vec![1, 2], vec![2, 3]]).unwrap();
        let idx = NodeIndex::of(&c);
        let d = |n| c.dense_id(NodeId(n)).unwrap();
        assert_eq!(idx.relations(d(1)), [0]);
        assert_eq!(idx.relations(d(2)), [0, 1]);
        assert_eq!(idx.relations(d(3)), [1]);
        assert_eq!(idx.total_relations(), 4);
    }

    #[test]
    fn four_node_ground_truth_has_three_shares_everywhere() {
        let gt =
            Clustering::new([vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 1], vec![4, 1, 2]]).unwrap();
        let idx = NodeIndex::of(&gt);
        for n in 0..4 {
            assert_eq!(idx.shares(n), 3);
        }
        assert_eq!(idx.max_shares(), 3);
    }

    #[test]
    fn partition_has_single_shares() {
        let c = Clustering::new([vec![4, 1], vec![2], vec![3, 5, 6]]).unwrap();
        let idx = NodeIndex::of(&c);
        assert!((0..idx.nodes() as u32).all(|n| idx.shares(n) == 1));
    }

    #[test]
    fn mutual_counts_common_entries() {
        assert_eq!(mutual(&[0, 2, 5], &[1, 2, 5, 7]), 2);
        assert_eq!(mutual(&[3], &[3]), 1);
        assert_eq!(mutual(&[3], &[4]), 0);
        assert_eq!(mutual(&[], &[1]), 0);
    }
}
