//! Clusterings, the clusters-per-line (CNL) text format and dense node ids.
//!
//! A CNL file holds one cluster per line as whitespace-separated
//! non-negative integer node ids. Lines starting with `#` and blank lines
//! are ignored.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// External identifier of a clustered element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-empty set of nodes. Member order is the order of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    members: Vec<NodeId>,
}

impl Cluster {
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Options for [`parse_cnl`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Drop repeated ids within a line instead of rejecting the line.
    pub dedup_members: bool,
}

/// An ordered collection of clusters over an integer node universe.
///
/// The universe is kept as a sorted list, so the position of a node in it is
/// the node's dense id. Duplicate clusters are kept as-is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    clusters: Vec<Cluster>,
    universe: Vec<NodeId>,
}

impl Clustering {
    /// Builds a clustering from member lists.
    ///
    /// Every cluster must be non-empty and free of repeated members; an empty
    /// collection is rejected.
    pub fn new<I, C>(clusters: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = u64>,
    {
        let mut out = Vec::new();
        for (i, members) in clusters.into_iter().enumerate() {
            let members: Vec<NodeId> = members.into_iter().map(NodeId).collect();
            if members.is_empty() {
                return Err(Error::EmptyCluster { cluster: i });
            }
            let mut seen = HashSet::with_capacity(members.len());
            for m in &members {
                if !seen.insert(*m) {
                    return Err(Error::DuplicateMember {
                        line: i + 1,
                        node: m.0,
                    });
                }
            }
            out.push(Cluster { members });
        }
        Self::from_clusters(out)
    }

    fn from_clusters(clusters: Vec<Cluster>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::EmptyClustering);
        }
        let mut universe: Vec<NodeId> = clusters
            .iter()
            .flat_map(|c| c.members.iter().copied())
            .collect();
        universe.sort_unstable();
        universe.dedup();
        Ok(Self { clusters, universe })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Sorted, duplicate-free list of all nodes.
    pub fn universe(&self) -> &[NodeId] {
        &self.universe
    }

    /// Position of `node` in [`Clustering::universe`].
    pub fn dense_id(&self, node: NodeId) -> Option<u32> {
        self.universe.binary_search(&node).ok().map(|i| i as u32)
    }

    /// Total membership: the sum of cluster sizes.
    pub fn memberships(&self) -> usize {
        self.clusters.iter().map(Cluster::len).sum()
    }

    /// Clusters rewritten in dense ids of `universe`, which must contain
    /// every member.
    pub(crate) fn dense_clusters(&self, universe: &[NodeId]) -> Vec<Vec<u32>> {
        self.clusters
            .iter()
            .map(|c| {
                c.members
                    .iter()
                    .map(|m| {
                        universe
                            .binary_search(m)
                            .expect("member outside of the universe") as u32
                    })
                    .collect()
            })
            .collect()
    }

    /// Keeps only members contained in `keep` (sorted) and drops clusters
    /// that become empty.
    pub(crate) fn restrict(&self, keep: &[NodeId]) -> Option<Self> {
        let clusters: Vec<Cluster> = self
            .clusters
            .iter()
            .filter_map(|c| {
                let members: Vec<NodeId> = c
                    .members
                    .iter()
                    .copied()
                    .filter(|m| keep.binary_search(m).is_ok())
                    .collect();
                (!members.is_empty()).then_some(Cluster { members })
            })
            .collect();
        Self::from_clusters(clusters).ok()
    }

    /// Serializes to CNL: one line per cluster, members separated by a
    /// single space, each line terminated by `\n`.
    pub fn to_cnl(&self) -> String {
        let mut out = String::new();
        for c in &self.clusters {
            let mut first = true;
            for m in &c.members {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&m.0.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Parses CNL text. One cluster is produced per data line, in file order.
pub fn parse_cnl(text: &str, opts: ParseOptions) -> Result<Clustering> {
    let mut clusters = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let mut members = Vec::new();
        let mut seen = HashSet::new();
        for token in line.split([' ', '\t']).filter(|t| !t.is_empty()) {
            let id: u64 = token.parse().map_err(|_| Error::InvalidToken {
                line: lineno,
                token: token.to_string(),
            })?;
            if !seen.insert(id) {
                if opts.dedup_members {
                    continue;
                }
                return Err(Error::DuplicateMember {
                    line: lineno,
                    node: id,
                });
            }
            members.push(NodeId(id));
        }
        clusters.push(Cluster { members });
    }
    Clustering::from_clusters(clusters)
}

/// Reads and parses a CNL file.
pub fn load_cnl(path: &Path, opts: ParseOptions) -> std::io::Result<Result<Clustering>> {
    let text = fs::read_to_string(path)?;
    Ok(parse_cnl(&text, opts))
}
