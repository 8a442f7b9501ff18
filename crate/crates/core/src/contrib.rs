//! Membership contributions of shared nodes.
//!
//! In overlapping clusterings a node shared by `s` clusters belongs to each
//! of them with mass `1/s`; in multi-resolution clusterings it fully belongs
//! to every containing cluster.

use crate::index::NodeIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContributionMode {
    /// A node contributes `1/shares` to every containing cluster.
    Overlapping,
    /// A node contributes `1` to every containing cluster.
    #[default]
    MultiResolution,
}

/// Cluster weights `|x|`: the summed contribution of each cluster's members.
///
/// Shares are taken within the cluster's own clustering. In multi-resolution
/// mode the weight equals the member count.
pub fn cluster_weights(clusters: &[Vec<u32>], own: &NodeIndex, mode: ContributionMode) -> Vec<f64> {
    clusters
        .iter()
        .map(|c| match mode {
            ContributionMode::MultiResolution => c.len() as f64,
            ContributionMode::Overlapping => c.iter().map(|&n| 1.0 / own.shares(n) as f64).sum(),
        })
        .collect()
}

/// Contribution of `node` to a matched (cluster, counterpart) pair: `1` in
/// multi-resolution mode, else `1 / max(shares in a, shares in b)`.
#[inline]
pub fn matched_contribution(
    node: u32,
    a: &NodeIndex,
    b: &NodeIndex,
    mode: ContributionMode,
) -> f64 {
    match mode {
        ContributionMode::MultiResolution => 1.0,
        ContributionMode::Overlapping => 1.0 / a.shares(node).max(b.shares(node)) as f64,
    }
}

/// Accumulator of matched contribution, tagged with the counterpart cluster
/// the mass was collected against.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MatchCounter {
    origin: Option<u32>,
    mass: f64,
}

impl MatchCounter {
    /// Adds `value` collected against `origin`, restarting from zero when the
    /// origin differs from the stored one. Returns the updated mass.
    #[inline]
    pub fn add(&mut self, origin: u32, value: f64) -> f64 {
        if self.origin == Some(origin) {
            self.mass += value;
        } else {
            self.origin = Some(origin);
            self.mass = value;
        }
        self.mass
    }

    pub fn origin(&self) -> Option<u32> {
        self.origin
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}
