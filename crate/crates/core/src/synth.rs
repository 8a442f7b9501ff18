//! Seeded synthetic clusterings for tests and scaling runs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Clustering;

/// Random clustering of nodes `0..n` into `k` non-empty clusters with about
/// `avg_membership * n` memberships in total.
///
/// Every node gets one cluster first (the first `k` nodes of a shuffled order
/// seed one cluster each); the remaining memberships go to random
/// (node, cluster) pairs not used yet.
pub fn generate_synthetic(
    n: usize,
    k: usize,
    avg_membership: f64,
    seed: u64,
) -> Result<Clustering> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!(
            "need n >= k >= 1, got n = {n}, k = {k}"
        )));
    }
    if !(1.0..=k as f64).contains(&avg_membership) {
        return Err(Error::InvalidParameter(format!(
            "average membership must be in [1, {k}], got {avg_membership}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u64> = (0..n as u64).collect();
    order.shuffle(&mut rng);

    let mut clusters: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut taken: HashSet<(u64, usize)> = HashSet::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        let c = if i < k { i } else { rng.random_range(0..k) };
        clusters[c].push(v);
        taken.insert((v, c));
    }
    let total = ((avg_membership * n as f64).round() as usize).min(n * k);
    while taken.len() < total {
        let v = rng.random_range(0..n as u64);
        let c = rng.random_range(0..k);
        if taken.insert((v, c)) {
            clusters[c].push(v);
        }
    }
    for c in &mut clusters {
        c.sort_unstable();
    }
    Clustering::new(clusters)
}

/// Moves a `fraction` of the nodes of a clustering to a random cluster,
/// replacing all of their memberships. Emptied clusters are dropped.
pub fn perturb(base: &Clustering, fraction: f64, seed: u64) -> Result<Clustering> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "fraction must be in [0, 1], got {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clusters: Vec<Vec<u64>> = base
        .clusters()
        .iter()
        .map(|c| c.members().iter().map(|m| m.0).collect())
        .collect();
    let mut nodes: Vec<u64> = base.universe().iter().map(|m| m.0).collect();
    nodes.shuffle(&mut rng);
    let moved: Vec<u64> = nodes[..(fraction * nodes.len() as f64).round() as usize].to_vec();
    let moved_set: HashSet<u64> = moved.iter().copied().collect();
    for c in &mut clusters {
        c.retain(|v| !moved_set.contains(v));
    }
    let k = clusters.len();
    for v in moved {
        clusters[rng.random_range(0..k)].push(v);
    }
    Clustering::new(clusters.into_iter().filter(|c| !c.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_when_membership_is_one() {
        let c = generate_synthetic(100, 10, 1.0, 5).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.universe().len(), 100);
        assert_eq!(c.memberships(), 100);
    }

    #[test]
    fn overlapping_total_membership() {
        let c = generate_synthetic(100, 10, 1.5, 5).unwrap();
        assert!(c.memberships().abs_diff(150) <= 1);
        assert_eq!(c.universe().len(), 100);
    }

    #[test]
    fn same_seed_same_output() {
        let a = generate_synthetic(300, 7, 1.3, 9).unwrap().to_cnl();
        assert_eq!(a, generate_synthetic(300, 7, 1.3, 9).unwrap().to_cnl());
        assert_ne!(a, generate_synthetic(300, 7, 1.3, 10).unwrap().to_cnl());
    }

    #[test]
    fn infeasible_parameters() {
        assert!(generate_synthetic(5, 10, 1.0, 0).is_err());
        assert!(generate_synthetic(5, 0, 1.0, 0).is_err());
        assert!(generate_synthetic(10, 2, 0.5, 0).is_err());
        assert!(generate_synthetic(10, 2, 2.5, 0).is_err());
    }

    #[test]
    fn perturb_keeps_universe() {
        let c = generate_synthetic(200, 8, 1.0, 1).unwrap();
        let p = perturb(&c, 0.3, 2).unwrap();
        assert_eq!(p.universe(), c.universe());
        assert_eq!(p.memberships(), 200);
        assert_eq!(perturb(&c, 0.0, 2).unwrap(), c);
    }
}
