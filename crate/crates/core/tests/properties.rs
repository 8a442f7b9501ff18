use clustereval::oracles::{ari_oracle, naive_mean_f1_with, naive_omega, nmi_oracle};
use clustereval::*;
use proptest::prelude::*;

/// Clustering over nodes `0..n` from a membership matrix; node `i` is always
/// in cluster `i % k` so the universe is complete. Empty clusters are dropped.
fn build(n: usize, k: usize, bits: &[bool]) -> Clustering {
    let clusters = (0..k).map(|c| {
        (0..n)
            .filter(|&v| v % k == c || bits[v * k + c])
            .map(|v| v as u64)
            .collect::<Vec<_>>()
    });
    Clustering::new(clusters.filter(|c| !c.is_empty())).unwrap()
}

fn clustering_pair(max_n: usize, density: f64) -> impl Strategy<Value = (Clustering, Clustering)> {
    (2..=max_n, 1..=6usize, 1..=6usize).prop_flat_map(move |(n, kg, kc)| {
        (
            prop::collection::vec(prop::bool::weighted(density), n * kg),
            prop::collection::vec(prop::bool::weighted(density), n * kc),
        )
            .prop_map(move |(a, b)| (build(n, kg, &a), build(n, kc, &b)))
    })
}

/// Random partitions over nodes `0..n`.
fn partition_pair(max_n: usize) -> impl Strategy<Value = (Clustering, Clustering)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0..5u64, n),
            prop::collection::vec(0..5u64, n),
        )
            .prop_map(|(a, b)| {
                let part = |labels: &[u64]| {
                    Clustering::new(
                        (0..5)
                            .map(|l| {
                                labels
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, &x)| x == l)
                                    .map(|(v, _)| v as u64)
                                    .collect::<Vec<_>>()
                            })
                            .filter(|c| !c.is_empty()),
                    )
                    .unwrap()
                };
                (part(&a), part(&b))
            })
    })
}

const MODES: [ContributionMode; 2] = [
    ContributionMode::Overlapping,
    ContributionMode::MultiResolution,
];
const VARIANTS: [F1Variant; 3] = [F1Variant::F1a, F1Variant::F1h, F1Variant::F1p];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn omega_matches_pair_enumeration((gt, cand) in clustering_pair(12, 0.3)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        for soft in [false, true] {
            let fast = if soft { omega_soft(&p, 1) } else { omega(&p, 1) }.map(|s| s.value);
            let naive = naive_omega(&gt, &cand, soft);
            match (fast, naive) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-12, "soft={} {} vs {}", soft, a, b),
                (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
            }
        }
    }

    #[test]
    fn omega_is_at_most_one((gt, cand) in clustering_pair(12, 0.3)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        if let Ok(s) = omega_soft(&p, 1) {
            prop_assert!(s.value <= 1.0 + 1e-12);
            prop_assert!(s.observed >= 0.0 && s.observed <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn partitions_give_ari((gt, cand) in partition_pair(30)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        if let Ok(ari) = ari_oracle(&gt, &cand) {
            let o = omega(&p, 1).unwrap().value;
            prop_assert!((o - ari).abs() <= 1e-9);
            prop_assert!((o - omega_soft(&p, 1).unwrap().value).abs() <= 1e-12);
        }
    }

    #[test]
    fn mean_f1_matches_naive((gt, cand) in clustering_pair(20, 0.2)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        for mode in MODES {
            for averaging in [Averaging::Weighted, Averaging::Uniform] {
                for v in VARIANTS {
                    let fast = mean_f1_with(&p, v, MeanF1Options { mode, averaging }).value;
                    let naive = naive_mean_f1_with(&gt, &cand, v, mode, averaging).unwrap();
                    prop_assert!((fast - naive).abs() <= 1e-12, "{:?} {:?} {:?}: {} vs {}", v, mode, averaging, fast, naive);
                }
            }
        }
    }

    #[test]
    fn mean_f1_bounds_and_order((gt, cand) in clustering_pair(20, 0.2)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        for mode in MODES {
            let a = mean_f1(&p, F1Variant::F1a, mode);
            let h = mean_f1(&p, F1Variant::F1h, mode);
            let pp = mean_f1(&p, F1Variant::F1p, mode);
            prop_assert!(h <= a + 1e-12);
            for v in [a, h, pp] {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
            // both harmonic and arithmetic means are symmetric
            let q = p.swapped();
            prop_assert!((a - mean_f1(&q, F1Variant::F1a, mode)).abs() <= 1e-12);
            prop_assert!((h - mean_f1(&q, F1Variant::F1h, mode)).abs() <= 1e-12);
        }
    }

    #[test]
    fn identical_inputs_score_one((gt, _) in clustering_pair(15, 0.3)) {
        let p = ClusteringPair::new(&gt, &gt).unwrap();
        for mode in MODES {
            for v in VARIANTS {
                prop_assert!((mean_f1(&p, v, mode) - 1.0).abs() <= 1e-12);
            }
        }
        if let Ok(s) = omega(&p, 1) {
            prop_assert_eq!(s.value, 1.0);
        }
    }

    #[test]
    fn nmi_matches_set_intersections((gt, cand) in clustering_pair(15, 0.3)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        match (nmi_exact(&p, Normalization::Max), nmi_oracle(&gt, &cand)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-9),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn nmi_bounded_and_symmetric((gt, cand) in clustering_pair(15, 0.3)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        let q = p.swapped();
        for norm in [Normalization::Max, Normalization::Geo, Normalization::Avg] {
            if let Ok(v) = nmi_exact(&p, norm) {
                prop_assert!((0.0..=1.0).contains(&v));
                if norm != Normalization::Avg {
                    prop_assert!((v - nmi_exact(&q, norm).unwrap()).abs() <= 1e-12);
                }
            }
        }
        prop_assert!(joint_overlap_table(&p).mutual_information() >= -1e-12);
    }

    #[test]
    fn joint_table_is_a_distribution((gt, cand) in clustering_pair(15, 0.3)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        let t = joint_overlap_table(&p);
        let sum: f64 = t.entries.values().map(|m| m / t.total_mass).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9);
        for (&(g, c), &m) in &t.entries {
            prop_assert!(m > 0.0);
            prop_assert!(m <= t.gt_marginals[g as usize].min(t.cand_marginals[c as usize]));
        }
    }

    #[test]
    fn partition_marginals_are_cluster_sizes((gt, cand) in partition_pair(30)) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        let t = joint_overlap_table(&p);
        for (m, c) in t.gt_marginals.iter().zip(gt.clusters()) {
            prop_assert_eq!(*m, c.len() as f64);
        }
        for (m, c) in t.cand_marginals.iter().zip(cand.clusters()) {
            prop_assert_eq!(*m, c.len() as f64);
        }
        prop_assert_eq!(t.total_mass, gt.universe().len() as f64);
    }

    #[test]
    fn entropy_is_nonnegative((gt, _) in clustering_pair(15, 0.3)) {
        let h = entropy(&gt);
        prop_assert!(h >= 0.0);
        prop_assert_eq!(h == 0.0, gt.len() == 1);
    }

    #[test]
    fn cnl_round_trip((gt, _) in clustering_pair(15, 0.3)) {
        let text = gt.to_cnl();
        let back = parse_cnl(&text, ParseOptions::default()).unwrap();
        prop_assert_eq!(&back, &gt);
        prop_assert_eq!(back.to_cnl(), text);
    }

    #[test]
    fn intersect_alignment_is_idempotent((gt, cand) in clustering_pair(12, 0.3), drop in 0..12u64) {
        let restricted = Clustering::new(
            cand.clusters().iter().map(|c| c.members().iter().map(|m| m.0).filter(|&v| v != drop).collect::<Vec<_>>()).filter(|c| !c.is_empty()),
        );
        if let Ok(cand) = restricted {
            if let Ok(a) = align_universes(&gt, &cand, UniversePolicy::Intersect) {
                let b = align_universes(&a.gt, &a.cand, UniversePolicy::Intersect).unwrap();
                prop_assert_eq!(&b.gt, &a.gt);
                prop_assert_eq!(&b.cand, &a.cand);
                prop_assert_eq!((b.removed_gt, b.removed_cand), (0, 0));
                prop_assert_eq!(a.gt.universe(), a.cand.universe());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gnmi_is_seed_reproducible((gt, cand) in partition_pair(40), seed in any::<u64>()) {
        let p = ClusteringPair::new(&gt, &cand).unwrap();
        let cfg = GnmiConfig { rerr: 0.05, rrisk: 0.05, seed, max_wall_events: 10 };
        match (gnmi(&p, &cfg, 1), gnmi(&p, &cfg, 1)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
                prop_assert_eq!(a.events, b.events);
                prop_assert!(a.events <= a.evsmax * cfg.max_wall_events);
                prop_assert_eq!(a.converged, a.diagnostic.is_none());
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn synthetic_generation_contract(n in 10..300usize, k in 1..10usize, extra in 0.0..1.0f64, seed in any::<u64>()) {
        prop_assume!(n >= k);
        let avg = 1.0 + extra * (k as f64 - 1.0).min(1.0);
        let c = generate_synthetic(n, k, avg, seed).unwrap();
        prop_assert_eq!(c.universe().len(), n);
        prop_assert_eq!(c.len(), k);
        let target = avg * n as f64;
        prop_assert!((c.memberships() as f64 - target).abs() <= (0.01 * target).max(1.0));
    }
}

#[test]
fn tightening_rerr_stays_within_previous_half_width() {
    let gt = generate_synthetic(800, 8, 1.0, 1).unwrap();
    let cand = clustereval::synth::perturb(&gt, 0.4, 2).unwrap();
    let p = ClusteringPair::new(&gt, &cand).unwrap();
    let mut consistent = 0;
    for seed in 0..10 {
        let loose = gnmi(
            &p,
            &GnmiConfig {
                rerr: 0.02,
                seed,
                ..GnmiConfig::default()
            },
            1,
        )
        .unwrap();
        let tight = gnmi(
            &p,
            &GnmiConfig {
                rerr: 0.01,
                seed,
                ..GnmiConfig::default()
            },
            1,
        )
        .unwrap();
        assert!(loose.converged && tight.converged);
        if (tight.value - loose.value).abs() <= loose.half_width {
            consistent += 1;
        }
    }
    // statistical: a 99% interval should hold for nearly every seed
    assert!(consistent >= 8, "{consistent}/10");
}
