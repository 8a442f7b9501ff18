//! Stochastic NMI estimation (GNMI) with adaptive sampling.
//!
//! Events are drawn by [`Sampler::try_get_sample`]: a uniformly random start
//! node followed by a short walk through the clusters it belongs to. Each
//! event adds the start node's (category, cluster) pair to a sampled joint
//! table; sampling stops once the event budget is met and the estimate is
//! tight enough, or when the hard budget runs out.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::align::ClusteringPair;
use crate::error::{Error, Result};
use crate::nmi::{entropy_of, JointOverlapTable, Normalization};

/// Events per batch; batch estimates feed the half-width computation.
pub const BATCH_EVENTS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnmiConfig {
    /// Admissible error of the estimate.
    pub rerr: f64,
    /// Risk: the complement of the confidence level.
    pub rrisk: f64,
    pub seed: u64,
    /// Hard budget, as a multiple of [`max_events`].
    pub max_wall_events: u64,
}

impl Default for GnmiConfig {
    fn default() -> Self {
        Self {
            rerr: 0.01,
            rrisk: 0.01,
            seed: 0,
            max_wall_events: 100,
        }
    }
}

impl GnmiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rerr > 0.0 && self.rerr < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rerr must be in (0, 1), got {}",
                self.rerr
            )));
        }
        if !(self.rrisk > 0.0 && self.rrisk < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rrisk must be in (0, 1), got {}",
                self.rrisk
            )));
        }
        if self.max_wall_events == 0 {
            return Err(Error::InvalidParameter(
                "max_wall_events must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnmiResult {
    pub value: f64,
    pub converged: bool,
    /// Number of events sampled.
    pub events: u64,
    /// Event count required before convergence is tested.
    pub evsmax: u64,
    /// Confidence half-width of the final estimate (infinite if unknown).
    pub half_width: f64,
    /// Mean importance returned by the sampler.
    pub mean_importance: f64,
    /// Set when the run did not converge.
    pub diagnostic: Option<String>,
}

/// Required number of events: `max(min(mbs', mbs), 1 / (rerr sqrt(rrisk)))`,
/// rounded up, where `mbs'`, `mbs` are the total memberships.
pub fn max_events(gt_memberships: usize, cand_memberships: usize, cfg: &GnmiConfig) -> u64 {
    let floor = 1.0 / (cfg.rerr * cfg.rrisk.sqrt());
    let v = (gt_memberships.min(cand_memberships) as f64).max(floor);
    // absorb representation noise such as 1000.0000000000001
    (v * (1.0 - 1e-12)).ceil() as u64
}

/// Walk state of one sampling attempt: every (category, cluster) pair
/// applied so far with its visit count, in first-visit order.
#[derive(Debug, Clone, Default)]
pub struct Mixer {
    visited: Vec<((u32, u32), u32)>,
    start_node: Option<u32>,
}

impl Mixer {
    pub fn reset(&mut self) {
        self.visited.clear();
        self.start_node = None;
    }

    /// Records `(g, c)`; returns whether the pair was not yet counted in
    /// this walk.
    pub fn apply(&mut self, g: u32, c: u32) -> bool {
        if let Some(e) = self.visited.iter_mut().find(|(p, _)| *p == (g, c)) {
            e.1 += 1;
            false
        } else {
            self.visited.push(((g, c), 1));
            true
        }
    }

    /// The pair the walk started from.
    pub fn start_pair(&self) -> Option<(u32, u32)> {
        self.visited.first().map(|(p, _)| *p)
    }

    pub fn start_node(&self) -> Option<u32> {
        self.start_node
    }

    /// Visited pairs with their counts, in first-visit order.
    pub fn pairs(&self) -> &[((u32, u32), u32)] {
        &self.visited
    }

    /// Total number of applied pairs.
    pub fn steps(&self) -> u32 {
        self.visited.iter().map(|(_, n)| n).sum()
    }
}

/// Adaptive event sampler over an aligned clustering pair.
#[derive(Debug, Clone, Copy)]
pub struct Sampler<'a> {
    pair: &'a ClusteringPair,
}

impl<'a> Sampler<'a> {
    pub fn new(pair: &'a ClusteringPair) -> Self {
        Self { pair }
    }

    /// One category and one cluster of `node`, uniformly among its
    /// memberships.
    fn cls_pair<R: Rng>(&self, node: u32, rng: &mut R) -> (u32, u32) {
        let pick = |rel: &[u32], rng: &mut R| {
            if rel.len() == 1 {
                rel[0]
            } else {
                rel[rng.random_range(0..rel.len())]
            }
        };
        let g = pick(self.pair.gt.index.relations(node), rng);
        let c = pick(self.pair.cand.index.relations(node), rng);
        (g, c)
    }

    fn sizes(&self, (g, c): (u32, u32)) -> (usize, usize) {
        (
            self.pair.gt.clusters[g as usize].len(),
            self.pair.cand.clusters[c as usize].len(),
        )
    }

    fn weight(&self, gc: (u32, u32)) -> f64 {
        let (sg, sc) = self.sizes(gc);
        1.0 / ((sg as f64 * sc as f64).sqrt()).max(1.0)
    }

    /// Draws one sample into `mixer` and returns its importance.
    ///
    /// Starts at a uniformly random node and keeps stepping to a random
    /// member of the current category or cluster while the mixer reports a
    /// new pair and the attempt budget `(|g| + |c|) / (2 rrisk)` lasts.
    /// The importance is the mean per-step weight `1 / max(sqrt(|g| |c|), 1)`.
    pub fn try_get_sample<R: Rng>(&self, rrisk: f64, mixer: &mut Mixer, rng: &mut R) -> f64 {
        mixer.reset();
        let node = rng.random_range(0..self.pair.nodes() as u32);
        mixer.start_node = Some(node);
        let mut gc = self.cls_pair(node, rng);
        let (sg, sc) = self.sizes(gc);
        let attempts = (sg + sc) as f64 / (2.0 * rrisk);
        let mut importance = self.weight(gc);
        let mut adone = 1u64;
        while mixer.apply(gc.0, gc.1) && {
            adone += 1;
            adone as f64 <= attempts
        } {
            let members = if rng.random_bool(0.5) {
                &self.pair.gt.clusters[gc.0 as usize]
            } else {
                &self.pair.cand.clusters[gc.1 as usize]
            };
            let next = members[rng.random_range(0..members.len())];
            gc = self.cls_pair(next, rng);
            importance += self.weight(gc);
        }
        importance / adone as f64
    }
}

struct Batch {
    table: HashMap<(u32, u32), f64>,
    events: u64,
    importance: f64,
}

struct Worker {
    rng: ChaCha8Rng,
    mixer: Mixer,
}

impl Worker {
    fn run(&mut self, sampler: &Sampler<'_>, rrisk: f64, events: u64) -> Batch {
        let idx = (&sampler.pair.gt.index, &sampler.pair.cand.index);
        let mut table = HashMap::new();
        let mut importance = 0.0;
        for _ in 0..events {
            importance += sampler.try_get_sample(rrisk, &mut self.mixer, &mut self.rng);
            let node = self.mixer.start_node().expect("sample has a start node");
            let gc = self.mixer.start_pair().expect("sample has a start pair");
            // Undo the uniform choice among memberships so the estimate
            // targets the exact joint table.
            let w = (idx.0.shares(node) * idx.1.shares(node)) as f64;
            *table.entry(gc).or_insert(0.0) += w;
        }
        Batch {
            table,
            events,
            importance,
        }
    }
}

fn estimate(table: &HashMap<(u32, u32), f64>, pair: &ClusteringPair) -> Option<(f64, f64, f64)> {
    let t = JointOverlapTable::from_entries(table.clone(), pair.gt.len(), pair.cand.len());
    let den = Normalization::Max.denominator(t.gt_entropy(), t.cand_entropy());
    let value = t.nmi(Normalization::Max)?;
    let rows = t.gt_marginals.iter().filter(|&&m| m > 0.0).count();
    let cols = t.cand_marginals.iter().filter(|&&m| m > 0.0).count();
    let cells = t.entries.len();
    Some((value, den, (cells + 1) as f64 - (rows + cols) as f64))
}

/// Estimates NMI (max-normalized) of `pair.cand` against `pair.gt`.
///
/// Convergence requires at least `evsmax` events and
/// `half_width + bias <= rerr`, where the half-width comes from the spread
/// of per-batch estimates at confidence `1 - rrisk` and `bias` is the
/// first-order plug-in bias of the pooled estimate. Workers own generators
/// seeded with `seed + worker`; results are reproducible for a fixed
/// `(seed, workers)`.
pub fn gnmi(pair: &ClusteringPair, cfg: &GnmiConfig, workers: usize) -> Result<GnmiResult> {
    cfg.validate()?;
    let workers = workers.max(1);
    let n = pair.nodes() as u32;

    // Exact marginals of the joint table, cheap to obtain from the indices.
    let gt_marg: Vec<f64> = pair
        .gt
        .clusters
        .iter()
        .map(|c| c.iter().map(|&v| pair.cand.index.shares(v) as f64).sum())
        .collect();
    let cand_marg: Vec<f64> = pair
        .cand
        .clusters
        .iter()
        .map(|c| c.iter().map(|&v| pair.gt.index.shares(v) as f64).sum())
        .collect();
    if n == 0 || Normalization::Max.denominator(entropy_of(&gt_marg), entropy_of(&cand_marg)) <= 0.0
    {
        return Err(Error::Degenerate(
            "degenerate clustering (single cluster)".into(),
        ));
    }

    let evsmax = max_events(pair.gt.memberships(), pair.cand.memberships(), cfg);
    let budget = evsmax.saturating_mul(cfg.max_wall_events);
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - cfg.rrisk / 2.0);

    let sampler = Sampler::new(pair);
    let mut states: Vec<Worker> = (0..workers as u64)
        .map(|w| Worker {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(w)),
            mixer: Mixer::default(),
        })
        .collect();
    let pool = if workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut pooled: HashMap<(u32, u32), f64> = HashMap::new();
    let mut batch_values: Vec<f64> = Vec::new();
    let mut events = 0u64;
    let mut importance = 0.0;
    let mut value = 0.0;
    let mut half_width = f64::INFINITY;
    let mut converged = false;

    while events < budget {
        let mut left = budget - events;
        let quotas: Vec<u64> = (0..workers)
            .map(|_| {
                let q = left.min(BATCH_EVENTS);
                left -= q;
                q
            })
            .collect();
        let rrisk = cfg.rrisk;
        let run = |(w, q): (&mut Worker, &u64)| w.run(&sampler, rrisk, *q);
        let batches: Vec<Batch> = match &pool {
            None => states.iter_mut().zip(&quotas).map(run).collect(),
            Some(pool) => pool.install(|| states.par_iter_mut().zip(&quotas).map(run).collect()),
        };
        for b in batches {
            if b.events == 0 {
                continue;
            }
            events += b.events;
            importance += b.importance;
            if b.events == BATCH_EVENTS {
                if let Some((v, _, _)) = estimate(&b.table, pair) {
                    batch_values.push(v);
                }
            }
            for (k, m) in b.table {
                *pooled.entry(k).or_insert(0.0) += m;
            }
        }

        let Some((v, den, excess_cells)) = estimate(&pooled, pair) else {
            continue;
        };
        value = v;
        if batch_values.len() >= 2 {
            let k = batch_values.len() as f64;
            let mean = batch_values.iter().sum::<f64>() / k;
            let var = batch_values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
            half_width = z * (var / k).sqrt();
            let bias =
                (excess_cells / (2.0 * events as f64 * std::f64::consts::LN_2) / den).max(0.0);
            if events >= evsmax && half_width + bias <= cfg.rerr {
                converged = true;
                break;
            }
        }
    }

    let diagnostic = (!converged).then(|| {
        format!(
            "no convergence after {events} events (budget {budget}); half-width {half_width:.4} \
             exceeds rerr {}; a relevance close to zero is likely",
            cfg.rerr
        )
    });
    Ok(GnmiResult {
        value,
        converged,
        events,
        evsmax,
        half_width,
        mean_importance: if events > 0 {
            importance / events as f64
        } else {
            0.0
        },
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Clustering;

    fn pair(a: Vec<Vec<u64>>, b: Vec<Vec<u64>>) -> ClusteringPair {
        ClusteringPair::new(&Clustering::new(a).unwrap(), &Clustering::new(b).unwrap()).unwrap()
    }

    #[test]
    fn event_budget_formula() {
        let cfg = GnmiConfig::default();
        assert_eq!(max_events(12, 12, &cfg), 1000);
        assert_eq!(max_events(5000, 4000, &cfg), 4000);
        let loose = GnmiConfig { rerr: 0.1, ..cfg };
        assert_eq!(max_events(150, 300, &loose), 150);
        assert_eq!(max_events(40, 300, &loose), 100);
    }

    #[test]
    fn config_validation() {
        assert!(GnmiConfig::default().validate().is_ok());
        for (rerr, rrisk) in [(0.0, 0.01), (1.0, 0.01), (0.01, 0.0), (0.01, 1.5)] {
            let cfg = GnmiConfig {
                rerr,
                rrisk,
                ..GnmiConfig::default()
            };
            assert!(cfg.validate().is_err(), "{rerr} {rrisk}");
        }
    }

    #[test]
    fn mixer_reports_new_pairs() {
        let mut m = Mixer::default();
        assert!(m.apply(1, 2));
        assert!(m.apply(0, 2));
        assert!(!m.apply(1, 2));
        assert_eq!(m.start_pair(), Some((1, 2)));
        assert_eq!(m.steps(), 3);
        assert_eq!(m.pairs(), [((1, 2), 2), ((0, 2), 1)]);
        m.reset();
        assert_eq!(m.start_pair(), None);
    }

    #[test]
    fn identical_partition_importance_is_inverse_cluster_size() {
        let clusters = vec![vec![0, 1, 2, 3], vec![4, 5], vec![6, 7, 8]];
        let p = pair(clusters.clone(), clusters);
        let s = Sampler::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut mixer = Mixer::default();
        for _ in 0..200 {
            let imp = s.try_get_sample(0.01, &mut mixer, &mut rng);
            let (g, c) = mixer.start_pair().unwrap();
            assert_eq!(g, c);
            let size = p.gt.clusters[g as usize].len() as f64;
            assert!((imp - 1.0 / size).abs() < 1e-15);
            assert!(mixer.pairs().iter().all(|((a, b), _)| a == b));
        }
    }

    #[test]
    fn singletons_have_unit_importance() {
        let clusters: Vec<Vec<u64>> = (0..10).map(|i| vec![i]).collect();
        let p = pair(clusters.clone(), clusters);
        let s = Sampler::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut mixer = Mixer::default();
        for _ in 0..50 {
            assert_eq!(s.try_get_sample(0.01, &mut mixer, &mut rng), 1.0);
        }
    }

    #[test]
    fn sample_trace_is_replayable() {
        let gt = vec![vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 1], vec![4, 1, 2]];
        let high = vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]];
        let p = pair(gt, high);
        let s = Sampler::new(&p);
        let trace = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mixer = Mixer::default();
            (0..64)
                .map(|_| s.try_get_sample(0.01, &mut mixer, &mut rng).to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(trace(42), trace(42));
        assert_ne!(trace(42), trace(43));
    }

    #[test]
    fn identical_partitions_converge_to_one() {
        let clusters: Vec<Vec<u64>> = (0..20).map(|i| (i * 10..i * 10 + 10).collect()).collect();
        let p = pair(clusters.clone(), clusters);
        let r = gnmi(&p, &GnmiConfig::default(), 1).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 0.01);
        assert!(r.events >= r.evsmax);
        assert!(r.diagnostic.is_none());
    }

    #[test]
    fn tiny_budget_is_flagged_not_converged() {
        let p = pair(vec![vec![1, 2], vec![3, 4]], vec![vec![1, 3], vec![2, 4]]);
        let cfg = GnmiConfig {
            rerr: 0.9,
            rrisk: 0.9,
            seed: 3,
            max_wall_events: 1,
        };
        let r = gnmi(&p, &cfg, 1).unwrap();
        assert!(!r.converged);
        assert_eq!(r.events, r.evsmax);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn single_cluster_is_degenerate() {
        let p = pair(vec![vec![1, 2, 3]], vec![vec![1, 2, 3]]);
        assert!(matches!(
            gnmi(&p, &GnmiConfig::default(), 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn fixed_seed_is_bit_reproducible() {
        let gt: Vec<Vec<u64>> = (0..8).map(|i| (i * 25..i * 25 + 25).collect()).collect();
        let cand: Vec<Vec<u64>> = (0..10)
            .map(|i| (0..200).filter(|v| v % 10 == i).collect())
            .collect();
        let p = pair(gt, cand);
        let cfg = GnmiConfig {
            seed: 11,
            ..GnmiConfig::default()
        };
        let a = gnmi(&p, &cfg, 1).unwrap();
        let b = gnmi(&p, &cfg, 1).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.events, b.events);
        let c = gnmi(&p, &cfg, 3).unwrap();
        let d = gnmi(&p, &cfg, 3).unwrap();
        assert_eq!(c.value.to_bits(), d.value.to_bits());
    }
}
