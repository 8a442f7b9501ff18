//! Brute-force reference implementations.
//!
//! Everything here works on plain node sets and recomputes each quantity
//! from scratch. None of it touches the node index or the fast paths, so the
//! two can be checked against each other.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::contrib::ContributionMode;
use crate::error::{Error, Result};
use crate::meanf1::{Averaging, F1Variant};
use crate::model::Clustering;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub metric: String,
    pub oracle: f64,
    pub fast: f64,
    pub abs_diff: f64,
}

impl OracleReport {
    pub fn new(metric: impl Into<String>, oracle: f64, fast: f64) -> Self {
        Self {
            metric: metric.into(),
            oracle,
            fast,
            abs_diff: (oracle - fast).abs(),
        }
    }
}

fn sets(c: &Clustering) -> Vec<HashSet<u64>> {
    c.clusters()
        .iter()
        .map(|x| x.members().iter().map(|n| n.0).collect())
        .collect()
}

fn membership_counts(sets: &[HashSet<u64>]) -> HashMap<u64, usize> {
    let mut m = HashMap::new();
    for s in sets {
        for &v in s {
            *m.entry(v).or_insert(0) += 1;
        }
    }
    m
}

fn same_universe(gt: &Clustering, cand: &Clustering) -> Result<Vec<u64>> {
    let a: HashSet<u64> = gt.universe().iter().map(|n| n.0).collect();
    let b: HashSet<u64> = cand.universe().iter().map(|n| n.0).collect();
    if a != b {
        return Err(Error::UniverseMismatch {
            only_gt: a.difference(&b).count(),
            only_cand: b.difference(&a).count(),
        });
    }
    let mut u: Vec<u64> = a.into_iter().collect();
    u.sort_unstable();
    Ok(u)
}

fn choose2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

/// Classical Adjusted Rand Index of two partitions.
pub fn ari_oracle(gt: &Clustering, cand: &Clustering) -> Result<f64> {
    let universe = same_universe(gt, cand)?;
    let (sg, sc) = (sets(gt), sets(cand));
    for s in [&sg, &sc] {
        if membership_counts(s).values().any(|&k| k != 1) {
            return Err(Error::InvalidParameter("oracle requires partitions".into()));
        }
    }
    let n = universe.len() as f64;
    let mut index = 0.0;
    for a in &sg {
        for b in &sc {
            index += choose2(a.intersection(b).count() as f64);
        }
    }
    let rows: f64 = sg.iter().map(|a| choose2(a.len() as f64)).sum();
    let cols: f64 = sc.iter().map(|b| choose2(b.len() as f64)).sum();
    let expected = rows * cols / choose2(n);
    let max = 0.5 * (rows + cols);
    if max == expected {
        return Err(Error::Degenerate(
            "ARI undefined for these partitions".into(),
        ));
    }
    Ok((index - expected) / (max - expected))
}

/// Omega (or Soft Omega) by enumerating node pairs and testing every
/// cluster for both endpoints.
pub fn naive_omega(gt: &Clustering, cand: &Clustering, soft: bool) -> Result<f64> {
    let universe = same_universe(gt, cand)?;
    if universe.len() < 2 {
        return Err(Error::Degenerate("fewer than 2 nodes".into()));
    }
    let (sg, sc) = (sets(gt), sets(cand));
    let both = |s: &[HashSet<u64>], u: u64, v: u64| {
        s.iter()
            .filter(|x| x.contains(&u) && x.contains(&v))
            .count()
    };
    let mut hist_g: BTreeMap<usize, f64> = BTreeMap::new();
    let mut hist_c: BTreeMap<usize, f64> = BTreeMap::new();
    let mut agreed = 0.0;
    let mut pairs = 0.0;
    for (i, &u) in universe.iter().enumerate() {
        for &v in &universe[i + 1..] {
            let (g, c) = (both(&sg, u, v), both(&sc, u, v));
            *hist_g.entry(g).or_insert(0.0) += 1.0;
            *hist_c.entry(c).or_insert(0.0) += 1.0;
            pairs += 1.0;
            if g == c {
                agreed += 1.0;
            } else if soft && g > 0 && c > 0 {
                agreed += g.min(c) as f64 / g.max(c) as f64;
            }
        }
    }
    let observed = agreed / pairs;
    let expected = if soft {
        // ranked vectors have one slot per cluster count, plus one when a
        // pair lies in every cluster
        let len_g = sg.len().max(hist_g.keys().max().unwrap() + 1);
        let len_c = sc.len().max(hist_c.keys().max().unwrap() + 1);
        let at = |h: &BTreeMap<usize, f64>, j| h.get(&j).copied().unwrap_or(0.0);
        let mut total = 0.0;
        for j in 0..len_g.max(len_c) {
            total += match (j < len_g, j < len_c) {
                (true, true) => at(&hist_g, j) * at(&hist_c, j),
                (true, false) => at(&hist_g, j),
                (false, true) => at(&hist_c, j),
                (false, false) => 0.0,
            };
        }
        total / (pairs * pairs)
    } else {
        hist_g
            .iter()
            .map(|(j, a)| a * hist_c.get(j).copied().unwrap_or(0.0))
            .sum::<f64>()
            / (pairs * pairs)
    };
    if expected == 1.0 {
        return if observed == 1.0 {
            Ok(1.0)
        } else {
            Err(Error::SaturatedExpectation)
        };
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Mean F1 with weighted averaging by explicit best matching over all
/// cluster pairs.
pub fn naive_mean_f1(
    gt: &Clustering,
    cand: &Clustering,
    variant: F1Variant,
    mode: ContributionMode,
) -> Result<f64> {
    naive_mean_f1_with(gt, cand, variant, mode, Averaging::Weighted)
}

pub fn naive_mean_f1_with(
    gt: &Clustering,
    cand: &Clustering,
    variant: F1Variant,
    mode: ContributionMode,
    averaging: Averaging,
) -> Result<f64> {
    same_universe(gt, cand)?;
    let (sg, sc) = (sets(gt), sets(cand));
    let (mg, mc) = (membership_counts(&sg), membership_counts(&sc));
    let overlapping = mode == ContributionMode::Overlapping;
    let weight = |s: &HashSet<u64>, own: &HashMap<u64, usize>| -> f64 {
        if overlapping {
            s.iter().map(|v| 1.0 / own[v] as f64).sum()
        } else {
            s.len() as f64
        }
    };
    let matched = |a: &HashSet<u64>, b: &HashSet<u64>| -> f64 {
        if overlapping {
            a.intersection(b)
                .map(|v| 1.0 / mg[v].max(mc[v]) as f64)
                .sum()
        } else {
            a.intersection(b).count() as f64
        }
    };
    let prob = variant == F1Variant::F1p;
    let side = |xs: &[HashSet<u64>],
                own: &HashMap<u64, usize>,
                ys: &[HashSet<u64>],
                other: &HashMap<u64, usize>| {
        let mut num = 0.0;
        let mut den = 0.0;
        for x in xs {
            let wx = weight(x, own);
            let mut best = 0.0_f64;
            for y in ys {
                let wy = weight(y, other);
                let m = matched(x, y);
                let s = if prob {
                    (m * m / (wx * wy)).sqrt()
                } else {
                    2.0 * m / (wx + wy)
                };
                best = best.max(s);
            }
            let w = if averaging == Averaging::Weighted {
                wx
            } else {
                1.0
            };
            num += w * best;
            den += w;
        }
        num / den
    };
    let a = side(&sg, &mg, &sc, &mc);
    let b = side(&sc, &mc, &sg, &mg);
    Ok(match variant {
        F1Variant::F1a => (a + b) / 2.0,
        _ if a + b == 0.0 => 0.0,
        _ => 2.0 * a * b / (a + b),
    })
}

/// Max-normalized NMI from explicit set intersections of every
/// (category, cluster) pair.
pub fn nmi_oracle(gt: &Clustering, cand: &Clustering) -> Result<f64> {
    same_universe(gt, cand)?;
    let (sg, sc) = (sets(gt), sets(cand));
    let table: Vec<Vec<f64>> = sg
        .iter()
        .map(|a| {
            sc.iter()
                .map(|b| a.intersection(b).count() as f64)
                .collect()
        })
        .collect();
    let total: f64 = table.iter().flatten().sum();
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..sc.len())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let h = |v: &[f64]| -> f64 {
        v.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -(x / total) * (x / total).log2())
            .sum()
    };
    let mut mi = 0.0;
    for (i, r) in table.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if x > 0.0 {
                mi += x / total * (x * total / (rows[i] * cols[j])).log2();
            }
        }
    }
    let den = h(&rows).max(h(&cols));
    if den <= 0.0 {
        return Err(Error::Degenerate("single cluster".into()));
    }
    Ok((mi / den).clamp(0.0, 1.0))
}
