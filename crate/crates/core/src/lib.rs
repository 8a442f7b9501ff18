//! Accuracy metrics for overlapping and multi-resolution clusterings.
//!
//! A candidate clustering is compared against a ground truth with
//! pair-counting ([`omega`], [`omega_soft`]), best-match ([`mean_f1`]) and
//! information-theoretic ([`nmi_exact`], [`gnmi`]) measures. Inputs are
//! [`Clustering`]s, usually read from clusters-per-line text files, aligned
//! into a [`ClusteringPair`] before evaluation.
//!
//! ```
//! use clustereval::{omega_soft, parse_cnl, ClusteringPair, ParseOptions};
//!
//! let gt = parse_cnl("1 2 3\n2 3 4\n3 4 1\n4 1 2\n", ParseOptions::default()).unwrap();
//! let cand = parse_cnl("1 2\n2 3\n3 4\n4 1\n", ParseOptions::default()).unwrap();
//! let pair = ClusteringPair::new(&gt, &cand).unwrap();
//! let score = omega_soft(&pair, 1).unwrap();
//! assert!((score.value - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod align;
pub mod cli;
pub mod contrib;
pub mod corpus;
pub mod error;
pub mod gnmi;
pub mod index;
pub mod meanf1;
pub mod model;
pub mod nmi;
pub mod omega;
pub mod oracles;
pub mod synth;

pub use align::{align_universes, Aligned, ClusteringPair, Side, UniversePolicy};
pub use contrib::{ContributionMode, MatchCounter};
pub use error::{Error, Result};
pub use gnmi::{gnmi, max_events, GnmiConfig, GnmiResult};
pub use index::NodeIndex;
pub use meanf1::{mean_f1, mean_f1_with, Averaging, F1Variant, MeanF1, MeanF1Options};
pub use model::{load_cnl, parse_cnl, Cluster, Clustering, NodeId, ParseOptions};
pub use nmi::{entropy, joint_overlap_table, nmi_exact, JointOverlapTable, Normalization};
pub use omega::{omega, omega_soft, pair_profile, OmegaScore, PairProfile};
pub use synth::generate_synthetic;
