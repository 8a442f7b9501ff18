//! Bundled sample clusterings.
//!
//! `tableI` is the four-node example where the hard Omega Index cannot tell a
//! poor candidate from a good one. The `constraints` samples each pair a
//! ground truth with a lower- and a higher-quality candidate for one formal
//! constraint: homogeneity, completeness, rag bag and size vs. quality.

use crate::model::{parse_cnl, Clustering, ParseOptions};

/// A ground truth with two candidates, the second expected to score higher.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub name: &'static str,
    pub gt: &'static str,
    pub low: &'static str,
    pub high: &'static str,
}

macro_rules! sample {
    ($name:literal, $dir:literal) => {
        Sample {
            name: $name,
            gt: include_str!(concat!("../corpus/", $dir, "/gt.cnl")),
            low: include_str!(concat!("../corpus/", $dir, "/low.cnl")),
            high: include_str!(concat!("../corpus/", $dir, "/high.cnl")),
        }
    };
}

pub const FOUR_NODE: Sample = sample!("tableI", "tableI");

pub const CONSTRAINTS: [Sample; 4] = [
    sample!("homogeneity", "constraints/homogeneity"),
    sample!("completeness", "constraints/completeness"),
    sample!("ragbag", "constraints/ragbag"),
    sample!("szquality", "constraints/szquality"),
];

impl Sample {
    /// Parsed `(gt, low, high)`; the bundled files are known to be valid.
    pub fn load(&self) -> (Clustering, Clustering, Clustering) {
        let p = |s| parse_cnl(s, ParseOptions::default()).expect("bundled corpus parses");
        (p(self.gt), p(self.low), p(self.high))
    }

    /// Relative path of the sample directory inside the corpus.
    pub fn dir(&self) -> String {
        if self.name == "tableI" {
            self.name.to_string()
        } else {
            format!("constraints/{}", self.name)
        }
    }
}

pub fn all() -> impl Iterator<Item = Sample> {
    std::iter::once(FOUR_NODE).chain(CONSTRAINTS)
}
