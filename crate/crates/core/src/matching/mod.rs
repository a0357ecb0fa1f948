//! Multi-pass streaming (1−ε)-approximate matching, unweighted and weighted,
//! plus exact exponential-time oracles for small graphs.
//!
//! `k = ⌈1/ε⌉`. The engine runs one greedy pass and then up to `2k−1`
//! augmentation rounds of at most `k` passes each, so a run never uses more
//! than `k·(2k−1)+1` passes. See [`engine`] for the round structure.

mod engine;
mod oracle;
mod view;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

pub use engine::{streaming_max_matching, streaming_max_weight_matching, EngineRun};
pub use oracle::{
    has_short_augmenting_path, oracle_max_matching, oracle_max_weight_matching,
    MATCHING_ORACLE_MAX_VERTICES,
};
pub use view::ContractionView;

/// Approximation parameter `ε ∈ (0, 1]` with its derived search depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxParams {
    #[serde(serialize_with = "serialize_ratio")]
    epsilon: Ratio<i64>,
    k: usize,
}

fn serialize_ratio<S: serde::Serializer>(
    r: &Ratio<i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl ApproxParams {
    pub fn new(epsilon: Ratio<i64>) -> Result<Self> {
        if epsilon <= Ratio::from_integer(0) || epsilon > Ratio::from_integer(1) {
            return Err(Error::Epsilon(epsilon.to_string()));
        }
        let k = epsilon.recip().ceil().to_integer() as usize;
        Ok(ApproxParams { epsilon, k })
    }

    /// `ε = 1/k`.
    pub fn from_k(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Epsilon("1/0".into()));
        }
        Self::new(Ratio::new(1, k as i64))
    }

    pub fn epsilon(&self) -> Ratio<i64> {
        self.epsilon
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Longest augmenting path (in edges) the engine searches for.
    pub fn max_aug_len(&self) -> usize {
        2 * self.k - 1
    }

    /// Declared upper bound on the passes of one engine run.
    pub fn pass_limit(&self) -> usize {
        self.k * (2 * self.k - 1) + 1
    }
}

impl FromStr for ApproxParams {
    type Err = Error;

    /// Accepts `"p/q"` or an integer; decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let r: Ratio<i64> = s
            .trim()
            .parse()
            .map_err(|_| Error::Epsilon(s.to_string()))?;
        Self::new(r)
    }
}

impl fmt::Display for ApproxParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ε = {} (k = {})", self.epsilon, self.k)
    }
}
