//! Reference explainers.
//!
//! Additive explainers (exact and sampled Shapley, the LIME-style surrogate,
//! occlusion) emit one weight per position and are turned into rankings by
//! weight magnitude. Selection explainers (smallest sufficient subset,
//! random, oracle) emit rankings directly. Every ranking is a strict total
//! order over all positions.

mod game;
mod greedy;
mod lime;
mod occlusion;
mod shapley;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::SelectionPartition;

pub use game::Game;
pub use greedy::greedy_sufficient_subset;
pub use lime::lime_rank;
pub use occlusion::occlusion_rank;
pub use shapley::{exact_shapley, sampled_shapley};

/// One signed, finite weight per position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttributionVector(Vec<f64>);

impl AttributionVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidRanking(format!("weight at position {i} is not finite")));
        }
        Ok(AttributionVector(weights))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for AttributionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Positions ordered most important first.
///
/// `padded` marks rankings whose tail was filled in by position order
/// rather than decided by the explainer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<usize>,
    #[serde(default)]
    padded: bool,
}

impl Ranking {
    /// Checks that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &p in &order {
            if p >= n {
                return Err(Error::InvalidRanking(format!("position {p} out of range {n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidRanking(format!("position {p} ranked twice")));
            }
        }
        Ok(Ranking {
            order,
            padded: false,
        })
    }

    /// Completes a partial ranking with the unranked positions in
    /// ascending order.
    pub fn pad(prefix: Vec<usize>, n: usize) -> Result<Self> {
        let mut order = prefix;
        let padded = order.len() < n;
        let rest: Vec<usize> = (0..n).filter(|p| !order.contains(p)).collect();
        order.extend(rest);
        let mut r = Ranking::new(order)?;
        r.padded = padded;
        Ok(r)
    }

    pub fn with_padded(mut self, padded: bool) -> Self {
        self.padded = padded;
        self
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn padded(&self) -> bool {
        self.padded
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 0-based rank of every position.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order.len()];
        for (rank, &p) in self.order.iter().enumerate() {
            r[p] = rank;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainerConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Defaults to `0.75 * sqrt(n)` per instance.
    pub kernel_width: Option<f64>,
    pub ridge_lambda: f64,
    pub exact_shapley_max_n: usize,
    pub greedy_epsilon: f64,
    /// Defaults to the instance length.
    pub greedy_max_k: Option<usize>,
    /// Largest number of candidate subsets of one size the sufficient-subset
    /// search enumerates before falling back to greedy growth.
    pub subset_search_budget: usize,
    /// Rank additive explainers by signed weight instead of magnitude.
    pub signed_ranking: bool,
}

impl Default for ExplainerConfig {
    fn default() -> Self {
        ExplainerConfig {
            seed: 0,
            n_samples: 2000,
            kernel_width: None,
            ridge_lambda: 1e-3,
            exact_shapley_max_n: 22,
            greedy_epsilon: 0.01,
            greedy_max_k: None,
            subset_search_budget: 50_000,
            signed_ranking: false,
        }
    }
}

impl ExplainerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidExplainerConfig(m.into()));
        if self.n_samples < 1 {
            return bad("n_samples must be at least 1");
        }
        if self.exact_shapley_max_n < 1 || self.exact_shapley_max_n > 30 {
            return bad("exact_shapley_max_n must lie in 1..=30");
        }
        if self.greedy_max_k == Some(0) {
            return bad("greedy_max_k must be at least 1");
        }
        if self.subset_search_budget < 1 {
            return bad("subset_search_budget must be at least 1");
        }
        if !(self.ridge_lambda.is_finite() && self.ridge_lambda >= 0.0) {
            return bad("ridge_lambda must be non-negative");
        }
        if !(self.greedy_epsilon.is_finite() && self.greedy_epsilon >= 0.0) {
            return bad("greedy_epsilon must be non-negative");
        }
        if let Some(w) = self.kernel_width {
            if !(w.is_finite() && w > 0.0) {
                return bad("kernel_width must be positive");
            }
        }
        Ok(())
    }

    pub fn kernel_width_for(&self, n: usize) -> f64 {
        self.kernel_width.unwrap_or(0.75 * (n as f64).sqrt())
    }
}

/// Orders positions by `|w|` (or `w` when `signed`) descending, ties by
/// ascending position.
pub fn to_ranking(w: &AttributionVector, signed: bool) -> Ranking {
    // `+ 0.0` folds -0.0 into 0.0 so that total_cmp treats them as a tie.
    let key = |i: usize| {
        let v = w[i] + 0.0;
        if signed {
            v
        } else {
            v.abs()
        }
    };
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    Ranking {
        order,
        padded: false,
    }
}

/// Uniformly random permutation of `0..n`.
pub fn random_rank(n: usize, seed: u64) -> Ranking {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ranking {
        order,
        padded: false,
    }
}

/// SR first, then SDK, then N, each in position order.
pub fn oracle_rank(partition: &SelectionPartition) -> Result<Ranking> {
    Ranking::new(
        partition
            .sr
            .iter()
            .chain(&partition.sdk)
            .chain(&partition.n)
            .copied()
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplainerKind {
    ExactShapley,
    SampledShapley,
    Lime,
    Occlusion,
    GreedySubset,
    Random,
    Oracle,
}

impl ExplainerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExplainerKind::ExactShapley => "exact_shapley",
            ExplainerKind::SampledShapley => "sampled_shapley",
            ExplainerKind::Lime => "lime",
            ExplainerKind::Occlusion => "occlusion",
            ExplainerKind::GreedySubset => "greedy_subset",
            ExplainerKind::Random => "random",
            ExplainerKind::Oracle => "oracle",
        }
    }

    pub fn uses_seed(self) -> bool {
        matches!(
            self,
            ExplainerKind::SampledShapley | ExplainerKind::Lime | ExplainerKind::Random
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub ranking: Ranking,
    pub weights: Option<AttributionVector>,
}

/// Runs one explainer. `partition` is only consulted by the oracle.
pub fn explain(
    kind: ExplainerKind,
    game: &Game<'_>,
    partition: Option<&SelectionPartition>,
    cfg: &ExplainerConfig,
) -> Result<Explanation> {
    cfg.validate()?;
    let additive = |w: AttributionVector| Explanation {
        ranking: to_ranking(&w, cfg.signed_ranking),
        weights: Some(w),
    };
    Ok(match kind {
        ExplainerKind::ExactShapley => additive(exact_shapley(game, cfg)?),
        ExplainerKind::SampledShapley => additive(sampled_shapley(game, cfg)?),
        ExplainerKind::Lime => additive(lime_rank(game, cfg)?),
        ExplainerKind::Occlusion => additive(occlusion_rank(game)?),
        ExplainerKind::GreedySubset => Explanation {
            ranking: greedy_sufficient_subset(game, cfg)?,
            weights: None,
        },
        ExplainerKind::Random => Explanation {
            ranking: random_rank(game.len(), cfg.seed),
            weights: None,
        },
        ExplainerKind::Oracle => {
            let p = partition.ok_or_else(|| {
                Error::InvalidExplainerConfig("the oracle explainer needs a verified partition".into())
            })?;
            Explanation {
                ranking: oracle_rank(p)?,
                weights: None,
            }
        }
    })
}
