//! Error metrics for rankings over verified instances.
//!
//! For an explainer ranking `r_1, ..., r_n` of an instance with partition
//! SR / SDK / N:
//!
//! * `%_first`: share of instances whose top-ranked position is in N;
//! * `%_misrnk`: share of instances where some N position is ranked above
//!   some SR position;
//! * `avg_misrnk`: mean number of N positions ranked above the lowest-ranked
//!   SR position (`last_si`).
//!
//! SDK positions are never penalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explain::Ranking;
use crate::harness::{PositionClass, VerifiedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceVerdict {
    pub first_in_n: bool,
    pub misranked: bool,
    pub misrank_count: usize,
}

fn classes(v: &VerifiedInstance, r: &Ranking) -> Result<Vec<PositionClass>> {
    if r.len() != v.len() {
        return Err(Error::RankingLength {
            expected: v.len(),
            got: r.len(),
        });
    }
    if v.partition.sr.is_empty() {
        return Err(Error::EmptyRelevantSet(v.id().to_string()));
    }
    v.partition.classes(v.len()).ok_or_else(|| {
        Error::InvalidRanking(format!("partition of {:?} does not cover its positions", v.id()))
    })
}

/// Single pass over the ranking.
pub fn judge_instance(v: &VerifiedInstance, r: &Ranking) -> Result<InstanceVerdict> {
    let class = classes(v, r)?;
    let order = r.order();
    let last_si = order
        .iter()
        .rposition(|&p| class[p] == PositionClass::Relevant)
        .expect("SR is non-empty");
    let misrank_count = order[..last_si]
        .iter()
        .filter(|&&p| class[p] == PositionClass::NonSelected)
        .count();
    Ok(InstanceVerdict {
        first_in_n: class[order[0]] == PositionClass::NonSelected,
        misranked: misrank_count > 0,
        misrank_count,
    })
}

/// Quadratic re-derivation by pairwise scanning. Kept independent of
/// [`judge_instance`] so each checks the other.
pub fn oracle_judge(v: &VerifiedInstance, r: &Ranking) -> Result<InstanceVerdict> {
    classes(v, r)?;
    let order = r.order();
    let in_n = |p: &usize| v.partition.n.contains(p);
    let in_sr = |p: &usize| v.partition.sr.contains(p);

    let misranked = (0..order.len())
        .filter(|&i| in_n(&order[i]))
        .any(|i| (i + 1..order.len()).any(|j| in_sr(&order[j])));
    // An N position counts when some SR position is ranked below it.
    let misrank_count = (0..order.len())
        .filter(|&i| in_n(&order[i]) && (i + 1..order.len()).any(|j| in_sr(&order[j])))
        .count();
    Ok(InstanceVerdict {
        first_in_n: v.partition.n.iter().any(|&p| p == order[0]),
        misranked,
        misrank_count,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub pct_first: f64,
    pub pct_misrnk: f64,
    pub avg_misrnk_mean: f64,
    /// Population standard deviation.
    pub avg_misrnk_std: f64,
    /// Sample (n - 1) standard deviation; 0 for a single instance.
    pub avg_misrnk_sample_std: f64,
    pub n_instances: usize,
}

pub fn aggregate(verdicts: &[InstanceVerdict]) -> Result<MetricsReport> {
    if verdicts.is_empty() {
        return Err(Error::NoVerdicts);
    }
    let n = verdicts.len() as f64;
    let share = |f: fn(&InstanceVerdict) -> bool| {
        100.0 * verdicts.iter().filter(|v| f(v)).count() as f64 / n
    };
    let counts: Vec<f64> = verdicts.iter().map(|v| v.misrank_count as f64).collect();
    let mean = counts.iter().sum::<f64>() / n;
    let ss = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>();
    Ok(MetricsReport {
        pct_first: share(|v| v.first_in_n),
        pct_misrnk: share(|v| v.misranked),
        avg_misrnk_mean: mean,
        avg_misrnk_std: (ss / n).sqrt(),
        avg_misrnk_sample_std: if verdicts.len() > 1 {
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        },
        n_instances: verdicts.len(),
    })
}

/// Two-decimal rounding used in emitted reports.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
