//! Builds verified evaluation instances from a target model and a corpus.
//!
//! An instance is retained only when
//!
//! 1. re-running the generator on its own selection reselects everything
//!    (`S_{S_x} = S_x`, no handshake),
//! 2. at least `min_sr` selected tokens are clearly relevant: removing one
//!    from the selection moves the encoder output by at least `tau`,
//! 3. (audit, on by default) deleting any subset of the non-selected tokens
//!    leaves the prediction unchanged.
//!
//! Condition 1 alone only certifies deleting *all* non-selected tokens at
//! once. Under deletion masking a partial deletion can make two tokens
//! adjacent and fire a higher-priority rule, so the audit checks subsets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::model::{Instance, RuleModel, Selection, TargetModel};

/// Slack for the `|delta| >= tau` test so that e.g. `0.7 - 0.6` clears 0.1.
pub const RELEVANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub tau: f64,
    pub min_sr: usize,
    /// Reject instances where some partial deletion of N changes the prediction.
    pub audit_deletions: bool,
    /// Largest |N| audited by full subset enumeration; above it rule models
    /// get a conservative structural check.
    pub audit_exhaustive_max: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            tau: 0.1,
            min_sr: 1,
            audit_deletions: true,
            audit_exhaustive_max: 12,
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidHarnessConfig(format!(
                "tau must lie in (0, 1], got {}",
                self.tau
            )));
        }
        if self.min_sr < 1 {
            return Err(Error::InvalidHarnessConfig("min_sr must be at least 1".into()));
        }
        if self.audit_exhaustive_max > 24 {
            return Err(Error::InvalidHarnessConfig(
                "audit_exhaustive_max above 24 is not supported".into(),
            ));
        }
        Ok(())
    }
}

/// SR / SDK / N split of an instance's positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionPartition {
    pub sr: Vec<usize>,
    pub sdk: Vec<usize>,
    pub n: Vec<usize>,
}

impl SelectionPartition {
    /// `sr` must be a subset of `selection`.
    pub fn new(len: usize, selection: &Selection, sr: &[usize]) -> Self {
        let sdk = selection.iter().filter(|p| !sr.contains(p)).collect();
        let n = (0..len).filter(|&p| !selection.contains(p)).collect();
        SelectionPartition {
            sr: sr.to_vec(),
            sdk,
            n,
        }
    }

    pub fn class_of(&self, position: usize) -> Option<PositionClass> {
        if self.sr.contains(&position) {
            Some(PositionClass::Relevant)
        } else if self.sdk.contains(&position) {
            Some(PositionClass::Unknown)
        } else if self.n.contains(&position) {
            Some(PositionClass::NonSelected)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.sr.len() + self.sdk.len() + self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `sr ∪ sdk`, sorted.
    pub fn selected(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.sr.iter().chain(&self.sdk).copied().collect();
        s.sort_unstable();
        s
    }

    /// Class of every position, indexed by position; `None` if the three
    /// sets do not tile `0..len`.
    pub fn classes(&self, len: usize) -> Option<Vec<PositionClass>> {
        // Called once per judged ranking; short instances skip the heap.
        let mut small = [false; 64];
        let mut big = Vec::new();
        let seen: &mut [bool] = if len <= small.len() {
            &mut small[..len]
        } else {
            big.resize(len, false);
            &mut big
        };
        let mut out = vec![PositionClass::NonSelected; len];
        for (set, class) in [
            (&self.sr, PositionClass::Relevant),
            (&self.sdk, PositionClass::Unknown),
            (&self.n, PositionClass::NonSelected),
        ] {
            for &p in set {
                if p >= len || std::mem::replace(&mut seen[p], true) {
                    return None;
                }
                out[p] = class;
            }
        }
        seen.iter().all(|&s| s).then_some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositionClass {
    /// SR: selected and clearly relevant.
    Relevant,
    /// SDK: selected, relevance unknown.
    Unknown,
    /// N: not selected, zero contribution.
    NonSelected,
}

/// An instance that passed every pruning step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedInstance {
    pub instance: Instance,
    pub partition: SelectionPartition,
    pub prediction: f64,
    pub bias_prediction: f64,
}

impl VerifiedInstance {
    pub fn id(&self) -> &str {
        &self.instance.id
    }

    pub fn len(&self) -> usize {
        self.instance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectReason {
    Handshake,
    NoSr,
    UnsafeDeletion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub id: String,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verification {
    Accepted(VerifiedInstance),
    Rejected(Rejection),
}

/// True iff the generator, run on the selected subsequence, selects all of
/// it again. Vacuously true for an empty selection.
pub fn check_no_handshake(model: &TargetModel, x: &Instance) -> bool {
    reselects_all(model, x, &model.generate(x))
}

fn reselects_all(model: &TargetModel, x: &Instance, selection: &Selection) -> bool {
    let restricted = x.restrict(selection);
    let again = model.generate_seq(&restricted);
    again.len() == restricted.len() && again.iter().enumerate().all(|(i, &p)| i == p)
}

pub fn clears_tau(delta: f64, tau: f64) -> bool {
    delta.abs() >= tau - RELEVANCE_SLACK
}

/// Selected positions whose single removal from the selected subsequence
/// changes the encoder output by at least `tau`.
pub fn clearly_relevant_set(model: &TargetModel, x: &Instance, tau: f64) -> Vec<usize> {
    relevant_in(model, x, &model.generate(x), tau)
}

fn relevant_in(model: &TargetModel, x: &Instance, selection: &Selection, tau: f64) -> Vec<usize> {
    let restricted = x.restrict(selection);
    let base = model.encode(&restricted);
    selection
        .iter()
        .enumerate()
        .filter(|&(k, _)| {
            let occluded: Vec<&str> = restricted
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, t)| *t)
                .collect();
            clears_tau(model.encode(&occluded) - base, tau)
        })
        .map(|(_, p)| p)
        .collect()
}

/// Whether deleting any subset of the non-selected positions leaves the
/// prediction unchanged. Exact for lexicon models and for rule models with
/// `|N| <= exhaustive_max`; conservative (may answer false) otherwise.
pub fn deletions_are_inert(
    model: &TargetModel,
    x: &Instance,
    selection: &Selection,
    exhaustive_max: usize,
) -> bool {
    let non_selected: Vec<usize> = (0..x.len()).filter(|&p| !selection.contains(p)).collect();
    if non_selected.is_empty() {
        return true;
    }
    match model {
        // Selection is per token and the encoder is additive over the
        // selected tokens, so removing unselected tokens changes nothing.
        TargetModel::Lexicon(_) => true,
        TargetModel::Rule(rules) => {
            if non_selected.len() <= exhaustive_max {
                exhaustive_inert(model, x, &non_selected)
            } else {
                structurally_inert(rules, x, selection)
            }
        }
    }
}

fn exhaustive_inert(model: &TargetModel, x: &Instance, non_selected: &[usize]) -> bool {
    let full = model.predict(x);
    (1u64..(1u64 << non_selected.len())).all(|bits| {
        let mut keep = Coalition::full(x.len());
        for (k, &p) in non_selected.iter().enumerate() {
            if bits & (1 << k) != 0 {
                keep.remove(p);
            }
        }
        model.predict_masked(x, &keep) == full
    })
}

fn structurally_inert(model: &RuleModel, x: &Instance, selection: &Selection) -> bool {
    let Some((fired, _)) = model.firing_rule(&x.tokens) else {
        return true;
    };
    if !model.rules()[fired].selects_whole_pattern() {
        return false;
    }
    let deletable: Vec<bool> = (0..x.len()).map(|p| !selection.contains(p)).collect();
    !model.rules()[..fired]
        .iter()
        .any(|r| formable_by_deletion(&x.tokens, &deletable, r.pattern()))
}

/// Whether `pattern` can be made contiguous by deleting only positions
/// flagged in `deletable`.
pub(crate) fn formable_by_deletion<S: AsRef<str>, P: AsRef<str>>(
    seq: &[S],
    deletable: &[bool],
    pattern: &[P],
) -> bool {
    let m = pattern.len();
    if m == 0 {
        return false;
    }
    // alive[k]: some earlier position completed pattern[..=k] and everything
    // after it so far is deletable.
    let mut alive = vec![false; m];
    for (p, tok) in seq.iter().enumerate() {
        let mut reach = vec![false; m];
        for k in 0..m {
            reach[k] = tok.as_ref() == pattern[k].as_ref() && (k == 0 || alive[k - 1]);
        }
        if reach[m - 1] {
            return true;
        }
        for k in 0..m {
            alive[k] = reach[k] || (alive[k] && deletable[p]);
        }
    }
    false
}

pub fn verify_instance(model: &TargetModel, x: &Instance, cfg: &HarnessConfig) -> Verification {
    let reject = |reason| {
        Verification::Rejected(Rejection {
            id: x.id.clone(),
            reason,
        })
    };
    let selection = model.generate(x);
    if !reselects_all(model, x, &selection) {
        return reject(RejectReason::Handshake);
    }
    let sr = relevant_in(model, x, &selection, cfg.tau);
    if sr.len() < cfg.min_sr {
        return reject(RejectReason::NoSr);
    }
    if cfg.audit_deletions
        && !deletions_are_inert(model, x, &selection, cfg.audit_exhaustive_max)
    {
        return reject(RejectReason::UnsafeDeletion);
    }
    Verification::Accepted(VerifiedInstance {
        partition: SelectionPartition::new(x.len(), &selection, &sr),
        prediction: model.predict(x),
        bias_prediction: model.encode::<&str>(&[]),
        instance: x.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Population statistics; `None` for an empty sample.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Some(MeanStd {
            mean,
            std: var.sqrt(),
        })
    }
}

/// Dataset statistics in the layout of the usual "statistics of our
/// datasets" table, plus the deletion-audit column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruningStats {
    pub n_total: usize,
    pub n_retained: usize,
    pub n_handshake: usize,
    pub n_no_sr: usize,
    pub n_unsafe_deletion: usize,
    pub avg_len: Option<MeanStd>,
    pub avg_s: Option<MeanStd>,
    pub avg_sr: Option<MeanStd>,
    pub avg_sdk: Option<MeanStd>,
    pub avg_n: Option<MeanStd>,
    /// Over all instances.
    pub pct_handshake_pruned: f64,
    /// Over the non-handshake instances.
    pub pct_no_sr_pruned: f64,
    /// Over the instances that passed both earlier checks.
    pub pct_unsafe_deletion_pruned: f64,
}

impl PruningStats {
    /// Rebuilds the statistics from the retained set and the rejection log.
    pub fn from_outcomes(verified: &[VerifiedInstance], rejections: &[Rejection]) -> Self {
        let count = |r| rejections.iter().filter(|x| x.reason == r).count();
        let n_handshake = count(RejectReason::Handshake);
        let n_no_sr = count(RejectReason::NoSr);
        let n_unsafe_deletion = count(RejectReason::UnsafeDeletion);
        let n_total = verified.len() + rejections.len();
        let pct = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                100.0 * num as f64 / den as f64
            }
        };
        let stat = |f: &dyn Fn(&VerifiedInstance) -> usize| {
            MeanStd::of(verified.iter().map(|v| f(v) as f64))
        };
        PruningStats {
            n_total,
            n_retained: verified.len(),
            n_handshake,
            n_no_sr,
            n_unsafe_deletion,
            avg_len: stat(&|v| v.len()),
            avg_s: stat(&|v| v.partition.sr.len() + v.partition.sdk.len()),
            avg_sr: stat(&|v| v.partition.sr.len()),
            avg_sdk: stat(&|v| v.partition.sdk.len()),
            avg_n: stat(&|v| v.partition.n.len()),
            pct_handshake_pruned: pct(n_handshake, n_total),
            pct_no_sr_pruned: pct(n_no_sr, n_total - n_handshake),
            pct_unsafe_deletion_pruned: pct(n_unsafe_deletion, n_total - n_handshake - n_no_sr),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusVerification {
    pub verified: Vec<VerifiedInstance>,
    pub rejections: Vec<Rejection>,
    pub stats: PruningStats,
}

/// Verifies every instance (in parallel); output order follows the corpus.
pub fn verify_corpus(
    model: &TargetModel,
    corpus: &[Instance],
    cfg: &HarnessConfig,
) -> Result<CorpusVerification> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let outcomes: Vec<Verification> = corpus
        .par_iter()
        .map(|x| verify_instance(model, x, cfg))
        .collect();
    let mut verified = Vec::new();
    let mut rejections = Vec::new();
    for o in outcomes {
        match o {
            Verification::Accepted(v) => verified.push(v),
            Verification::Rejected(r) => rejections.push(r),
        }
    }
    let stats = PruningStats::from_outcomes(&verified, &rejections);
    Ok(CorpusVerification {
        verified,
        rejections,
        stats,
    })
}
