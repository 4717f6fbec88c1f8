//! End-to-end driver: verify → explain → evaluate → report.
//!
//! Every stage reads and writes plain files under the output directory, so
//! stages can be rerun independently:
//!
//! ```text
//! <out>/stats.json, stats.csv            pruning statistics, one row per dataset
//! <out>/metrics.json, metrics.csv        one row per (explainer, dataset)
//! <out>/report.md                        both tables in markdown
//! <out>/<dataset>/model.json             model used for the dataset
//! <out>/<dataset>/verified.jsonl         {id, tokens, sr, sdk, n, prediction, bias}
//! <out>/<dataset>/rejections.jsonl       {id, reason}
//! <out>/<dataset>/explanations.jsonl     {instance_id, explainer_name, order, weights?, seed, params}
//! <out>/<dataset>/verdicts.jsonl         {instance_id, explainer, first_in_n, misranked, misrank_count}
//! <out>/<dataset>/heatmaps/<id>.html
//! ```
//!
//! Per-instance work runs in parallel; each artifact is written once, in
//! corpus order, by a single writer.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{gen_corpus, read_corpus, CorpusGenSpec};
use crate::error::{Error, Result};
use crate::explain::{self, ExplainerConfig, ExplainerKind, Game, Ranking};
use crate::harness::{
    verify_corpus, HarnessConfig, MeanStd, PruningStats, Rejection, SelectionPartition,
    VerifiedInstance,
};
use crate::heatmap::render_heatmap;
use crate::io::{read_json, read_jsonl, write_json, write_jsonl, write_text};
use crate::metrics::{aggregate, judge_instance, round2, InstanceVerdict, MetricsReport};
use crate::model::{Instance, TargetModel, Token};
use crate::seed::derive_seed;

fn default_top_k() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    /// Render heatmaps for at most this many instances per dataset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_heatmaps: Option<usize>,
    #[serde(default)]
    pub harness: HarnessConfig,
    pub datasets: Vec<DatasetConfig>,
    #[serde(default)]
    pub explainers: Vec<ExplainerSpec>,
}

/// Exactly one of `corpus`, `generate`, `instances` must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub name: String,
    pub model: ModelSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<CorpusGenSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<Vec<Instance>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSource {
    Path(PathBuf),
    Inline(TargetModel),
}

/// `params.seed` is ignored: seeds are split from the run seed per
/// (explainer, instance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainerSpec {
    pub name: String,
    pub kind: ExplainerKind,
    #[serde(default)]
    pub params: ExplainerConfig,
}

impl RunConfig {
    /// Reads a config; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: RunConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(out) = cfg.out.as_mut() {
            rebase(out);
        }
        for d in &mut cfg.datasets {
            if let ModelSource::Path(p) = &mut d.model {
                rebase(p);
            }
            if let Some(c) = d.corpus.as_mut() {
                rebase(c);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidRunConfig(m));
        self.harness.validate()?;
        if self.datasets.is_empty() {
            return bad("no datasets".into());
        }
        let mut names = HashSet::new();
        for d in &self.datasets {
            if d.name.is_empty()
                || !d.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
                || d.name.starts_with('.')
            {
                return bad(format!("dataset name {:?} must be a plain file name", d.name));
            }
            if !names.insert(d.name.as_str()) {
                return bad(format!("duplicate dataset name {:?}", d.name));
            }
            let sources = [d.corpus.is_some(), d.generate.is_some(), d.instances.is_some()];
            if sources.iter().filter(|&&s| s).count() != 1 {
                return bad(format!(
                    "dataset {:?} needs exactly one of corpus, generate, instances",
                    d.name
                ));
            }
            if let ModelSource::Path(p) = &d.model {
                if !p.exists() {
                    return bad(format!("model file {} does not exist", p.display()));
                }
            }
            if let Some(p) = &d.corpus {
                if !p.exists() {
                    return bad(format!("corpus file {} does not exist", p.display()));
                }
            }
        }
        let mut names = HashSet::new();
        for e in &self.explainers {
            if e.name.is_empty() {
                return bad("explainer with empty name".into());
            }
            if !names.insert(e.name.as_str()) {
                return bad(format!("duplicate explainer name {:?}", e.name));
            }
            e.params.validate()?;
        }
        Ok(())
    }
}

impl DatasetConfig {
    pub fn load_model(&self) -> Result<TargetModel> {
        match &self.model {
            ModelSource::Path(p) => read_json(p),
            ModelSource::Inline(m) => Ok(m.clone()),
        }
    }

    pub fn load_corpus(&self, run_seed: u64) -> Result<Vec<Instance>> {
        if let Some(p) = &self.corpus {
            read_corpus(p)
        } else if let Some(g) = &self.generate {
            gen_corpus(g, derive_seed(run_seed, "corpus", &self.name))
        } else {
            Ok(self.instances.clone().unwrap_or_default())
        }
    }
}

/// Verified-dataset line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifiedRecord {
    pub id: String,
    pub tokens: Vec<Token>,
    pub sr: Vec<usize>,
    pub sdk: Vec<usize>,
    pub n: Vec<usize>,
    pub prediction: f64,
    pub bias: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_rating: Option<f64>,
}

impl From<&VerifiedInstance> for VerifiedRecord {
    fn from(v: &VerifiedInstance) -> Self {
        VerifiedRecord {
            id: v.instance.id.clone(),
            tokens: v.instance.tokens.clone(),
            sr: v.partition.sr.clone(),
            sdk: v.partition.sdk.clone(),
            n: v.partition.n.clone(),
            prediction: v.prediction,
            bias: v.bias_prediction,
            gold_rating: v.instance.gold_rating,
        }
    }
}

impl TryFrom<VerifiedRecord> for VerifiedInstance {
    type Error = Error;

    fn try_from(r: VerifiedRecord) -> Result<Self> {
        let mut instance = Instance::new(r.id, r.tokens)?;
        instance.gold_rating = r.gold_rating;
        let partition = SelectionPartition {
            sr: r.sr,
            sdk: r.sdk,
            n: r.n,
        };
        if partition.classes(instance.len()).is_none() {
            return Err(Error::InvalidRunConfig(format!(
                "verified record {:?} has a partition that does not tile its positions",
                instance.id
            )));
        }
        Ok(VerifiedInstance {
            instance,
            partition,
            prediction: r.prediction,
            bias_prediction: r.bias,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplanationRecord {
    pub instance_id: String,
    pub explainer_name: String,
    pub kind: ExplainerKind,
    pub order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// `None` for explainers that draw no random numbers.
    pub seed: Option<u64>,
    pub params: ExplainerConfig,
    #[serde(default)]
    pub padded: bool,
}

impl ExplanationRecord {
    pub fn ranking(&self) -> Result<Ranking> {
        Ranking::new(self.order.clone()).map(|r| r.with_padded(self.padded))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub instance_id: String,
    pub explainer: String,
    pub first_in_n: bool,
    pub misranked: bool,
    pub misrank_count: usize,
}

impl VerdictRecord {
    pub fn verdict(&self) -> InstanceVerdict {
        InstanceVerdict {
            first_in_n: self.first_in_n,
            misranked: self.misranked,
            misrank_count: self.misrank_count,
        }
    }
}

/// One report row; percentages and averages rounded to two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsRow {
    pub explainer: String,
    pub dataset: String,
    pub pct_first: f64,
    pub pct_misrnk: f64,
    pub avg_misrnk_mean: f64,
    pub avg_misrnk_std: f64,
    pub avg_misrnk_sample_std: f64,
    pub n_instances: usize,
    /// Some ranking in this row had its tail filled in by position order.
    pub padded: bool,
}

impl MetricsRow {
    pub fn new(explainer: &str, dataset: &str, m: &MetricsReport, padded: bool) -> Self {
        MetricsRow {
            explainer: explainer.to_string(),
            dataset: dataset.to_string(),
            pct_first: round2(m.pct_first),
            pct_misrnk: round2(m.pct_misrnk),
            avg_misrnk_mean: round2(m.avg_misrnk_mean),
            avg_misrnk_std: round2(m.avg_misrnk_std),
            avg_misrnk_sample_std: round2(m.avg_misrnk_sample_std),
            n_instances: m.n_instances,
            padded,
        }
    }
}

pub const METRICS_COLUMNS: [&str; 9] = [
    "explainer",
    "dataset",
    "pct_first",
    "pct_misrnk",
    "avg_misrnk_mean",
    "avg_misrnk_std",
    "avg_misrnk_sample_std",
    "n_instances",
    "padded",
];

pub const STATS_COLUMNS: [&str; 18] = [
    "dataset",
    "n_retained",
    "avg_len_mean",
    "avg_len_std",
    "avg_s_mean",
    "avg_s_std",
    "avg_sr_mean",
    "avg_sr_std",
    "avg_sdk_mean",
    "avg_sdk_std",
    "avg_n_mean",
    "avg_n_std",
    "pct_handshake_pruned",
    "pct_no_sr_pruned",
    "pct_unsafe_deletion_pruned",
    "n_total",
    "n_handshake",
    "n_no_sr",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub dataset: String,
    pub stats: PruningStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub datasets: Vec<DatasetStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub rows: Vec<MetricsRow>,
}

/// Knobs that are not part of the experiment itself.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub timestamp: bool,
}

impl RunOptions {
    fn now(&self) -> Option<String> {
        self.timestamp
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
    }
}

fn dataset_dir(out: &Path, name: &str) -> PathBuf {
    out.join(name)
}

fn fmt_opt(m: Option<MeanStd>) -> [String; 2] {
    match m {
        Some(m) => [format!("{:.2}", m.mean), format!("{:.2}", m.std)],
        None => [String::new(), String::new()],
    }
}

fn stats_csv(rows: &[DatasetStats]) -> String {
    let mut s = STATS_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let st = &r.stats;
        let mut fields = vec![r.dataset.clone(), st.n_retained.to_string()];
        for m in [st.avg_len, st.avg_s, st.avg_sr, st.avg_sdk, st.avg_n] {
            fields.extend(fmt_opt(m));
        }
        fields.extend([
            format!("{:.2}", st.pct_handshake_pruned),
            format!("{:.2}", st.pct_no_sr_pruned),
            format!("{:.2}", st.pct_unsafe_deletion_pruned),
            st.n_total.to_string(),
            st.n_handshake.to_string(),
            st.n_no_sr.to_string(),
        ]);
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut s = METRICS_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.2},{:.2},{:.2},{:.2},{:.2},{},{}",
            r.explainer,
            r.dataset,
            r.pct_first,
            r.pct_misrnk,
            r.avg_misrnk_mean,
            r.avg_misrnk_std,
            r.avg_misrnk_sample_std,
            r.n_instances,
            r.padded
        );
    }
    s
}

/// Verifies every dataset and writes the verified sets, rejection logs and
/// pruning statistics.
pub fn verify_stage(cfg: &RunConfig, out: &Path, opts: &RunOptions) -> Result<Vec<DatasetStats>> {
    cfg.validate()?;
    let mut all = Vec::new();
    for d in &cfg.datasets {
        let model = d.load_model()?;
        let corpus = d.load_corpus(cfg.seed)?;
        let result = verify_corpus(&model, &corpus, &cfg.harness)?;
        let dir = dataset_dir(out, &d.name);
        write_json(&dir.join("model.json"), &model)?;
        let records: Vec<VerifiedRecord> = result.verified.iter().map(VerifiedRecord::from).collect();
        write_jsonl(&dir.join("verified.jsonl"), &records)?;
        write_jsonl(&dir.join("rejections.jsonl"), &result.rejections)?;
        all.push(DatasetStats {
            dataset: d.name.clone(),
            stats: result.stats,
        });
    }
    write_json(
        &out.join("stats.json"),
        &StatsDocument {
            generated_at: opts.now(),
            datasets: all.clone(),
        },
    )?;
    write_text(&out.join("stats.csv"), &stats_csv(&all))?;
    Ok(all)
}

pub fn read_verified(out: &Path, dataset: &str) -> Result<Vec<VerifiedInstance>> {
    read_jsonl::<VerifiedRecord>(&dataset_dir(out, dataset).join("verified.jsonl"))?
        .into_iter()
        .map(VerifiedInstance::try_from)
        .collect()
}

pub fn read_rejections(out: &Path, dataset: &str) -> Result<Vec<Rejection>> {
    read_jsonl(&dataset_dir(out, dataset).join("rejections.jsonl"))
}

/// Explains one verified instance with every configured explainer, sharing
/// one coalition cache.
pub fn explain_instance(
    model: &TargetModel,
    v: &VerifiedInstance,
    explainers: &[ExplainerSpec],
    run_seed: u64,
) -> Result<Vec<ExplanationRecord>> {
    let game = Game::new(model, &v.instance);
    explainers
        .iter()
        .map(|e| {
            let mut params = e.params.clone();
            params.seed = derive_seed(run_seed, &format!("explainer/{}", e.name), v.id());
            let out = explain::explain(e.kind, &game, Some(&v.partition), &params)?;
            Ok(ExplanationRecord {
                instance_id: v.id().to_string(),
                explainer_name: e.name.clone(),
                kind: e.kind,
                order: out.ranking.order().to_vec(),
                weights: out.weights.map(|w| w.into_inner()),
                seed: e.kind.uses_seed().then_some(params.seed),
                params,
                padded: out.ranking.padded(),
            })
        })
        .collect()
}

pub fn explain_stage(cfg: &RunConfig, out: &Path) -> Result<()> {
    cfg.validate()?;
    for d in &cfg.datasets {
        let dir = dataset_dir(out, &d.name);
        let model: TargetModel = read_json(&dir.join("model.json"))?;
        let verified = read_verified(out, &d.name)?;
        let per_instance: Vec<Vec<ExplanationRecord>> = verified
            .par_iter()
            .map(|v| explain_instance(&model, v, &cfg.explainers, cfg.seed))
            .collect::<Result<_>>()?;
        let records: Vec<ExplanationRecord> = per_instance.into_iter().flatten().collect();
        write_jsonl(&dir.join("explanations.jsonl"), &records)?;
    }
    Ok(())
}

pub fn read_explanations(out: &Path, dataset: &str) -> Result<Vec<ExplanationRecord>> {
    read_jsonl(&dataset_dir(out, dataset).join("explanations.jsonl"))
}

type RankingIndex = HashMap<(String, String), Ranking>;

fn index_rankings(records: &[ExplanationRecord]) -> Result<RankingIndex> {
    records
        .iter()
        .map(|r| Ok(((r.instance_id.clone(), r.explainer_name.clone()), r.ranking()?)))
        .collect()
}

fn lookup<'a>(index: &'a RankingIndex, id: &str, explainer: &str) -> Result<&'a Ranking> {
    index
        .get(&(id.to_string(), explainer.to_string()))
        .ok_or_else(|| {
            Error::InvalidRunConfig(format!(
                "no explanation by {explainer:?} for instance {id:?}; rerun the explain stage"
            ))
        })
}

/// Metrics rows recomputed from a verdict log alone.
pub fn metrics_from_verdicts(
    dataset: &str,
    explainers: &[ExplainerSpec],
    verdicts: &[VerdictRecord],
    padded: &HashSet<String>,
) -> Result<Vec<MetricsRow>> {
    let mut rows = Vec::new();
    for e in explainers {
        let v: Vec<InstanceVerdict> = verdicts
            .iter()
            .filter(|r| r.explainer == e.name)
            .map(VerdictRecord::verdict)
            .collect();
        if v.is_empty() {
            continue;
        }
        rows.push(MetricsRow::new(&e.name, dataset, &aggregate(&v)?, padded.contains(&e.name)));
    }
    Ok(rows)
}

/// Judges every explanation and writes the verdict logs and the metrics
/// report. Datasets with no verified instance contribute no rows.
pub fn evaluate_stage(cfg: &RunConfig, out: &Path, opts: &RunOptions) -> Result<Vec<MetricsRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for d in &cfg.datasets {
        let dir = dataset_dir(out, &d.name);
        let verified = read_verified(out, &d.name)?;
        let index = index_rankings(&read_explanations(out, &d.name)?)?;
        let mut verdicts = Vec::new();
        let mut padded = HashSet::new();
        for v in &verified {
            for e in &cfg.explainers {
                let ranking = lookup(&index, v.id(), &e.name)?;
                if ranking.padded() {
                    padded.insert(e.name.clone());
                }
                let j = judge_instance(v, ranking)?;
                verdicts.push(VerdictRecord {
                    instance_id: v.id().to_string(),
                    explainer: e.name.clone(),
                    first_in_n: j.first_in_n,
                    misranked: j.misranked,
                    misrank_count: j.misrank_count,
                });
            }
        }
        write_jsonl(&dir.join("verdicts.jsonl"), &verdicts)?;
        rows.extend(metrics_from_verdicts(&d.name, &cfg.explainers, &verdicts, &padded)?);
    }
    write_json(
        &out.join("metrics.json"),
        &MetricsDocument {
            generated_at: opts.now(),
            rows: rows.clone(),
        },
    )?;
    write_text(&out.join("metrics.csv"), &metrics_csv(&rows))?;
    Ok(rows)
}

fn markdown_report(stats: &[DatasetStats], rows: &[MetricsRow]) -> String {
    let mut s = String::from("# Explainer verification report\n\n## Datasets\n\n");
    s.push_str("| dataset | retained | len | S | SR | SDK | N | % handshake | % no SR | % unsafe deletion |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    let cell = |m: Option<MeanStd>| {
        m.map_or("-".to_string(), |m| format!("{:.2} ({:.2})", m.mean, m.std))
    };
    for d in stats {
        let st = &d.stats;
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {:.2} | {:.2} | {:.2} |",
            d.dataset,
            st.n_retained,
            cell(st.avg_len),
            cell(st.avg_s),
            cell(st.avg_sr),
            cell(st.avg_sdk),
            cell(st.avg_n),
            st.pct_handshake_pruned,
            st.pct_no_sr_pruned,
            st.pct_unsafe_deletion_pruned
        );
    }
    s.push_str("\n## Error rates\n\n");
    s.push_str("| explainer | dataset | %_first | %_misrnk | avg_misrnk | instances |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {:.2} | {:.2} | {:.2} ({:.2}) | {} |",
            r.explainer, r.dataset, r.pct_first, r.pct_misrnk, r.avg_misrnk_mean, r.avg_misrnk_std, r.n_instances
        );
    }
    s
}

fn file_stem_for(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

/// Renders heatmaps and the markdown summary from existing artifacts.
pub fn report_stage(cfg: &RunConfig, out: &Path, top_k: usize, opts: &RunOptions) -> Result<()> {
    cfg.validate()?;
    let stats: StatsDocument = read_json(&out.join("stats.json"))?;
    let metrics: MetricsDocument = read_json(&out.join("metrics.json"))?;
    let stamp = opts.now();
    for d in cfg.datasets.iter().filter(|_| !cfg.explainers.is_empty()) {
        let dir = dataset_dir(out, &d.name).join("heatmaps");
        let verified = read_verified(out, &d.name)?;
        let index = index_rankings(&read_explanations(out, &d.name)?)?;
        let limit = cfg.max_heatmaps.unwrap_or(usize::MAX);
        for v in verified.iter().take(limit) {
            let rankings = cfg
                .explainers
                .iter()
                .map(|e| Ok((e.name.clone(), lookup(&index, v.id(), &e.name)?.clone())))
                .collect::<Result<BTreeMap<_, _>>>()?;
            let doc = render_heatmap(v, &rankings, top_k)?;
            write_text(
                &dir.join(format!("{}.html", file_stem_for(v.id()))),
                &doc.to_html(stamp.as_deref()),
            )?;
        }
    }
    write_text(&out.join("report.md"), &markdown_report(&stats.datasets, &metrics.rows))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub stats: Vec<DatasetStats>,
    pub metrics: Vec<MetricsRow>,
}

/// All four stages in order.
pub fn run_pipeline(cfg: &RunConfig, out: &Path, opts: &RunOptions) -> Result<RunSummary> {
    let stats = verify_stage(cfg, out, opts)?;
    explain_stage(cfg, out)?;
    let metrics = evaluate_stage(cfg, out, opts)?;
    report_stage(cfg, out, cfg.top_k, opts)?;
    Ok(RunSummary { stats, metrics })
}

/// Demo configuration: the review model on its two sentences, the
/// handshake model and its repaired variant on "the movie was very good",
/// judged by every built-in explainer.
pub fn demo_config(seed: u64) -> RunConfig {
    use crate::fixtures;
    let dataset = |name: &str, model: TargetModel, instances: Vec<Instance>| DatasetConfig {
        name: name.into(),
        model: ModelSource::Inline(model),
        corpus: None,
        generate: None,
        instances: Some(instances),
    };
    let explainer = |name: &str, kind| ExplainerSpec {
        name: name.into(),
        kind,
        params: ExplainerConfig::default(),
    };
    RunConfig {
        seed,
        out: None,
        top_k: default_top_k(),
        max_heatmaps: None,
        harness: HarnessConfig::default(),
        datasets: vec![
            dataset("worked", fixtures::review_model(), vec![fixtures::x1(), fixtures::x2()]),
            dataset("handshake", fixtures::handshake_model(), vec![fixtures::handshake_sentence()]),
            dataset(
                "handshake-free",
                fixtures::handshake_free_model(),
                vec![fixtures::handshake_sentence()],
            ),
        ],
        explainers: vec![
            explainer("shap", ExplainerKind::ExactShapley),
            explainer("shap-sampled", ExplainerKind::SampledShapley),
            explainer("lime", ExplainerKind::Lime),
            explainer("occlusion", ExplainerKind::Occlusion),
            explainer("sufficient-subset", ExplainerKind::GreedySubset),
            explainer("random", ExplainerKind::Random),
            explainer("oracle", ExplainerKind::Oracle),
        ],
    }
}
