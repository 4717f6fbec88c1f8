#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use explainer_check::corpus::CorpusGenSpec;
use explainer_check::explain::{ExplainerConfig, ExplainerKind};
use explainer_check::model::{LexiconModel, Rule, RuleModel};
use explainer_check::pipeline::{DatasetConfig, ExplainerSpec, ModelSource, RunConfig};
use explainer_check::{HarnessConfig, TargetModel, Token};

fn toks(words: &[&str]) -> Vec<Token> {
    words.iter().map(|w| Token::new(*w).unwrap()).collect()
}

/// Rules with full and partial selections, so some instances hit the
/// handshake and deletion checks.
pub fn review_rule_model() -> TargetModel {
    let rules = vec![
        Rule::full(&["not", "good"], 0.2).unwrap(),
        Rule::full(&["very", "good"], 0.95).unwrap(),
        Rule::new(toks(&["not", "bad"]), vec![0, 1], 0.6).unwrap(),
        Rule::new(toks(&["very", "bad"]), vec![1], 0.1).unwrap(),
        Rule::full(&["great"], 0.9).unwrap(),
        Rule::full(&["good"], 0.8).unwrap(),
        Rule::full(&["bad"], 0.15).unwrap(),
        Rule::new(toks(&["awful", "head"]), vec![0], 0.0).unwrap(),
        Rule::full(&["awful"], 0.05).unwrap(),
    ];
    TargetModel::Rule(RuleModel::new(rules, 0.5).unwrap())
}

pub fn review_lexicon_model() -> TargetModel {
    let weights = [
        ("good", 0.25),
        ("great", 0.4),
        ("bad", -0.25),
        ("awful", -0.4),
        ("okay", 0.05),
        ("fine", 0.08),
        ("not", -0.1),
        ("very", 0.12),
        ("thin", -0.02),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    TargetModel::Lexicon(LexiconModel::new(weights, 0.5, 0.03, true).unwrap())
}

/// Review-like sentences of 4 to 22 tokens.
pub fn review_corpus_spec(n: usize, prefix: &str) -> CorpusGenSpec {
    let slot = |words: &[&str]| words.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    CorpusGenSpec {
        n_instances: n,
        templates: vec![
            "{FILL} the {NOUN} was {ADJ} {FILL}".into(),
            "{ADJ} {NOUN} , {FILL} {FILL} {ADJ}".into(),
            "i found this {NOUN} {ADJ} {FILL} {FILL} {FILL}".into(),
            "{NOUN} {ADJ}".into(),
        ],
        slots: BTreeMap::from([
            (
                "ADJ".into(),
                slot(&[
                    "good", "bad", "very good", "not good", "not bad", "very bad", "great",
                    "awful", "okay", "fine", "thin",
                ]),
            ),
            ("NOUN".into(), slot(&["beer", "head", "lager", "stout"])),
            (
                "FILL".into(),
                slot(&[
                    "honestly",
                    "and the head was thin",
                    "poured into a glass",
                    "with an awful head",
                    "lacing",
                    "smell of malt and hops",
                ]),
            ),
        ]),
        ratings: BTreeMap::from([("good".into(), 0.8), ("bad".into(), 0.2)]),
        rating_noise: Some(0.05),
        seed: None,
        id_prefix: prefix.into(),
    }
}

pub fn explainer(name: &str, kind: ExplainerKind) -> ExplainerSpec {
    ExplainerSpec {
        name: name.into(),
        kind,
        params: ExplainerConfig::default(),
    }
}

/// Every built-in explainer, with sample counts cut down for speed.
pub fn all_explainers() -> Vec<ExplainerSpec> {
    let mut v = vec![
        explainer("shap", ExplainerKind::ExactShapley),
        explainer("shap-sampled", ExplainerKind::SampledShapley),
        explainer("lime", ExplainerKind::Lime),
        explainer("occlusion", ExplainerKind::Occlusion),
        explainer("subset", ExplainerKind::GreedySubset),
        explainer("random", ExplainerKind::Random),
        explainer("oracle", ExplainerKind::Oracle),
    ];
    v[1].params.n_samples = 200;
    v[2].params.n_samples = 300;
    v
}

/// One rule-model and one lexicon-model dataset, `n` generated instances each.
pub fn synthetic_config(n: usize, seed: u64, explainers: Vec<ExplainerSpec>) -> RunConfig {
    let dataset = |name: &str, model: TargetModel| DatasetConfig {
        name: name.into(),
        model: ModelSource::Inline(model),
        corpus: None,
        generate: Some(review_corpus_spec(n, name)),
        instances: None,
    };
    RunConfig {
        seed,
        out: None,
        top_k: 10,
        max_heatmaps: Some(5),
        harness: HarnessConfig::default(),
        datasets: vec![
            dataset("rules", review_rule_model()),
            dataset("lexicon", review_lexicon_model()),
        ],
        explainers,
    }
}

/// Every file under `root`, relative path to bytes.
pub fn snapshot(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
