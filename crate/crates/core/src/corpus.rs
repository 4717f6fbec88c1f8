//! Corpus ingestion and templated synthetic corpora.
//!
//! Line format: one instance per line, whitespace-separated tokens,
//! optionally prefixed by `id<TAB>`. Text is lowercased. Files ending in
//! `.jsonl` are read as `{id, tokens, gold_rating?}` records instead, with
//! tokens taken verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_jsonl;
use crate::model::{Instance, Token};

pub fn parse_line_corpus(text: &str) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, body) = match line.split_once('\t') {
            Some((id, body)) if !id.trim().is_empty() => (id.trim().to_string(), body),
            _ => (format!("line-{}", i + 1), line),
        };
        out.push(Instance::from_text(id, body)?);
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<Vec<Instance>> {
    if path.extension().is_some_and(|e| e == "jsonl") {
        return read_jsonl(path);
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_line_corpus(&text)
}

/// Line-format rendering; round-trips through [`parse_line_corpus`].
pub fn to_line_corpus(corpus: &[Instance]) -> String {
    corpus
        .iter()
        .map(|x| format!("{}\t{}\n", x.id, x.text()))
        .collect()
}

/// Templates are whitespace-separated words; a word written `{NAME}` is a
/// slot filled with a uniformly drawn candidate from `slots[NAME]`.
/// Candidates may span several words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusGenSpec {
    pub n_instances: usize,
    pub templates: Vec<String>,
    pub slots: BTreeMap<String, Vec<String>>,
    /// Per-token ratings; the gold rating is their mean over the filled
    /// instance, plus noise, clamped to [0, 1].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ratings: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating_noise: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_prefix")]
    pub id_prefix: String,
}

fn default_prefix() -> String {
    "gen".into()
}

type Compiled<'a> = (Vec<Vec<Part>>, BTreeMap<&'a str, Vec<Vec<Token>>>);

enum Part {
    Word(Token),
    Slot(String),
}

fn slot_name(word: &str) -> Option<&str> {
    word.strip_prefix('{')?.strip_suffix('}')
}

fn split_words(text: &str) -> Result<Vec<Token>> {
    text.split_whitespace()
        .map(|w| Token::new(w.to_lowercase()))
        .collect()
}

impl CorpusGenSpec {
    fn compile(&self) -> Result<Compiled<'_>> {
        let bad = |m: String| Err(Error::InvalidCorpusSpec(m));
        if self.n_instances == 0 {
            return bad("n_instances must be at least 1".into());
        }
        if self.templates.is_empty() {
            return bad("no templates".into());
        }
        if let Some(s) = self.rating_noise {
            if !(s.is_finite() && s >= 0.0) {
                return bad(format!("rating_noise must be non-negative, got {s}"));
            }
        }
        let mut slots = BTreeMap::new();
        for (name, candidates) in &self.slots {
            let parsed = candidates
                .iter()
                .map(|c| split_words(c))
                .collect::<Result<Vec<_>>>()?;
            if parsed.is_empty() || parsed.iter().any(Vec::is_empty) {
                return bad(format!("slot {{{name}}} needs non-empty candidates"));
            }
            slots.insert(name.as_str(), parsed);
        }
        let mut templates = Vec::new();
        for t in &self.templates {
            let mut parts = Vec::new();
            for w in t.split_whitespace() {
                match slot_name(w) {
                    Some(name) if slots.contains_key(name) => parts.push(Part::Slot(name.into())),
                    Some(name) => return bad(format!("template {t:?} uses unknown slot {{{name}}}")),
                    None => parts.push(Part::Word(Token::new(w.to_lowercase())?)),
                }
            }
            if parts.is_empty() {
                return bad("empty template".into());
            }
            templates.push(parts);
        }
        Ok((templates, slots))
    }

    /// Smallest and largest token count any template can produce.
    pub fn length_bounds(&self) -> Result<(usize, usize)> {
        let (templates, slots) = self.compile()?;
        let bounds = |parts: &[Part], pick: fn(&[Vec<Token>]) -> usize| -> usize {
            parts
                .iter()
                .map(|p| match p {
                    Part::Word(_) => 1,
                    Part::Slot(s) => pick(&slots[s.as_str()]),
                })
                .sum()
        };
        let lo = templates
            .iter()
            .map(|t| bounds(t, |c| c.iter().map(Vec::len).min().unwrap()))
            .min()
            .unwrap();
        let hi = templates
            .iter()
            .map(|t| bounds(t, |c| c.iter().map(Vec::len).max().unwrap()))
            .max()
            .unwrap();
        Ok((lo, hi))
    }

    /// Names of every slot referenced by some template.
    pub fn used_slots(&self) -> BTreeSet<String> {
        self.templates
            .iter()
            .flat_map(|t| t.split_whitespace().filter_map(slot_name).map(str::to_string).collect::<Vec<_>>())
            .collect()
    }
}

/// Deterministic given the spec's seed (or `fallback_seed` when unset).
pub fn gen_corpus(spec: &CorpusGenSpec, fallback_seed: u64) -> Result<Vec<Instance>> {
    let (templates, slots) = spec.compile()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(fallback_seed));
    let noise = spec
        .rating_noise
        .filter(|&s| s > 0.0)
        .map(|s| Normal::new(0.0, s).expect("validated noise"));
    let width = spec.n_instances.to_string().len();
    let mut out = Vec::with_capacity(spec.n_instances);
    for i in 0..spec.n_instances {
        let template = &templates[rng.random_range(0..templates.len())];
        let mut tokens = Vec::new();
        for part in template {
            match part {
                Part::Word(t) => tokens.push(t.clone()),
                Part::Slot(s) => {
                    let choice = slots[s.as_str()].choose(&mut rng).expect("non-empty slot");
                    tokens.extend(choice.iter().cloned());
                }
            }
        }
        let rated: Vec<f64> = tokens
            .iter()
            .filter_map(|t| spec.ratings.get(t.as_str()).copied())
            .collect();
        let gold_rating = (!rated.is_empty()).then(|| {
            let mean = rated.iter().sum::<f64>() / rated.len() as f64;
            let jitter = noise.as_ref().map_or(0.0, |n| n.sample(&mut rng));
            (mean + jitter).clamp(0.0, 1.0)
        });
        let mut inst = Instance::new(format!("{}-{:0width$}", spec.id_prefix, i + 1), tokens)?;
        inst.gold_rating = gold_rating;
        out.push(inst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, templates: &[&str], slots: &[(&str, &[&str])]) -> CorpusGenSpec {
        CorpusGenSpec {
            n_instances: n,
            templates: templates.iter().map(|s| s.to_string()).collect(),
            slots: slots
                .iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
                .collect(),
            ratings: BTreeMap::new(),
            rating_noise: None,
            seed: Some(1),
            id_prefix: "gen".into(),
        }
    }

    #[test]
    fn single_choice_slots_repeat() {
        let s = spec(3, &["the beer was {ADJ}"], &[("ADJ", &["good"])]);
        let c = gen_corpus(&s, 0).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|x| x.tokens == c[0].tokens));
        let ids: BTreeSet<&str> = c.iter().map(|x| x.id.as_str()).collect();
        assert_eq!(ids.len(), 3);
        assert_eq!(c[0].id, "gen-1");
    }

    #[test]
    fn uniform_slot_frequencies() {
        let s = spec(1000, &["the beer was {ADJ}"], &[("ADJ", &["good", "bad"])]);
        let c = gen_corpus(&s, 0).unwrap();
        let good = c.iter().filter(|x| x.tokens[3].as_str() == "good").count();
        assert!((450..=550).contains(&good), "{good} goods");
        assert!(good < 1000);
    }

    #[test]
    fn deterministic_and_bounded() {
        let s = spec(
            50,
            &["{A} ale , {B}", "simply {B}"],
            &[("A", &["a hazy", "clear"]), ("B", &["very good indeed", "flat"])],
        );
        let a = gen_corpus(&s, 0).unwrap();
        assert_eq!(to_line_corpus(&a), to_line_corpus(&gen_corpus(&s, 0).unwrap()));
        let (lo, hi) = s.length_bounds().unwrap();
        assert_eq!((lo, hi), (2, 7));
        assert!(a.iter().all(|x| (lo..=hi).contains(&x.len())));
    }

    #[test]
    fn ratings_with_noise_stay_in_range() {
        let mut s = spec(200, &["{ADJ} beer"], &[("ADJ", &["good", "bad", "plain"])]);
        s.ratings = BTreeMap::from([("good".into(), 0.9), ("bad".into(), 0.1)]);
        s.rating_noise = Some(0.3);
        let c = gen_corpus(&s, 0).unwrap();
        for x in &c {
            match x.tokens[0].as_str() {
                "plain" => assert!(x.gold_rating.is_none()),
                _ => assert!((0.0..=1.0).contains(&x.gold_rating.unwrap())),
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(gen_corpus(&spec(1, &["a {MISSING}"], &[]), 0).is_err());
        assert!(gen_corpus(&spec(1, &["a {S}"], &[("S", &[])]), 0).is_err());
        assert!(gen_corpus(&spec(0, &["a"], &[]), 0).is_err());
        assert!(gen_corpus(&spec(1, &[], &[]), 0).is_err());
    }

    #[test]
    fn line_corpus_parsing() {
        let c = parse_line_corpus("r1\tThe Beer was GOOD\n\nplain text here\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].id, "r1");
        assert_eq!(c[0].text(), "the beer was good");
        assert_eq!(c[1].id, "line-3");
        assert_eq!(parse_line_corpus(&to_line_corpus(&c)).unwrap(), c);
    }
}
