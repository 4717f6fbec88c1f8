//! Select-then-predict target models.
//!
//! A target model is a generator that hard-selects a subset of token
//! positions followed by an encoder that scores only the selected tokens:
//! `predict(x) = encode(restrict(x, generate(x)))`. Two deterministic
//! families are provided: ordered pattern rules (which can carry
//! handshakes) and a thresholded lexicon (handshake-free by construction).
//!
//! Masking is deletion: removed tokens disappear and the sequence closes
//! up, so removing a token between two others can make them adjacent.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// A single lowercase, whitespace-free token.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(text));
        }
        Ok(Token(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Token {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Token::new(value)
    }
}

impl From<Token> for String {
    fn from(t: Token) -> Self {
        t.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A tokenized text. Features are positions, so repeated strings are
/// distinct features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    pub id: String,
    pub tokens: Vec<Token>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_rating: Option<f64>,
}

#[derive(Deserialize)]
struct RawInstance {
    id: String,
    tokens: Vec<Token>,
    #[serde(default)]
    gold_rating: Option<f64>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let mut inst = Instance::new(raw.id, raw.tokens)?;
        inst.gold_rating = raw.gold_rating;
        Ok(inst)
    }
}

impl Instance {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Result<Self> {
        let id = id.into();
        if tokens.is_empty() {
            return Err(Error::EmptyInstance(id));
        }
        Ok(Instance {
            id,
            tokens,
            gold_rating: None,
        })
    }

    /// Lowercases and splits on whitespace.
    pub fn from_text(id: impl Into<String>, text: &str) -> Result<Self> {
        let tokens = text
            .split_whitespace()
            .map(|t| Token::new(t.to_lowercase()))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(id, tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_strs(&self) -> Vec<&str> {
        self.tokens.iter().map(Token::as_str).collect()
    }

    /// Tokens at the selected positions, original order preserved.
    pub fn restrict(&self, selection: &Selection) -> Vec<&str> {
        selection
            .iter()
            .map(|p| self.tokens[p].as_str())
            .collect()
    }

    /// Tokens at the kept positions, original order preserved.
    pub fn keep(&self, keep: &Coalition) -> Vec<&str> {
        keep.iter().map(|p| self.tokens[p].as_str()).collect()
    }

    pub fn text(&self) -> String {
        self.token_strs().join(" ")
    }
}

/// Sorted, duplicate-free positions chosen by a generator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selection(Vec<usize>);

impl Selection {
    pub fn empty() -> Self {
        Selection(Vec::new())
    }

    /// Validates every position against `len`.
    pub fn new(positions: impl IntoIterator<Item = usize>, len: usize) -> Result<Self> {
        let mut v: Vec<usize> = positions.into_iter().collect();
        if let Some(&position) = v.iter().find(|&&p| p >= len) {
            return Err(Error::PositionOutOfRange { position, len });
        }
        v.sort_unstable();
        v.dedup();
        Ok(Selection(v))
    }

    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Selection(v)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.0.binary_search(&position).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Leftmost start at which `needle` occurs contiguously in `hay`.
pub(crate) fn find_contiguous<H, N>(hay: &[H], needle: &[N]) -> Option<usize>
where
    H: AsRef<str>,
    N: AsRef<str>,
{
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&start| {
        needle
            .iter()
            .zip(&hay[start..])
            .all(|(n, h)| n.as_ref() == h.as_ref())
    })
}

/// One `if <pattern> in input: select <offsets> & return <score>` clause.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pattern: Vec<Token>,
    select_offsets: Vec<usize>,
    score: f64,
    // Pattern tokens at select_offsets, the only thing the encoder sees.
    key: Vec<Token>,
}

impl Rule {
    pub fn new(pattern: Vec<Token>, select_offsets: Vec<usize>, score: f64) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidModel("rule pattern is empty".into()));
        }
        let mut offsets = select_offsets;
        offsets.sort_unstable();
        offsets.dedup();
        if offsets.is_empty() {
            return Err(Error::InvalidModel("rule selects no pattern token".into()));
        }
        if let Some(&o) = offsets.iter().find(|&&o| o >= pattern.len()) {
            return Err(Error::InvalidModel(format!(
                "select offset {o} outside pattern of length {}",
                pattern.len()
            )));
        }
        check_score(score, "rule score")?;
        let key = offsets.iter().map(|&o| pattern[o].clone()).collect();
        Ok(Rule {
            pattern,
            select_offsets: offsets,
            score,
            key,
        })
    }

    /// Rule that selects every token of its pattern.
    pub fn full(pattern: &[&str], score: f64) -> Result<Self> {
        let pattern = tokens(pattern)?;
        let offsets = (0..pattern.len()).collect();
        Rule::new(pattern, offsets, score)
    }

    pub fn pattern(&self) -> &[Token] {
        &self.pattern
    }

    pub fn select_offsets(&self) -> &[usize] {
        &self.select_offsets
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn key(&self) -> &[Token] {
        &self.key
    }

    pub fn selects_whole_pattern(&self) -> bool {
        self.select_offsets.len() == self.pattern.len()
    }
}

/// Ordered rules, first match wins.
///
/// The generator finds the first rule whose pattern occurs contiguously and
/// selects its offsets at the leftmost occurrence. The encoder returns the
/// score of the first rule whose selected key occurs contiguously in its
/// input, else the bias. A rule that selects only part of its pattern is
/// how handshakes are expressed.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleModel {
    rules: Vec<Rule>,
    bias: f64,
}

impl RuleModel {
    pub fn new(rules: Vec<Rule>, bias: f64) -> Result<Self> {
        check_score(bias, "bias")?;
        Ok(RuleModel { rules, bias })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Index of the firing rule and the start of its leftmost occurrence.
    pub fn firing_rule<S: AsRef<str>>(&self, seq: &[S]) -> Option<(usize, usize)> {
        self.rules
            .iter()
            .enumerate()
            .find_map(|(i, r)| find_contiguous(seq, &r.pattern).map(|start| (i, start)))
    }

    fn generate_seq<S: AsRef<str>>(&self, seq: &[S]) -> Vec<usize> {
        match self.firing_rule(seq) {
            Some((i, start)) => self.rules[i]
                .select_offsets
                .iter()
                .map(|o| start + o)
                .collect(),
            None => Vec::new(),
        }
    }

    fn encode_seq<S: AsRef<str>>(&self, seq: &[S]) -> f64 {
        self.rules
            .iter()
            .find(|r| find_contiguous(seq, &r.key).is_some())
            .map_or(self.bias, |r| r.score)
    }
}

/// Thresholded additive lexicon.
///
/// Selects every token whose weight magnitude reaches `theta`; the encoder
/// adds the weights of its input to the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconModel {
    weights: BTreeMap<String, f64>,
    bias: f64,
    theta: f64,
    clamp: bool,
}

impl LexiconModel {
    pub fn new(weights: BTreeMap<String, f64>, bias: f64, theta: f64, clamp: bool) -> Result<Self> {
        check_score(bias, "bias")?;
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "theta must be a non-negative finite number, got {theta}"
            )));
        }
        for (tok, w) in &weights {
            Token::new(tok.clone()).map_err(|_| {
                Error::InvalidModel(format!("lexicon entry {tok:?} is not a valid token"))
            })?;
            if !w.is_finite() {
                return Err(Error::InvalidModel(format!("weight of {tok:?} is not finite")));
            }
        }
        Ok(LexiconModel {
            weights,
            bias,
            theta,
            clamp,
        })
    }

    pub fn weight(&self, token: &str) -> Option<f64> {
        self.weights.get(token).copied()
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn clamp(&self) -> bool {
        self.clamp
    }

    fn generate_seq<S: AsRef<str>>(&self, seq: &[S]) -> Vec<usize> {
        seq.iter()
            .enumerate()
            .filter(|(_, t)| {
                self.weight(t.as_ref())
                    .is_some_and(|w| w.abs() >= self.theta)
            })
            .map(|(i, _)| i)
            .collect()
    }

    fn encode_seq<S: AsRef<str>>(&self, seq: &[S]) -> f64 {
        let raw = self.bias
            + seq
                .iter()
                .filter_map(|t| self.weight(t.as_ref()))
                .sum::<f64>();
        if self.clamp {
            raw.clamp(0.0, 1.0)
        } else {
            raw
        }
    }
}

/// A deterministic select-then-predict scorer.
///
/// Immutable once built; every method is a pure function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelSpec", into = "ModelSpec")]
pub enum TargetModel {
    Rule(RuleModel),
    Lexicon(LexiconModel),
}

impl TargetModel {
    /// Generator on a bare token sequence; positions index into `seq`.
    pub fn generate_seq<S: AsRef<str>>(&self, seq: &[S]) -> Vec<usize> {
        match self {
            TargetModel::Rule(m) => m.generate_seq(seq),
            TargetModel::Lexicon(m) => m.generate_seq(seq),
        }
    }

    pub fn generate(&self, x: &Instance) -> Selection {
        Selection::from_sorted(self.generate_seq(&x.tokens))
    }

    /// Encoder on an already-selected token sequence.
    pub fn encode<S: AsRef<str>>(&self, seq: &[S]) -> f64 {
        match self {
            TargetModel::Rule(m) => m.encode_seq(seq),
            TargetModel::Lexicon(m) => m.encode_seq(seq),
        }
    }

    /// `encode(restrict(seq, generate(seq)))`.
    pub fn predict_seq<S: AsRef<str>>(&self, seq: &[S]) -> f64 {
        let selected: Vec<&str> = self
            .generate_seq(seq)
            .into_iter()
            .map(|p| seq[p].as_ref())
            .collect();
        self.encode(&selected)
    }

    pub fn predict(&self, x: &Instance) -> f64 {
        self.predict_seq(&x.tokens)
    }

    /// Prediction on `x` with every position outside `keep` deleted.
    pub fn predict_masked(&self, x: &Instance, keep: &Coalition) -> f64 {
        self.predict_seq(&x.keep(keep))
    }

    /// Score on the empty selection.
    pub fn bias(&self) -> f64 {
        match self {
            TargetModel::Rule(m) => m.bias,
            TargetModel::Lexicon(m) => m.bias,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            TargetModel::Rule(_) => Family::Rule,
            TargetModel::Lexicon(_) => Family::Lexicon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rule,
    Lexicon,
}

/// On-disk model description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: Family,
    pub bias: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<RuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<String, f64>,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_clamp")]
    pub clamp: bool,
}

fn default_clamp() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub pattern: Vec<Token>,
    pub select_offsets: Vec<usize>,
    pub score: f64,
}

impl TryFrom<ModelSpec> for TargetModel {
    type Error = Error;

    fn try_from(spec: ModelSpec) -> Result<Self> {
        match spec.family {
            Family::Rule => {
                if !spec.weights.is_empty() {
                    return Err(Error::InvalidModel("rule model cannot carry weights".into()));
                }
                let rules = spec
                    .rules
                    .into_iter()
                    .map(|r| Rule::new(r.pattern, r.select_offsets, r.score))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TargetModel::Rule(RuleModel::new(rules, spec.bias)?))
            }
            Family::Lexicon => {
                if !spec.rules.is_empty() {
                    return Err(Error::InvalidModel("lexicon model cannot carry rules".into()));
                }
                Ok(TargetModel::Lexicon(LexiconModel::new(
                    spec.weights,
                    spec.bias,
                    spec.theta,
                    spec.clamp,
                )?))
            }
        }
    }
}

impl From<TargetModel> for ModelSpec {
    fn from(model: TargetModel) -> Self {
        match model {
            TargetModel::Rule(m) => ModelSpec {
                family: Family::Rule,
                bias: m.bias,
                rules: m
                    .rules
                    .into_iter()
                    .map(|r| RuleSpec {
                        pattern: r.pattern,
                        select_offsets: r.select_offsets,
                        score: r.score,
                    })
                    .collect(),
                weights: BTreeMap::new(),
                theta: 0.0,
                clamp: true,
            },
            TargetModel::Lexicon(m) => ModelSpec {
                family: Family::Lexicon,
                bias: m.bias,
                rules: Vec::new(),
                weights: m.weights,
                theta: m.theta,
                clamp: m.clamp,
            },
        }
    }
}

fn check_score(v: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{what} must lie in [0, 1], got {v}")))
    }
}

pub(crate) fn tokens(words: &[&str]) -> Result<Vec<Token>> {
    words.iter().map(|w| Token::new(*w)).collect()
}
