//! The two hypothetical sentiment models and sentences used throughout the
//! docs and golden tests.
//!
//! review model:
//!
//! ```text
//! if "very good" in input: return 0.9
//! if "nice" in input:      return 0.7
//! if "good" in input:      return 0.6
//! return 0
//! ```
//!
//! Each rule selects its whole pattern. The handshake model selects only
//! "very" when it sees "very good", so the encoder learns to read "very" as
//! "very good".

use crate::model::{tokens, Instance, Rule, RuleModel, TargetModel};

pub fn review_model() -> TargetModel {
    let rules = vec![
        Rule::full(&["very", "good"], 0.9).unwrap(),
        Rule::full(&["nice"], 0.7).unwrap(),
        Rule::full(&["good"], 0.6).unwrap(),
    ];
    TargetModel::Rule(RuleModel::new(rules, 0.0).unwrap())
}

/// Handshake model: "very good" selects only "very" and returns 1.
pub fn handshake_model() -> TargetModel {
    handshake_family(vec![0])
}

/// Same rules, but the first one selects both "very" and "good".
pub fn handshake_free_model() -> TargetModel {
    handshake_family(vec![0, 1])
}

fn handshake_family(offsets: Vec<usize>) -> TargetModel {
    let rules = vec![
        Rule::new(tokens(&["very", "good"]).unwrap(), offsets, 1.0).unwrap(),
        Rule::new(tokens(&["not", "good"]).unwrap(), vec![0], 0.1).unwrap(),
        Rule::new(tokens(&["good"]).unwrap(), vec![0], 0.8).unwrap(),
    ];
    TargetModel::Rule(RuleModel::new(rules, 0.5).unwrap())
}

pub fn x1() -> Instance {
    Instance::from_text("x1", "The movie was good , it was actually nice").unwrap()
}

pub fn x2() -> Instance {
    Instance::from_text("x2", "The movie was nice , in fact , it was very good").unwrap()
}

pub fn handshake_sentence() -> Instance {
    Instance::from_text("handshake", "The movie was very good").unwrap()
}

/// Position of the first occurrence of `token` in `x`.
pub fn position_of(x: &Instance, token: &str) -> usize {
    x.tokens
        .iter()
        .position(|t| t.as_str() == token)
        .unwrap_or_else(|| panic!("{token:?} not in {:?}", x.id))
}
