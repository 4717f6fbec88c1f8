//! Shapley attributions under deletion masking.
//!
//! `w_i = Σ_{S ⊆ x∖{i}} |S|! (n-|S|-1)! / n! · [f(S ∪ {i}) − f(S)]`

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{AttributionVector, ExplainerConfig, Game};
use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// Enumerates all `2^n` coalitions once and accumulates every feature's
/// weighted marginal contributions in a single pass.
pub fn exact_shapley(game: &Game<'_>, cfg: &ExplainerConfig) -> Result<AttributionVector> {
    let n = game.len();
    if n > cfg.exact_shapley_max_n {
        return Err(Error::InstanceTooLong {
            id: game.instance().id.clone(),
            len: n,
            cap: cfg.exact_shapley_max_n,
        });
    }
    let (model, x) = (game.model(), game.instance());
    let values: Vec<f64> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| model.predict_masked(x, &Coalition::from_bits(n, bits)))
        .collect();

    // |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1, |S|))
    let mut coef = Vec::with_capacity(n);
    let mut binom = 1.0f64;
    for k in 0..n {
        coef.push(1.0 / (n as f64 * binom));
        binom = binom * (n - 1 - k) as f64 / (k + 1) as f64;
    }

    let mut w = vec![0.0; n];
    for (bits, &v) in values.iter().enumerate() {
        let Some(&c) = coef.get(bits.count_ones() as usize) else {
            continue;
        };
        for (i, wi) in w.iter_mut().enumerate() {
            if bits & (1 << i) == 0 {
                *wi += c * (values[bits | 1 << i] - v);
            }
        }
    }
    AttributionVector::new(w)
}

/// Monte-Carlo estimate from `cfg.n_samples` uniformly random permutations:
/// each feature's weight is its average marginal contribution on arrival.
/// The marginals of one permutation telescope, so the weights always sum to
/// `f(x) − f(∅)`.
pub fn sampled_shapley(game: &Game<'_>, cfg: &ExplainerConfig) -> Result<AttributionVector> {
    if cfg.n_samples < 1 {
        return Err(Error::InvalidExplainerConfig("n_samples must be at least 1".into()));
    }
    let n = game.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sums = vec![0.0; n];
    let empty = game.empty_value();
    for _ in 0..cfg.n_samples {
        perm.shuffle(&mut rng);
        let mut keep = Coalition::empty(n);
        let mut prev = empty;
        for &i in &perm {
            keep.insert(i);
            let v = game.value(&keep);
            sums[i] += v - prev;
            prev = v;
        }
    }
    let m = cfg.n_samples as f64;
    AttributionVector::new(sums.into_iter().map(|s| s / m).collect())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use proptest::prelude::*;

    use super::*;
    use crate::fixtures::{self, position_of};
    use crate::model::{Instance, LexiconModel, Rule, RuleModel, TargetModel};

    /// Average of marginal contributions over all n! arrival orders.
    fn permutation_oracle(model: &TargetModel, x: &Instance) -> Vec<f64> {
        fn permute(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for k in 0..rest.len() {
                let p = rest.remove(k);
                prefix.push(p);
                permute(rest, prefix, out);
                prefix.pop();
                rest.insert(k, p);
            }
        }
        let n = x.len();
        let mut orders = Vec::new();
        permute(&mut (0..n).collect(), &mut Vec::new(), &mut orders);
        let mut w = vec![0.0; n];
        for order in &orders {
            let mut keep = Coalition::empty(n);
            let mut prev = model.predict_masked(x, &keep);
            for &i in order {
                keep.insert(i);
                let v = model.predict_masked(x, &keep);
                w[i] += v - prev;
                prev = v;
            }
        }
        w.iter().map(|s| s / orders.len() as f64).collect()
    }

    fn exact(model: &TargetModel, x: &Instance) -> AttributionVector {
        exact_shapley(&Game::new(model, x), &ExplainerConfig::default()).unwrap()
    }

    #[test]
    fn review_x1_golden() {
        let (m, x1) = (fixtures::review_model(), fixtures::x1());
        let w = exact(&m, &x1);
        let (nice, good) = (position_of(&x1, "nice"), position_of(&x1, "good"));
        for i in 0..x1.len() {
            let expected = match i {
                _ if i == nice => 0.4,
                _ if i == good => 0.3,
                _ => 0.0,
            };
            assert!((w[i] - expected).abs() < 1e-9, "{i}: {}", w[i]);
        }
    }

    #[test]
    fn review_x2_golden() {
        let (m, x2) = (fixtures::review_model(), fixtures::x2());
        let w = exact(&m, &x2);
        assert!((w[position_of(&x2, "good")] - 5.0 / 12.0).abs() < 1e-9);
        assert!((w[position_of(&x2, "nice")] - 11.0 / 30.0).abs() < 1e-9);
        assert!((w[position_of(&x2, "very")] - 7.0 / 60.0).abs() < 1e-9);
        assert!((w.sum() - 0.9).abs() < 1e-9);
    }

    #[test]
    fn constant_model_zero() {
        let m = TargetModel::Rule(RuleModel::new(vec![], 0.42).unwrap());
        let x = Instance::from_text("c", "one two three four five").unwrap();
        assert!(exact(&m, &x).weights().iter().all(|&w| w == 0.0));
        for seed in 0..5 {
            let cfg = ExplainerConfig { seed, n_samples: 10, ..Default::default() };
            let w = sampled_shapley(&Game::new(&m, &x), &cfg).unwrap();
            assert!(w.weights().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn additive_lexicon_recovers_weights() {
        let entries = [("crisp", 0.2), ("flat", -0.15), ("malty", 0.05), ("sour", -0.3)];
        let weights: BTreeMap<String, f64> =
            entries.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let m = TargetModel::Lexicon(LexiconModel::new(weights, 0.5, 0.0, false).unwrap());
        let x = Instance::from_text("l", "crisp and flat yet malty not sour").unwrap();
        let w = exact(&m, &x);
        for (i, tok) in x.tokens.iter().enumerate() {
            let expected = m_weight(&entries, tok.as_str());
            assert!((w[i] - expected).abs() < 1e-12, "{tok}: {}", w[i]);
        }
    }

    fn m_weight(entries: &[(&str, f64)], tok: &str) -> f64 {
        entries.iter().find(|(k, _)| *k == tok).map_or(0.0, |(_, v)| *v)
    }

    #[test]
    fn cap_enforced() {
        let m = fixtures::review_model();
        let x2 = fixtures::x2();
        let cfg = ExplainerConfig { exact_shapley_max_n: 8, ..Default::default() };
        assert!(matches!(
            exact_shapley(&Game::new(&m, &x2), &cfg),
            Err(Error::InstanceTooLong { len: 12, cap: 8, .. })
        ));
    }

    #[test]
    fn sampled_converges_on_x2() {
        let (m, x2) = (fixtures::review_model(), fixtures::x2());
        let game = Game::new(&m, &x2);
        let truth = exact(&m, &x2);
        let cfg = ExplainerConfig { seed: 11, n_samples: 50_000, ..Default::default() };
        let est = sampled_shapley(&game, &cfg).unwrap();
        let dev = (0..x2.len()).map(|i| (est[i] - truth[i]).abs()).fold(0.0, f64::max);
        assert!(dev < 0.02, "max deviation {dev}");
        assert_eq!(est, sampled_shapley(&game, &cfg).unwrap());
    }

    #[test]
    fn single_permutation_telescopes() {
        let (m, x2) = (fixtures::review_model(), fixtures::x2());
        for seed in 0..20 {
            let cfg = ExplainerConfig { seed, n_samples: 1, ..Default::default() };
            let w = sampled_shapley(&Game::new(&m, &x2), &cfg).unwrap();
            assert!((w.sum() - 0.9).abs() < 1e-12);
        }
    }

    fn arb_rule_model() -> impl Strategy<Value = TargetModel> {
        let vocab = ["a", "b", "c"];
        let rule = (prop::collection::vec(0..3usize, 1..3), 0.0f64..1.0).prop_map(move |(p, s)| {
            let pat: Vec<&str> = p.iter().map(|&i| vocab[i]).collect();
            Rule::full(&pat, (s * 100.0).round() / 100.0).unwrap()
        });
        (prop::collection::vec(rule, 0..4), 0.0f64..1.0).prop_map(|(rules, bias)| {
            TargetModel::Rule(RuleModel::new(rules, (bias * 10.0).round() / 10.0).unwrap())
        })
    }

    fn arb_instance(max: usize) -> impl Strategy<Value = Instance> {
        prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 1..=max)
            .prop_map(|t| Instance::from_text("p", &t.join(" ")).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_permutation_oracle(m in arb_rule_model(), x in arb_instance(6)) {
            let w = exact(&m, &x);
            let oracle = permutation_oracle(&m, &x);
            for i in 0..x.len() {
                prop_assert!((w[i] - oracle[i]).abs() < 1e-9);
            }
        }

        #[test]
        fn efficiency(m in arb_rule_model(), x in arb_instance(10)) {
            let w = exact(&m, &x);
            prop_assert!((w.sum() - (m.predict(&x) - m.bias())).abs() < 1e-9);
        }

        #[test]
        fn null_players_get_zero(m in arb_rule_model(), x in arb_instance(9)) {
            let n = x.len();
            let w = exact(&m, &x);
            for i in 0..n {
                let null = (0u64..1 << n).filter(|b| b & (1 << i) == 0).all(|b| {
                    let c = Coalition::from_bits(n, b);
                    m.predict_masked(&x, &c) == m.predict_masked(&x, &c.with(i))
                });
                if null {
                    prop_assert_eq!(w[i], 0.0);
                }
            }
        }

        #[test]
        fn symmetric_players_tie(m in arb_rule_model(), x in arb_instance(8)) {
            let n = x.len();
            let w = exact(&m, &x);
            for i in 0..n {
                for j in i + 1..n {
                    let interchangeable = (0u64..1 << n)
                        .filter(|b| b & (1 << i) == 0 && b & (1 << j) == 0)
                        .all(|b| {
                            let c = Coalition::from_bits(n, b);
                            m.predict_masked(&x, &c.with(i)) == m.predict_masked(&x, &c.with(j))
                        });
                    if interchangeable {
                        prop_assert!((w[i] - w[j]).abs() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn sampled_sums_exactly(m in arb_rule_model(), x in arb_instance(12), seed: u64, k in 1usize..20) {
            let cfg = ExplainerConfig { seed, n_samples: k, ..Default::default() };
            let w = sampled_shapley(&Game::new(&m, &x), &cfg).unwrap();
            prop_assert!((w.sum() - (m.predict(&x) - m.bias())).abs() < 1e-12);
        }
    }
}
