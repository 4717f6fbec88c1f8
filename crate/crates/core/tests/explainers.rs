use explainer_check::explain::{
    explain, occlusion_rank, random_rank, to_ranking, AttributionVector, ExplainerConfig, ExplainerKind, Game,
};
use explainer_check::fixtures::{review_model, position_of, x1, x2};
use explainer_check::harness::SelectionPartition;
use explainer_check::metrics::judge_instance;
use explainer_check::model::{LexiconModel, RuleModel};
use explainer_check::{Instance, TargetModel, Token, VerifiedInstance};

#[test]
fn random_baseline_first_rate() {
    // 10 positions, 8 of them non-selected.
    let tokens = (0..10).map(|i| Token::new(format!("w{i}")).unwrap()).collect();
    let v = VerifiedInstance {
        instance: Instance::new("r", tokens).unwrap(),
        partition: SelectionPartition {
            sr: vec![3],
            sdk: vec![7],
            n: vec![0, 1, 2, 4, 5, 6, 8, 9],
        },
        prediction: 1.0,
        bias_prediction: 0.0,
    };
    let hits = (0..10_000u64)
        .filter(|&seed| judge_instance(&v, &random_rank(10, seed)).unwrap().first_in_n)
        .count();
    let pct = hits as f64 / 100.0;
    assert!((pct - 80.0).abs() <= 2.0, "{pct}%");
}

#[test]
fn occlusion_on_x1() {
    let model = review_model();
    let x = x1();
    let w = occlusion_rank(&Game::new(&model, &x)).unwrap();
    let nice = position_of(&x, "nice");
    for (p, &wi) in w.weights().iter().enumerate() {
        let want = if p == nice { 0.1 } else { 0.0 };
        assert!((wi - want).abs() < 1e-12, "{p}: {wi}");
    }
}

#[test]
fn occlusion_on_single_lexicon_token() {
    let model = TargetModel::Lexicon(
        LexiconModel::new([("hoppy".to_string(), 0.3)].into(), 0.2, 0.0, false).unwrap(),
    );
    let x = Instance::from_text("l", "a hoppy one").unwrap();
    let w = occlusion_rank(&Game::new(&model, &x)).unwrap();
    assert!((w[1] - 0.3).abs() < 1e-12);
    assert_eq!((w[0], w[2]), (0.0, 0.0));
}

#[test]
fn subset_on_worked_examples() {
    let model = review_model();
    let cfg = ExplainerConfig::default();
    let x = x1();
    let r = explain(ExplainerKind::GreedySubset, &Game::new(&model, &x), None, &cfg).unwrap();
    assert_eq!(r.ranking.order()[0], position_of(&x, "nice"));

    let x = x2();
    let r = explain(ExplainerKind::GreedySubset, &Game::new(&model, &x), None, &cfg).unwrap();
    let top: Vec<&str> = r.ranking.order()[..2].iter().map(|&p| x.tokens[p].as_str()).collect();
    assert_eq!(top, ["good", "very"]);
}

#[test]
fn constant_model_leaves_position_order() {
    let model = TargetModel::Rule(RuleModel::new(vec![], 0.4).unwrap());
    let x = x2();
    let game = Game::new(&model, &x);
    let cfg = ExplainerConfig::default();
    let subset = explain(ExplainerKind::GreedySubset, &game, None, &cfg).unwrap();
    assert_eq!(subset.ranking.order(), (0..x.len()).collect::<Vec<_>>());
    for kind in [ExplainerKind::ExactShapley, ExplainerKind::Occlusion, ExplainerKind::SampledShapley] {
        let e = explain(kind, &game, None, &cfg).unwrap();
        assert!(e.weights.unwrap().weights().iter().all(|w| w.abs() < 1e-12), "{kind:?}");
        assert_eq!(e.ranking.order(), (0..x.len()).collect::<Vec<_>>());
    }
}

#[test]
fn magnitude_and_signed_rankings() {
    let w = AttributionVector::new(vec![0.1, -0.5, 0.3, 0.3]).unwrap();
    assert_eq!(to_ranking(&w, false).order(), &[1, 2, 3, 0]);
    assert_eq!(to_ranking(&w, true).order(), &[2, 3, 0, 1]);
}

#[test]
fn oracle_needs_a_partition() {
    let model = review_model();
    let x = x1();
    let game = Game::new(&model, &x);
    assert!(explain(ExplainerKind::Oracle, &game, None, &ExplainerConfig::default()).is_err());
}
