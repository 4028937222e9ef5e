mod common;

use hitr::eval::metrics::{npmi_from_counts, purity_nmi, CooccurrenceIndex};
use hitr::eval::{cluster_purity_nmi, gini, roc_auc, sparsity, Label, LabeledScore};
use hitr::{build_corpus, PreprocessConfig, RawDocument, SparseDistribution};
use proptest::prelude::*;

fn labeled(scores: &[(u8, bool)]) -> Vec<LabeledScore> {
    scores
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| LabeledScore {
            id: format!("d{i}"),
            // Few distinct values so ties are common.
            score: s as f64 / 8.0,
            label: if d { Label::Diverse } else { Label::NonDiverse },
        })
        .collect()
}

fn both_classes() -> impl Strategy<Value = Vec<(u8, bool)>> {
    prop::collection::vec((0u8..16, any::<bool>()), 2..200)
        .prop_filter("both labels", |v| v.iter().any(|x| x.1) && v.iter().any(|x| !x.1))
}

proptest! {
    #[test]
    fn auc_equals_the_pairwise_rank_statistic(v in both_classes()) {
        let scores = labeled(&v);
        let roc = roc_auc(&scores).unwrap();
        let pos: Vec<f64> = scores.iter().filter(|s| s.label == Label::Diverse).map(|s| s.score).collect();
        let neg: Vec<f64> = scores.iter().filter(|s| s.label == Label::NonDiverse).map(|s| s.score).collect();
        let (num, den) = common::brute_force_auc(&pos, &neg);
        prop_assert_eq!(roc.auc, num as f64 / den as f64);
    }

    #[test]
    fn roc_runs_monotonically_from_origin_to_corner(v in both_classes()) {
        let roc = roc_auc(&labeled(&v)).unwrap();
        prop_assert_eq!(roc.points[0], (0.0, 0.0));
        prop_assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
        for w in roc.points.windows(2) {
            prop_assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
        }
        prop_assert_eq!(roc.points.len(), roc.thresholds.len());
        prop_assert!(roc.thresholds[0].is_infinite());
    }

    #[test]
    fn purity_and_nmi_ignore_cluster_names(
        pairs in prop::collection::vec((0usize..5, 0usize..4), 1..60),
        perm in Just([3usize, 0, 4, 1, 2]),
    ) {
        let clusters: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let classes: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let renamed: Vec<usize> = clusters.iter().map(|&c| perm[c]).collect();
        let (p1, n1) = purity_nmi(&clusters, &classes);
        let (p2, n2) = purity_nmi(&renamed, &classes);
        prop_assert_eq!(p1, p2);
        prop_assert!((n1 - n2).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&p1));
        prop_assert!((0.0..=1.0).contains(&n1));
    }

    #[test]
    fn npmi_is_bounded_and_symmetric(
        n in 1usize..500,
        a in 0usize..500,
        b in 0usize..500,
        co in 0usize..500,
    ) {
        let (a, b) = (a.min(n), b.min(n));
        let co = co.min(a).min(b);
        let x = npmi_from_counts(co, a, b, n);
        prop_assert_eq!(x, npmi_from_counts(co, b, a, n));
        prop_assert!((-1.0..=1.0).contains(&x));
    }

    #[test]
    fn gini_matches_mean_absolute_difference(v in prop::collection::vec(0.0f64..100.0, 1..40)) {
        prop_assert!((gini(&v) - common::reference_gini(&v)).abs() < 1e-9);
    }
}

#[test]
fn cooccurrence_counts_documents_not_tokens() {
    let docs = vec![
        RawDocument::new("1", "alpha alpha beta", None),
        RawDocument::new("2", "alpha gamma", None),
        RawDocument::new("3", "beta gamma", None),
    ];
    let corpus = build_corpus(&docs, &PreprocessConfig::passthrough()).unwrap();
    let id = |t: &str| corpus.vocab().index_of(t).unwrap();
    let index = CooccurrenceIndex::new(&corpus, [id("alpha"), id("beta"), id("gamma")]);
    assert_eq!(index.doc_frequency(id("alpha")), 2);
    assert_eq!(index.co_frequency(id("alpha"), id("beta")), 1);
    assert_eq!(index.co_frequency(id("beta"), id("alpha")), 1);
    let expected = {
        let p_ab: f64 = 2.0 / 4.0;
        let (p_a, p_b) = (2.0 / 3.0, 2.0 / 3.0);
        ((p_ab / (p_a * p_b)).ln() / -p_ab.ln()).clamp(-1.0, 1.0)
    };
    assert_eq!(index.npmi(id("alpha"), id("beta")), expected);
}

#[test]
fn npmi_boundaries() {
    assert_eq!(npmi_from_counts(10, 10, 10, 10), 0.0);
    assert_eq!(npmi_from_counts(0, 0, 3, 10), 0.0);
    // A rare pair that always co-occurs approaches 1 as the corpus grows.
    let big = npmi_from_counts(1000, 1000, 1000, 1_000_000);
    assert!(big > 0.95 && big <= 1.0);
}

#[test]
fn sparsity_counts_topics_at_or_above_tau() {
    let rows = vec![
        SparseDistribution::new(3, vec![(0, 0.5), (1, 0.5)]).unwrap(),
        SparseDistribution::new(3, vec![(0, 0.98), (1, 0.01), (2, 0.01)]).unwrap(),
    ];
    assert_eq!(sparsity(&rows, 0.01), 2.5);
    assert_eq!(sparsity(&[SparseDistribution::uniform(100)], 0.01), 100.0);
}

#[test]
fn purity_examples() {
    let one = |t: usize| SparseDistribution::point(3, t);
    let labels: Vec<String> = ["a", "a", "b", "b"].iter().map(|s| s.to_string()).collect();
    assert_eq!(cluster_purity_nmi(&[one(0), one(0), one(1), one(1)], &labels).unwrap(), (1.0, 1.0));
    let (p, _) = cluster_purity_nmi(&[one(2), one(2), one(2), one(2)], &labels).unwrap();
    assert_eq!(p, 0.5);
}
