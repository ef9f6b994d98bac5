use proptest::prelude::*;

use super::*;
use crate::data::{LabelSet, Schema};
use crate::learners::{fit, Distance, Preset};

fn knn(k: usize) -> LearnerSpec {
    LearnerSpec::Knn {
        k,
        distance: Distance::Euclidean,
    }
}

fn nb() -> LearnerSpec {
    LearnerSpec::NaiveBayes { variance_floor: 1e-6 }
}

/// One numeric feature per row; labels given as index lists.
fn dataset(m: usize, rows: &[(f64, &[usize])]) -> MLDataset {
    let rows = rows
        .iter()
        .map(|(x, y)| {
            (
                FeatureVector::numeric(&[*x]),
                LabelSet::from_indices(m, y.iter().copied()).unwrap(),
            )
        })
        .collect();
    MLDataset::new(Schema::numeric(1, m), rows).unwrap()
}

fn x(v: f64) -> FeatureVector {
    FeatureVector::numeric(&[v])
}

fn marginals(d: &MLDataset) -> Vec<f64> {
    let mut f = vec![0.0; d.n_labels()];
    for y in d.labelsets() {
        for j in y.iter() {
            f[j] += 1.0;
        }
    }
    f.iter().map(|c| c / d.len() as f64).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn sample() -> MLDataset {
    dataset(
        3,
        &[
            (0.0, &[0]),
            (0.5, &[0, 1]),
            (1.0, &[0]),
            (4.0, &[1, 2]),
            (4.5, &[2]),
            (5.0, &[1, 2]),
            (9.0, &[]),
        ],
    )
}

#[test]
fn br_single_label_matches_binary_classifier() {
    let d = dataset(1, &[(0.0, &[0]), (1.0, &[]), (2.0, &[0]), (3.0, &[]), (3.5, &[])]);
    let classes: Vec<usize> = d.labelsets().map(|y| usize::from(y.contains(0))).collect();
    for spec in [nb(), knn(3)] {
        let model = br_fit(&d, &spec).unwrap();
        let direct = fit(&spec, &d.schema().attributes, &feature_refs(&d), &classes).unwrap();
        for q in [-1.0, 0.7, 2.2, 10.0] {
            let s = model.predict_scores(&x(q)).unwrap();
            assert_eq!(s, vec![direct.predict_dist(&x(q)).unwrap().probs()[1]]);
        }
    }
}

#[test]
fn br_naive_bayes_matches_hand_posterior() {
    // Label 0 positives at 0, 1, 2 and negatives at 6, 8; label 1 is the reverse.
    let d = dataset(2, &[(0.0, &[0]), (1.0, &[0]), (2.0, &[0]), (6.0, &[1]), (8.0, &[1])]);
    let model = br_fit(&d, &nb()).unwrap();
    let gauss = |v: f64, mean: f64, var: f64| {
        (-(v - mean).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
    };
    // Positive class of label 0: mean 1, population variance 2/3, prior 3/5.
    // Negative class: mean 7, variance 1, prior 2/5.
    for q in [1.5, 4.0, 5.0] {
        let pos = 0.6 * gauss(q, 1.0, 2.0 / 3.0);
        let neg = 0.4 * gauss(q, 7.0, 1.0);
        let p0 = pos / (pos + neg);
        let s = model.predict_scores(&x(q)).unwrap();
        assert!((s[0] - p0).abs() < 1e-12, "{q}: {} vs {p0}", s[0]);
        assert!((s[1] - (1.0 - p0)).abs() < 1e-12);
    }
}

#[test]
fn br_scores_follow_label_permutation() {
    let d = sample();
    let perm = [2usize, 0, 1];
    let names = perm.iter().map(|&j| d.schema().label_names[j].clone()).collect();
    let sets = d.labelsets().map(|y| y.project(&perm)).collect();
    let permuted = d.with_labels(names, sets).unwrap();
    let a = br_fit(&d, &knn(3)).unwrap();
    let b = br_fit(&permuted, &knn(3)).unwrap();
    for q in [0.2, 3.0, 4.7, 8.0] {
        let sa = a.predict_scores(&x(q)).unwrap();
        let sb = b.predict_scores(&x(q)).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            assert_eq!(sb[i], sa[j]);
        }
    }
}

#[test]
fn br_labels_are_trained_independently() {
    // Changing label 2 leaves the scores of labels 0 and 1 untouched.
    let d = sample();
    let flipped: Vec<LabelSet> = d
        .labelsets()
        .map(|y| {
            let mut y = y.clone();
            if y.contains(2) {
                y.remove(2);
            } else {
                y.insert(2).unwrap();
            }
            y
        })
        .collect();
    let e = d.with_labels(d.schema().label_names.clone(), flipped).unwrap();
    let a = br_fit(&d, &nb()).unwrap();
    let b = br_fit(&e, &nb()).unwrap();
    for q in [0.2, 3.0, 8.0] {
        let (sa, sb) = (a.predict_scores(&x(q)).unwrap(), b.predict_scores(&x(q)).unwrap());
        assert_eq!(sa[..2], sb[..2]);
    }
}

#[test]
fn br_constant_label() {
    let d = dataset(2, &[(0.0, &[0]), (1.0, &[0]), (2.0, &[0])]);
    let s = br_fit(&d, &nb()).unwrap().predict_scores(&x(5.0)).unwrap();
    assert_eq!(s, vec![1.0, 0.0]);
}

#[test]
fn knn_over_all_rows_gives_marginals() {
    let d = sample();
    let want = marginals(&d);
    for spec in [TransformSpec::Br, TransformSpec::Lp] {
        let model = spec.fit(&d, &knn(d.len())).unwrap();
        for q in [-3.0, 4.2, 20.0] {
            assert!(close(&model.predict_scores(&x(q)).unwrap(), &want, 1e-12), "{spec}");
        }
    }
}

#[test]
fn lp_classes_are_distinct_labelsets_in_bit_order() {
    let d = sample();
    let model = lp_fit(&d, &nb()).unwrap();
    let got: Vec<Vec<usize>> = model.labelsets().iter().map(|y| y.iter().collect()).collect();
    // Bit patterns: {} = 0, {0} = 1, {0,1} = 3, {2} = 4, {1,2} = 6.
    assert_eq!(got, vec![vec![], vec![0], vec![0, 1], vec![2], vec![1, 2]]);
}

#[test]
fn lp_single_labels_reduce_to_multiclass() {
    let d = dataset(
        3,
        &[
            (0.0, &[0]),
            (1.0, &[0]),
            (5.0, &[1]),
            (6.0, &[1]),
            (10.0, &[2]),
            (11.0, &[2]),
        ],
    );
    let model = lp_fit(&d, &nb()).unwrap();
    let direct = fit(&nb(), &d.schema().attributes, &feature_refs(&d), &[0, 0, 1, 1, 2, 2]).unwrap();
    for q in [0.5, 5.5, 7.9, 12.0] {
        let s = model.predict_scores(&x(q)).unwrap();
        assert!(close(&s, direct.predict_dist(&x(q)).unwrap().probs(), 1e-15));
    }
}

#[test]
fn lp_scores_sum_over_containing_labelsets() {
    // Three nearest of 4.4 are rows at 4.0, 4.5, 5.0 with labelsets
    // {1,2}, {2}, {1,2}: P({1,2}) = 2/3, P({2}) = 1/3.
    let model = lp_fit(&sample(), &knn(3)).unwrap();
    let s = model.predict_scores(&x(4.4)).unwrap();
    assert!(close(&s, &[0.0, 2.0 / 3.0, 1.0], 1e-15), "{s:?}");
    let best: Vec<usize> = model.predict_labelset(&x(4.4)).unwrap().iter().collect();
    assert_eq!(best, vec![1, 2]);
}

#[test]
fn lp_prediction_is_a_training_labelset() {
    let d = sample();
    let model = lp_fit(&d, &nb()).unwrap();
    for i in 0..50 {
        let y = model.predict_labelset(&x(i as f64 * 0.25 - 2.0)).unwrap();
        assert!(d.labelsets().any(|t| *t == y));
    }
}

#[test]
fn rakel_single_full_member_is_lp() {
    let d = sample();
    for spec in [nb(), knn(2), Preset::J48.spec(0)] {
        let lp = lp_fit(&d, &spec).unwrap();
        let rk = rakel_fit(&d, &spec, &RakelSpec::new(1, 3, 9)).unwrap();
        for q in [0.3, 2.5, 4.8, 7.0] {
            assert_eq!(lp.predict_scores(&x(q)).unwrap(), rk.predict_scores(&x(q)).unwrap());
        }
    }
}

#[test]
fn rakel_averages_over_covering_members() {
    // m = 3, k = 2 over M = 3 draws every pair once, so each label is covered
    // twice. With 1-NN each member reproduces the nearest row's projection,
    // so both covering members agree and the average is that row's labelset.
    let d = sample();
    let model = rakel_fit(&d, &knn(1), &RakelSpec::new(3, 2, 5)).unwrap();
    let mut pairs: Vec<Vec<usize>> = model.members().iter().map(|(l, _)| l.clone()).collect();
    pairs.sort();
    assert_eq!(pairs, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    assert!(model.uncovered_labels().is_empty());
    assert_eq!(model.predict_scores(&x(0.6)).unwrap(), vec![1.0, 1.0, 0.0]);

    // With 3-NN around 4.4 the members see {1,2}, {2}, {1,2}. Member {0,1}
    // gives label 1 a score of 2/3, member {1,2} also 2/3; label 2 gets 1 from both.
    let model = rakel_fit(&d, &knn(3), &RakelSpec::new(3, 2, 5)).unwrap();
    assert!(close(
        &model.predict_scores(&x(4.4)).unwrap(),
        &[0.0, 2.0 / 3.0, 1.0],
        1e-15
    ));
}

#[test]
fn rakel_uncovered_labels_score_half() {
    let d = dataset(4, &[(0.0, &[0, 1, 2, 3]), (1.0, &[0, 1, 2, 3])]);
    let model = rakel_fit(&d, &nb(), &RakelSpec::new(2, 1, 3)).unwrap();
    let uncovered = model.uncovered_labels();
    assert_eq!(uncovered.len(), 2);
    let s = model.predict_scores(&x(0.5)).unwrap();
    for (j, &v) in s.iter().enumerate() {
        assert_eq!(v, if uncovered.contains(&j) { UNCOVERED_SCORE } else { 1.0 });
    }
}

#[test]
fn rakel_rejects_bad_k() {
    let d = sample();
    assert!(matches!(
        rakel_fit(&d, &nb(), &RakelSpec::new(2, 4, 0)),
        Err(Error::Transform(_))
    ));
    assert!(matches!(
        rakel_fit(&d, &nb(), &RakelSpec::new(2, 0, 0)),
        Err(Error::Transform(_))
    ));
    assert!(rakel_fit(&d, &nb(), &RakelSpec::new(0, 2, 0)).is_err());
}

#[test]
fn rakel_defaults() {
    assert_eq!(RakelSpec::default().resolve(6), (12, 3));
    assert_eq!(RakelSpec::default().resolve(2), (4, 2));
}

#[test]
fn pruning_trace() {
    // A x3, B x3, AB x1 with p = 2, b = 2: the AB row is replaced in place by
    // an A copy and a B copy.
    let d = dataset(
        2,
        &[
            (0.0, &[0]),
            (1.0, &[0]),
            (2.0, &[0, 1]),
            (3.0, &[0]),
            (4.0, &[1]),
            (5.0, &[1]),
            (6.0, &[1]),
        ],
    );
    let (out, summary) = prune_and_reintroduce(&d, &PruneSpec::default()).unwrap();
    assert_eq!(
        summary,
        PruningSummary {
            pruned_rows: 1,
            reintroduced_rows: 2,
            dropped_rows: 0
        }
    );
    let got: Vec<(f64, Vec<usize>)> = out
        .rows()
        .iter()
        .map(|(f, y)| {
            let crate::data::AttributeValue::Numeric(v) = f.values[0] else {
                unreachable!()
            };
            (v, y.iter().collect())
        })
        .collect();
    assert_eq!(
        got,
        vec![
            (0.0, vec![0]),
            (1.0, vec![0]),
            (2.0, vec![0]),
            (2.0, vec![1]),
            (3.0, vec![0]),
            (4.0, vec![1]),
            (5.0, vec![1]),
            (6.0, vec![1]),
        ]
    );

    let (out, summary) = prune_and_reintroduce(&d, &PruneSpec { p: 2, b: 1 }).unwrap();
    assert_eq!(out.len(), 7);
    assert_eq!(summary.reintroduced_rows, 1);
    assert_eq!(out.rows()[2].1.iter().collect::<Vec<_>>(), vec![0]);

    let (out, summary) = prune_and_reintroduce(&d, &PruneSpec { p: 2, b: 0 }).unwrap();
    assert_eq!((out.len(), summary.dropped_rows), (6, 1));
}

#[test]
fn reintroduction_prefers_larger_subsets() {
    // {0,1,2} is rare; {0,1} and {2} are frequent. Largest first: {0,1}, then {2}.
    let d = dataset(
        3,
        &[
            (0.0, &[0, 1]),
            (1.0, &[0, 1]),
            (2.0, &[2]),
            (3.0, &[2]),
            (4.0, &[0, 1, 2]),
        ],
    );
    let (out, _) = prune_and_reintroduce(&d, &PruneSpec { p: 2, b: 1 }).unwrap();
    assert_eq!(out.rows()[4].1.iter().collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn no_pruning_is_lp() {
    let d = sample();
    for p in [0, 1] {
        let ps = ps_fit(&d, &nb(), &PruneSpec { p, b: 2 }).unwrap();
        let lp = lp_fit(&d, &nb()).unwrap();
        assert_eq!(ps.summary().pruned_rows, 0);
        for q in [0.1, 4.4, 9.5] {
            assert_eq!(ps.predict_scores(&x(q)).unwrap(), lp.predict_scores(&x(q)).unwrap());
        }
    }
}

#[test]
fn over_pruning_is_an_error() {
    let d = sample();
    assert_eq!(
        ps_fit(&d, &nb(), &PruneSpec { p: d.len() + 1, b: 2 }).unwrap_err(),
        Error::OverPruned { p: d.len() + 1 }
    );
}

#[test]
fn constant_transform_checks_length() {
    let d = sample();
    let ok = TransformSpec::Constant {
        scores: vec![0.1, 0.2, 0.3],
    }
    .fit(&d, &nb())
    .unwrap();
    assert_eq!(ok.predict_scores(&x(0.0)).unwrap(), vec![0.1, 0.2, 0.3]);
    assert!(TransformSpec::Constant { scores: vec![0.1] }.fit(&d, &nb()).is_err());
    assert!(ConstantModel::new(vec![1.2]).is_err());
}

#[test]
fn transform_spec_json() {
    let spec: TransformSpec = serde_json::from_str(r#"{"kind":"rakel","k":2}"#).unwrap();
    assert_eq!(
        spec,
        TransformSpec::Rakel(RakelSpec {
            m: None,
            k: Some(2),
            seed: 0
        })
    );
    let spec: TransformSpec = serde_json::from_str(r#"{"kind":"ps"}"#).unwrap();
    assert_eq!(spec, TransformSpec::Ps(PruneSpec::default()));
}

fn small_dataset() -> impl Strategy<Value = MLDataset> {
    (1usize..5, 2usize..12).prop_flat_map(|(m, n)| {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, prop::collection::vec(any::<bool>(), m)), n).prop_map(
            move |rows| {
                let rows = rows
                    .into_iter()
                    .map(|(a, b, y)| (FeatureVector::numeric(&[a, b]), LabelSet::from_bools(&y)))
                    .collect();
                MLDataset::new(Schema::numeric(2, m), rows).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scores_lie_in_unit_interval(d in small_dataset(), q in prop::collection::vec(-6.0f64..6.0, 2), seed in 0u64..100) {
        let transforms = [
            TransformSpec::Br,
            TransformSpec::Lp,
            TransformSpec::Rakel(RakelSpec { seed, ..Default::default() }),
            TransformSpec::Ps(PruneSpec { p: 1, b: 2 }),
        ];
        for t in &transforms {
            for p in Preset::ALL {
                let model = t.fit(&d, &p.spec(seed)).unwrap();
                let s = model.predict_scores(&FeatureVector::numeric(&q)).unwrap();
                prop_assert_eq!(s.len(), d.n_labels());
                prop_assert!(s.iter().all(|v| (0.0..=1.0).contains(v)), "{} {} {:?}", t, p, s);
            }
        }
    }
}
