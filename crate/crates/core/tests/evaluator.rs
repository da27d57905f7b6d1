mod common;

use common::{random_classifier, synth, CHILD_FEVER};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rxlearn::evaluator::token_vocabulary;
use rxlearn::{
    build_inverted_index, confusion_counts, match_classifier, metrics_from_counts, ConfusionCounts, Evaluator,
};

type Q = Ratio<i64>;

fn counts(true_matches: u64, false_matches: u64, positives_total: u64) -> ConfusionCounts {
    ConfusionCounts { true_matches, false_matches, positives_total }
}

/// Exact precision, recall and F-beta.
fn exact(c: ConfusionCounts, beta: Q) -> (Q, Q, Q) {
    let zero = Q::from_integer(0);
    let tm = c.true_matches as i64;
    let matched = tm + c.false_matches as i64;
    let p = if matched == 0 { zero } else { Q::new(tm, matched) };
    let r = Q::new(tm, c.positives_total as i64);
    let b2 = beta * beta;
    let denom = b2 * p + r;
    let f = if denom == zero { zero } else { (Q::from_integer(1) + b2) * p * r / denom };
    (p, r, f)
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

#[test]
fn metrics_agree_with_exact_arithmetic_on_fifty_cases() {
    let table = [
        (0, 0, 1),
        (0, 5, 10),
        (10, 0, 10),
        (3, 1, 4),
        (80, 20, 200),
        (1, 99, 1),
        (7, 3, 50),
        (123, 456, 789),
        (2, 0, 1000),
        (999, 1, 1000),
    ];
    let betas = [Q::from_integer(0), Q::new(1, 5), Q::new(1, 2), Q::from_integer(1), Q::from_integer(2)];
    let mut cases = 0;
    for &(tm, fm, total) in &table {
        for &beta in &betas {
            let c = counts(tm, fm, total);
            let m = metrics_from_counts(c, to_f64(beta)).unwrap();
            let (p, r, f) = exact(c, beta);
            assert!((m.precision - to_f64(p)).abs() < 1e-9, "{c:?} {beta}");
            assert!((m.recall - to_f64(r)).abs() < 1e-9, "{c:?} {beta}");
            assert!((m.f_beta - to_f64(f)).abs() < 1e-9, "{c:?} {beta}: {} vs {f}", m.f_beta);
            cases += 1;
        }
    }
    assert_eq!(cases, 50);
}

#[test]
fn hand_computed_rows() {
    let m = metrics_from_counts::<f64>(counts(3, 1, 4), 1.0).unwrap();
    assert!((m.f_beta - 0.75).abs() < 1e-12);
    let m = metrics_from_counts::<f64>(counts(80, 20, 200), 0.2).unwrap();
    assert!((m.precision - 0.8).abs() < 1e-12);
    assert!((m.recall - 0.4).abs() < 1e-12);
    assert!((m.f_beta - 1.04 * 0.32 / (0.04 * 0.8 + 0.4)).abs() < 1e-12);
    assert!((m.f_beta - 0.7703).abs() < 1e-4);
    assert!(metrics_from_counts::<f64>(counts(0, 0, 0), 1.0).is_err());
    assert!(metrics_from_counts::<f64>(counts(1, 0, 1), -1.0).is_err());
    assert!(metrics_from_counts::<f64>(counts(1, 0, 1), f64::NAN).is_err());
}

#[test]
fn evaluator_paths_agree_with_direct_matching() {
    let corpus = synth(CHILD_FEVER, 8);
    let dataset = corpus.binary_split("child_fever").unwrap();
    let index = build_inverted_index(dataset.iter().map(|d| d.as_ref()), token_vocabulary(&dataset));
    let words = ["fever", "cough", "child", "adult", "rash", "w01", "w1", "ild"];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let plain = Evaluator::new(&dataset);
    let indexed = Evaluator::with_index(&dataset, Some(&index));
    let parallel = Evaluator::new(&dataset).parallel(true);
    for _ in 0..100 {
        let classifier = random_classifier(&mut rng, &words, &[0, 2, 10, 100]);
        let tm = dataset.positive().iter().filter(|d| match_classifier(&classifier, &d.text)).count() as u64;
        let fm = dataset.negative().iter().filter(|d| match_classifier(&classifier, &d.text)).count() as u64;
        let expected = counts(tm, fm, dataset.positive().len() as u64);
        assert_eq!(plain.counts(&classifier), expected);
        assert_eq!(indexed.counts(&classifier), expected);
        assert_eq!(parallel.counts(&classifier), expected);
        assert_eq!(confusion_counts(&classifier, &dataset, Some(&index)), expected);
        assert_eq!(confusion_counts(&classifier, &dataset, None), expected);
    }
}

proptest! {
    #[test]
    fn f1_is_the_harmonic_mean(total in 1u64..500, tm_frac in 0.0f64..=1.0, fm in 0u64..500) {
        let tm = (tm_frac * total as f64) as u64;
        let m = metrics_from_counts::<f64>(counts(tm, fm, total), 1.0).unwrap();
        let h = if m.precision + m.recall == 0.0 { 0.0 } else { 2.0 * m.precision * m.recall / (m.precision + m.recall) };
        prop_assert!((m.f_beta - h).abs() < 1e-12);
    }

    #[test]
    fn more_true_matches_help_and_more_false_matches_hurt(total in 2u64..300, tm_frac in 0.0f64..1.0, fm in 0u64..300, beta in 0.05f64..5.0) {
        let tm = ((tm_frac * total as f64) as u64).min(total - 1);
        let base = metrics_from_counts::<f64>(counts(tm, fm, total), beta).unwrap().f_beta;
        let more_tm = metrics_from_counts::<f64>(counts(tm + 1, fm, total), beta).unwrap().f_beta;
        let more_fm = metrics_from_counts::<f64>(counts(tm, fm + 1, total), beta).unwrap().f_beta;
        prop_assert!(more_tm > base);
        prop_assert!(more_fm <= base);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn small_beta_approaches_precision(total in 1u64..300, tm in 1u64..300, fm in 0u64..300) {
        let tm = tm.min(total);
        let m = metrics_from_counts::<f64>(counts(tm, fm, total), 1e-6).unwrap();
        prop_assert!((m.f_beta - m.precision).abs() < 1e-9);
        let zero = metrics_from_counts::<f64>(counts(tm, fm, total), 0.0).unwrap();
        prop_assert!((zero.f_beta - zero.precision).abs() < 1e-12);
    }
}
