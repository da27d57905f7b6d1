use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rxlearn::corpus::Document;
use rxlearn::embeddings::SIMILARITY_FLOOR;
use rxlearn::{build_fallback_embeddings, EmbeddingTable};

fn frequencies(table: &EmbeddingTable<f64>, anchor: &str, candidates: &[String], draws: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0usize; candidates.len()];
    for _ in 0..draws {
        let chosen = table.similarity_weighted_choice(anchor, candidates, &mut rng).unwrap();
        hits[candidates.iter().position(|c| c == chosen).unwrap()] += 1;
    }
    hits.into_iter().map(|h| h as f64 / draws as f64).collect()
}

#[test]
fn draws_follow_normalized_similarities() {
    let s = (1.0f64 - 0.09).sqrt();
    let table = EmbeddingTable::from_vectors(
        3,
        [
            ("anchor", vec![1.0, 0.0, 0.0]),
            ("near", vec![0.9, (1.0f64 - 0.81).sqrt(), 0.0]),
            ("mid1", vec![0.3, s, 0.0]),
            ("mid2", vec![0.3, 0.0, s]),
        ],
    )
    .unwrap();
    let candidates: Vec<String> = ["near", "mid1", "mid2"].map(String::from).to_vec();
    let probs = table.choice_probabilities("anchor", &candidates);
    for (p, e) in probs.iter().zip([0.6, 0.2, 0.2]) {
        assert!((p - e).abs() < 1e-12, "{probs:?}");
    }
    let freq = frequencies(&table, "anchor", &candidates, 100_000, 1);
    for (f, e) in freq.iter().zip([0.6, 0.2, 0.2]) {
        assert!((f - e).abs() < 0.01, "{freq:?}");
    }
}

#[test]
fn random_candidate_sets_match_their_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words: Vec<String> = (0..30).map(|i| format!("v{i}")).collect();
    let table = EmbeddingTable::from_vectors(
        4,
        words.iter().map(|w| (w.clone(), (0..4).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>())),
    )
    .unwrap();
    for set in 0..20 {
        let anchor = &words[rng.random_range(0..words.len())];
        let k = rng.random_range(2..=10);
        let mut candidates: Vec<String> = (0..k).map(|_| words[rng.random_range(0..words.len())].clone()).collect();
        candidates.sort();
        candidates.dedup();
        if set % 4 == 0 {
            candidates.push("unknown".into());
        }
        let expected: Vec<f64> = {
            let w: Vec<f64> = candidates
                .iter()
                .map(|c| table.cosine_similarity(anchor, c).map_or(SIMILARITY_FLOOR, |s| s.max(SIMILARITY_FLOOR)))
                .collect();
            let total: f64 = w.iter().sum();
            w.iter().map(|x| x / total).collect()
        };
        let freq = frequencies(&table, anchor, &candidates, 50_000, set);
        for ((c, f), e) in candidates.iter().zip(&freq).zip(&expected) {
            assert!((f - e).abs() < 0.01, "set {set}: {c} observed {f} expected {e}");
        }
    }
}

#[test]
fn fallback_vectors_pair_words_sharing_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pick = |rng: &mut ChaCha8Rng, xs: &[&str]| xs[rng.random_range(0..xs.len())].to_owned();
    let docs: Vec<Document> = (0..400)
        .map(|id| {
            let tokens = if id % 2 == 0 {
                vec![
                    pick(&mut rng, &["high", "mild"]),
                    pick(&mut rng, &["fever", "pyrexia"]),
                    pick(&mut rng, &["today", "overnight"]),
                ]
            } else {
                vec![
                    pick(&mut rng, &["left", "right"]),
                    pick(&mut rng, &["knee", "ankle"]),
                    pick(&mut rng, &["sprain", "injury"]),
                ]
            };
            Document { id, text: tokens.join(" "), tokens, label: "x".into() }
        })
        .collect();
    let table: EmbeddingTable<f64> = build_fallback_embeddings(&docs, 2, 300).unwrap();
    let synonyms = table.cosine_similarity("fever", "pyrexia").unwrap();
    let unrelated = table.cosine_similarity("fever", "knee").unwrap();
    assert!(synonyms > 0.9, "{synonyms}");
    assert!(unrelated < 0.1, "{unrelated}");
    assert!(table.cosine_similarity("knee", "ankle").unwrap() > 0.9);
}

#[test]
fn document_vector_is_the_mean_of_known_tokens() {
    let table = EmbeddingTable::from_vectors(2, [("a", vec![1.0, 2.0]), ("b", vec![3.0, -2.0])]).unwrap();
    let doc = |tokens: &[&str]| Document {
        id: 0,
        text: tokens.join(" "),
        tokens: tokens.iter().map(|t| t.to_string()).collect(),
        label: "x".into(),
    };
    let v = table.document_vector(&doc(&["a", "zzz", "b", "a"]));
    assert_eq!(v.in_vocabulary, 3);
    assert_eq!(v.values, vec![5.0 / 3.0, 2.0 / 3.0]);
    let empty = table.document_vector(&doc(&["zzz"]));
    assert!(empty.is_oov());
    assert_eq!(empty.values, vec![0.0, 0.0]);
}

proptest! {
    #[test]
    fn probabilities_ignore_vector_scale(
        vs in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 3), 4),
        scales in proptest::collection::vec(0.01f64..100.0, 4),
    ) {
        prop_assume!(vs.iter().all(|v| v.iter().any(|x| x.abs() > 1e-3)));
        let names = ["q", "r", "s", "t"];
        let plain = EmbeddingTable::from_vectors(3, names.iter().zip(&vs).map(|(n, v)| (*n, v.clone()))).unwrap();
        let scaled = EmbeddingTable::from_vectors(
            3,
            names.iter().zip(&vs).zip(&scales).map(|((n, v), k)| (*n, v.iter().map(|x| x * k).collect())),
        )
        .unwrap();
        let a = plain.choice_probabilities("q", &names[1..]);
        let b = scaled.choice_probabilities("q", &names[1..]);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
