use std::sync::OnceLock;

use proptest::prelude::*;

use punk_hedonics::sentiment::{normalize, score_text};
use punk_hedonics::SentimentLexicon;

/// Words for fuzzed texts: lexicon hits, boosters, dampeners, negations,
/// contrast and filler. Idiom components are left out, and so is "no":
/// an all-caps "NO" before a lexicon word has its valence zeroed and then
/// still receives the negative caps increment, which is not sign-symmetric.
const VOCAB: &[&str] = &[
    "good", "great", "love", "happy", "awesome", "nice", "bad", "terrible", "hate", "sad",
    "awful", "ugly", "win", "lost", "scam", "fine", "cool", "weak", "very", "extremely",
    "somewhat", "barely", "slightly", "really", "so", "not", "never", "isn't", "don't",
    "without", "but", "least", "kind", "of", "the", "punk", "floor", "sale", "eth", "today",
    "market", "is", "was", "a", ":)", ":(", "<3", "lol", "nothing",
];

fn fuzzed_text() -> impl Strategy<Value = String> {
    let word = (0..VOCAB.len(), any::<bool>(), 0u8..4);
    prop::collection::vec(word, 0..14).prop_map(|words| {
        words
            .into_iter()
            .map(|(i, caps, punct)| {
                let w = if caps { VOCAB[i].to_uppercase() } else { VOCAB[i].to_string() };
                match punct {
                    1 => format!("{w}!"),
                    2 => format!("{w}?"),
                    3 => format!("{w},"),
                    _ => w,
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    })
}

fn vader() -> &'static SentimentLexicon {
    static LEXICON: OnceLock<SentimentLexicon> = OnceLock::new();
    LEXICON.get_or_init(SentimentLexicon::vader)
}

/// The bundled lexicon with every valence negated.
fn mirrored() -> &'static SentimentLexicon {
    static LEXICON: OnceLock<SentimentLexicon> = OnceLock::new();
    LEXICON.get_or_init(|| {
        let pairs: Vec<(String, f64)> = vader().entries().map(|(t, v)| (t.to_string(), -v)).collect();
        SentimentLexicon::from_pairs(pairs.iter().map(|(t, v)| (t.as_str(), *v))).unwrap()
    })
}

#[test]
fn single_token_compound_matches_formula_on_valence_grid() {
    for step in -40..=40 {
        let valence = f64::from(step) / 10.0;
        let lexicon = SentimentLexicon::from_pairs([("token", valence)]).unwrap();
        let compound = score_text(&lexicon, "token").compound;
        let expected = valence / (valence * valence + 15.0).sqrt();
        assert!(
            (compound - expected).abs() < 1e-9,
            "valence {valence}: {compound} vs {expected}"
        );
    }
}

#[test]
fn worked_single_token_values() {
    let pos = SentimentLexicon::from_pairs([("x", 2.0)]).unwrap();
    let neg = SentimentLexicon::from_pairs([("x", -2.0)]).unwrap();
    let expected = 2.0 / 19.0f64.sqrt();
    assert!((score_text(&pos, "x").compound - expected).abs() < 1e-12);
    assert!((score_text(&neg, "x").compound + expected).abs() < 1e-12);
}

#[test]
fn neutral_text_scores_zero() {
    let lexicon = SentimentLexicon::vader();
    for text in ["the punk sold on tuesday", "", "   ", "floor eth board"] {
        assert_eq!(score_text(&lexicon, text).compound, 0.0, "{text:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scores_stay_in_range(text in fuzzed_text()) {
        let s = score_text(vader(), &text);
        prop_assert!((-1.0..=1.0).contains(&s.compound));
        for p in [s.positive, s.negative, s.neutral] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn mirrored_lexicon_negates_compound(text in fuzzed_text()) {
        let a = score_text(vader(), &text);
        let b = score_text(mirrored(), &text);
        prop_assert!((a.compound + b.compound).abs() < 1e-12, "{} vs {}", a.compound, b.compound);
        prop_assert!((a.positive - b.negative).abs() < 1e-12);
        prop_assert!((a.neutral - b.neutral).abs() < 1e-12);
    }

    #[test]
    fn scoring_is_deterministic(text in fuzzed_text()) {
        let a = score_text(vader(), &text);
        let b = score_text(vader(), &text);
        prop_assert_eq!(a.compound.to_bits(), b.compound.to_bits());
    }

    #[test]
    fn normalization_is_odd_and_monotone(x in -100f64..100.0, d in 1e-3f64..10.0) {
        prop_assert!((normalize(-x) + normalize(x)).abs() < 1e-12);
        prop_assert!(normalize(x) < normalize(x + d));
    }

    #[test]
    fn trailing_exclamation_never_shrinks_magnitude(text in fuzzed_text()) {
        // Appending to an emoticon would create a different token.
        prop_assume!(text.ends_with(|c: char| c.is_alphabetic() || c == '?' || c == ','));
        let plain = score_text(vader(), &text).compound;
        prop_assume!(plain != 0.0);
        let bang = score_text(vader(), &format!("{text}!")).compound;
        prop_assert!(bang.abs() >= plain.abs(), "{} vs {}", plain, bang);
    }
}
