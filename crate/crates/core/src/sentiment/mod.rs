//! Lexicon and rule-based sentiment scoring for short social-media texts.
//!
//! The scorer follows the VADER heuristics: per-token valences from a
//! lexicon, adjusted for boosters, negations, ALL-CAPS emphasis, contrastive
//! "but", and '!' / '?' emphasis, then squashed into a compound score with
//! `s / sqrt(s^2 + 15)`.

mod lexicon;
pub mod rules;

use serde::{Deserialize, Serialize};

pub use lexicon::{load_lexicon, LexiconError, SentimentLexicon, VALENCE_BOUND};

use rules::*;

/// Valence proportions and the normalised compound score of one text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SentimentScore {
    pub positive: f64,
    pub negative: f64,
    pub neutral: f64,
    pub compound: f64,
}

/// Maps an unbounded valence sum into [-1, 1].
pub fn normalize(sum: f64) -> f64 {
    let norm = sum / (sum * sum + NORMALIZATION_ALPHA).sqrt();
    norm.clamp(-1.0, 1.0)
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'..='\u{201f}' | '\u{2026}' | '\u{2013}' | '\u{2014}' | '\u{00ab}' | '\u{00bb}'
                | '\u{00a1}' | '\u{00bf}'
        )
}

/// Splits on Unicode whitespace and strips leading/trailing punctuation.
/// Tokens made only of punctuation (emoticons such as `:)`) are kept whole.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(|raw| {
            let stripped = raw.trim_matches(is_punct);
            if stripped.is_empty() {
                raw
            } else {
                stripped
            }
        })
        .collect()
}

/// Has at least one cased letter and no lowercase letters.
fn is_all_caps(token: &str) -> bool {
    token.chars().any(char::is_uppercase) && !token.chars().any(char::is_lowercase)
}

/// Some, but not all, tokens are ALL-CAPS.
fn caps_differ(tokens: &[&str]) -> bool {
    let caps = tokens.iter().filter(|t| is_all_caps(t)).count();
    caps > 0 && caps < tokens.len()
}

struct Context<'a> {
    lexicon: &'a SentimentLexicon,
    raw: Vec<&'a str>,
    lower: Vec<String>,
    caps_differ: bool,
}

impl Context<'_> {
    fn word(&self, i: usize) -> &str {
        &self.lower[i]
    }

    fn scalar_inc_dec(&self, j: usize, valence: f64) -> f64 {
        let Some(mut scalar) = self.lexicon.booster(self.word(j)) else {
            return 0.0;
        };
        if valence < 0.0 {
            scalar = -scalar;
        }
        if is_all_caps(self.raw[j]) && self.caps_differ {
            if valence > 0.0 {
                scalar += ALL_CAPS_INCREMENT;
            } else {
                scalar -= ALL_CAPS_INCREMENT;
            }
        }
        scalar
    }

    fn valence_at(&self, i: usize) -> f64 {
        let lex = self.lexicon;
        let Some(base) = lex.valence(self.word(i)) else {
            return 0.0;
        };
        let n = self.lower.len();
        let mut valence = base;

        // "no" directly before another lexicon word acts as a negator only.
        if self.word(i) == "no" && i + 1 < n && lex.contains(self.word(i + 1)) {
            valence = 0.0;
        }
        if (i > 0 && self.word(i - 1) == "no")
            || (i > 1 && self.word(i - 2) == "no")
            || (i > 2 && self.word(i - 3) == "no" && matches!(self.word(i - 1), "or" | "nor"))
        {
            valence = base * NEGATION_SCALAR;
        }

        if is_all_caps(self.raw[i]) && self.caps_differ {
            if valence > 0.0 {
                valence += ALL_CAPS_INCREMENT;
            } else {
                valence -= ALL_CAPS_INCREMENT;
            }
        }

        for (back, weight) in BOOSTER_DISTANCE_WEIGHTS.iter().enumerate().take(LOOKBACK) {
            if i > back && !lex.contains(self.word(i - back - 1)) {
                let s = self.scalar_inc_dec(i - back - 1, valence);
                if s != 0.0 {
                    valence += s * weight;
                }
                valence = self.negation_check(valence, back, i);
                if back == 2 {
                    valence = self.special_idioms(valence, i);
                }
            }
        }
        self.least_check(valence, i)
    }

    fn negation_check(&self, valence: f64, back: usize, i: usize) -> f64 {
        let w = |k: usize| self.word(i - k);
        match back {
            0 if is_negation(w(1)) => valence * NEGATION_SCALAR,
            1 if w(2) == "never" && matches!(w(1), "so" | "this") => valence * NEVER_SO_SCALAR,
            1 if w(2) == "without" && w(1) == "doubt" => valence,
            1 if is_negation(w(2)) => valence * NEGATION_SCALAR,
            2 if (w(3) == "never" && matches!(w(2), "so" | "this"))
                || matches!(w(1), "so" | "this") =>
            {
                valence * NEVER_SO_SCALAR
            }
            2 if w(3) == "without" && (w(2) == "doubt" || w(1) == "doubt") => valence,
            2 if is_negation(w(3)) => valence * NEGATION_SCALAR,
            _ => valence,
        }
    }

    /// Requires `i >= 3`.
    fn special_idioms(&self, mut valence: f64, i: usize) -> f64 {
        let w = |k: usize| self.word(k);
        let n = self.lower.len();
        let one_zero = format!("{} {}", w(i - 1), w(i));
        let two_one_zero = format!("{} {} {}", w(i - 2), w(i - 1), w(i));
        let two_one = format!("{} {}", w(i - 2), w(i - 1));
        let three_two_one = format!("{} {} {}", w(i - 3), w(i - 2), w(i - 1));
        let three_two = format!("{} {}", w(i - 3), w(i - 2));

        if let Some(v) = [&one_zero, &two_one_zero, &two_one, &three_two_one, &three_two]
            .into_iter()
            .find_map(|seq| special_case(seq))
        {
            valence = v;
        }
        if n - 1 > i {
            if let Some(v) = special_case(&format!("{} {}", w(i), w(i + 1))) {
                valence = v;
            }
        }
        if n - 1 > i + 1 {
            if let Some(v) = special_case(&format!("{} {} {}", w(i), w(i + 1), w(i + 2))) {
                valence = v;
            }
        }
        for gram in [&three_two_one, &three_two, &two_one] {
            if let Some(b) = self.lexicon.booster(gram) {
                valence += b;
            }
        }
        valence
    }

    fn least_check(&self, valence: f64, i: usize) -> f64 {
        let lex = self.lexicon;
        if i > 1 && !lex.contains(self.word(i - 1)) && self.word(i - 1) == "least" {
            if self.word(i - 2) != "at" && self.word(i - 2) != "very" {
                return valence * NEGATION_SCALAR;
            }
        } else if i > 0 && !lex.contains(self.word(i - 1)) && self.word(i - 1) == "least" {
            return valence * NEGATION_SCALAR;
        }
        valence
    }
}

/// Combined '!' and '?' emphasis of a text.
pub fn punctuation_emphasis(text: &str) -> f64 {
    let bangs = text.matches('!').count().min(MAX_EXCLAMATIONS);
    let questions = text.matches('?').count();
    let question_amp = match questions {
        0 | 1 => 0.0,
        q if q <= MAX_COUNTED_QUESTIONS => q as f64 * QUESTION_INCREMENT,
        _ => QUESTION_CAP,
    };
    bangs as f64 * EXCLAMATION_INCREMENT + question_amp
}

/// Per-token adjusted valences (one entry per token, 0 for neutral tokens).
pub fn token_valences(lexicon: &SentimentLexicon, text: &str) -> Vec<f64> {
    let raw = tokenize(text);
    let lower: Vec<String> = raw.iter().map(|t| t.to_lowercase()).collect();
    let ctx = Context {
        lexicon,
        caps_differ: caps_differ(&raw),
        raw,
        lower,
    };
    let n = ctx.lower.len();
    let mut sentiments: Vec<f64> = (0..n)
        .map(|i| {
            let word = ctx.word(i);
            if lexicon.booster(word).is_some()
                || (word == "kind" && i + 1 < n && ctx.word(i + 1) == "of")
            {
                0.0
            } else {
                ctx.valence_at(i)
            }
        })
        .collect();

    if let Some(pivot) = ctx.lower.iter().position(|w| lexicon.is_but_word(w)) {
        for (i, s) in sentiments.iter_mut().enumerate() {
            if i < pivot {
                *s *= BUT_BEFORE_WEIGHT;
            } else if i > pivot {
                *s *= BUT_AFTER_WEIGHT;
            }
        }
    }
    sentiments
}

/// Scores a text. Total: empty or whitespace-only input yields all zeros.
pub fn score_text(lexicon: &SentimentLexicon, text: &str) -> SentimentScore {
    let sentiments = token_valences(lexicon, text);
    if sentiments.is_empty() {
        return SentimentScore::default();
    }

    let emphasis = punctuation_emphasis(text);
    let mut sum: f64 = sentiments.iter().sum();
    if sum > 0.0 {
        sum += emphasis;
    } else if sum < 0.0 {
        sum -= emphasis;
    }
    let compound = normalize(sum);

    let mut pos_sum = 0.0;
    let mut neg_sum = 0.0;
    let mut neutral = 0usize;
    for &s in &sentiments {
        if s > 0.0 {
            pos_sum += s + 1.0;
        } else if s < 0.0 {
            neg_sum += s - 1.0;
        } else {
            neutral += 1;
        }
    }
    if pos_sum > neg_sum.abs() {
        pos_sum += emphasis;
    } else if pos_sum < neg_sum.abs() {
        neg_sum -= emphasis;
    }
    let total = pos_sum + neg_sum.abs() + neutral as f64;

    SentimentScore {
        positive: (pos_sum / total).abs(),
        negative: (neg_sum / total).abs(),
        neutral: (neutral as f64 / total).abs(),
        compound,
    }
}

/// Compound score only; identical to `score_text(..).compound`.
pub fn compound_only(lexicon: &SentimentLexicon, text: &str) -> f64 {
    score_text(lexicon, text).compound
}
