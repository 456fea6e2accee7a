use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read};

use thiserror::Error;

use super::rules::{BOOSTERS, BUT_WORDS, NEGATIONS};

/// Valences must lie in this closed interval.
pub const VALENCE_BOUND: f64 = 4.0;

const BUNDLED_VADER: &str = include_str!("../../data/vader_lexicon.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("lexicon line {line}: valence {valence} for `{token}` outside [-4, 4]")]
    OutOfRange {
        line: usize,
        token: String,
        valence: f64,
    },
    #[error("lexicon line {line}: `{token}` is a booster word and cannot carry a valence")]
    BoosterCollision { line: usize, token: String },
    #[error("reading lexicon: {0}")]
    Io(#[from] std::io::Error),
}

/// Token valences plus the compiled-in modifier word lists.
///
/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone)]
pub struct SentimentLexicon {
    entries: HashMap<String, f64>,
    boosters: HashMap<&'static str, f64>,
    negations: HashSet<&'static str>,
    but_words: HashSet<&'static str>,
}

impl SentimentLexicon {
    fn with_entries(entries: HashMap<String, f64>) -> Self {
        Self {
            entries,
            boosters: BOOSTERS.iter().copied().collect(),
            negations: NEGATIONS.iter().copied().collect(),
            but_words: BUT_WORDS.iter().copied().collect(),
        }
    }

    /// Parses `token<TAB>valence[<TAB>...]` lines. Blank lines and lines
    /// starting with `#` are skipped; tokens are lowercased and a repeated
    /// token keeps its last valence.
    pub fn from_reader<R: Read>(source: R) -> Result<Self, LexiconError> {
        let boosters: HashSet<&str> = BOOSTERS.iter().map(|(w, _)| *w).collect();
        let mut entries = HashMap::new();
        for (idx, line) in BufReader::new(source).lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let token = cols.next().unwrap_or_default().trim().to_lowercase();
            let raw = cols.next().ok_or_else(|| LexiconError::Parse {
                line: line_no,
                message: "expected `token<TAB>valence`".into(),
            })?;
            if token.is_empty() {
                return Err(LexiconError::Parse {
                    line: line_no,
                    message: "empty token".into(),
                });
            }
            let valence: f64 = raw.trim().parse().map_err(|_| LexiconError::Parse {
                line: line_no,
                message: format!("non-numeric valence `{raw}`"),
            })?;
            if !(-VALENCE_BOUND..=VALENCE_BOUND).contains(&valence) {
                return Err(LexiconError::OutOfRange {
                    line: line_no,
                    token,
                    valence,
                });
            }
            if boosters.contains(token.as_str()) {
                return Err(LexiconError::BoosterCollision {
                    line: line_no,
                    token,
                });
            }
            entries.insert(token, valence);
        }
        Ok(Self::with_entries(entries))
    }

    /// The standard VADER lexicon shipped with the crate.
    pub fn vader() -> Self {
        Self::from_reader(BUNDLED_VADER.as_bytes()).expect("bundled lexicon is valid")
    }

    /// Builds a lexicon directly from `(token, valence)` pairs, applying the
    /// same validation as [`SentimentLexicon::from_reader`].
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let text: String = pairs
            .into_iter()
            .map(|(t, v)| format!("{t}\t{v}\n"))
            .collect();
        Self::from_reader(text.as_bytes())
    }

    /// Valence of a lowercase token.
    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn booster(&self, token: &str) -> Option<f64> {
        self.boosters.get(token).copied()
    }

    pub fn is_but_word(&self, token: &str) -> bool {
        self.but_words.contains(token)
    }

    pub fn negations(&self) -> &HashSet<&'static str> {
        &self.negations
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Loads a lexicon from a byte stream.
pub fn load_lexicon<R: Read>(source: R) -> Result<SentimentLexicon, LexiconError> {
    SentimentLexicon::from_reader(source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line() {
        let lex = load_lexicon("good\t1.9\n".as_bytes()).unwrap();
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.valence("good"), Some(1.9));
    }

    #[test]
    fn empty_stream_loads() {
        assert!(load_lexicon(&b""[..]).unwrap().is_empty());
    }

    #[test]
    fn duplicate_token_keeps_last() {
        let text = "good\t1.9\ngood\t2.1\n";
        let lex = load_lexicon(text.as_bytes()).unwrap();
        // Replay the lines one by one; the last assignment is what remains.
        let mut replay = HashMap::new();
        for line in text.lines() {
            let (t, v) = line.split_once('\t').unwrap();
            replay.insert(t.to_string(), v.parse::<f64>().unwrap());
        }
        assert_eq!(lex.len(), replay.len());
        assert_eq!(lex.valence("good"), replay.get("good").copied());
        assert_eq!(lex.valence("good"), Some(2.1));
    }

    #[test]
    fn extra_columns_and_comments_ignored() {
        let text = "# header\n\nbad\t-2.5\t0.5\t[-2, -3]\n:)\t2.0\n";
        let lex = load_lexicon(text.as_bytes()).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.valence("bad"), Some(-2.5));
        assert_eq!(lex.valence(":)"), Some(2.0));
    }

    #[test]
    fn tokens_are_lowercased() {
        let lex = load_lexicon("GREAT\t3.1\n".as_bytes()).unwrap();
        assert_eq!(lex.valence("great"), Some(3.1));
        assert!(lex.entries().all(|(t, _)| t == t.to_lowercase()));
    }

    #[test]
    fn non_numeric_valence_names_the_line() {
        let err = load_lexicon("good\t1.9\nbad\tvery\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Parse { line: 2, .. }), "{err}");
        let err = load_lexicon("lonely\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Parse { line: 1, .. }));
    }

    #[test]
    fn out_of_range_valence_is_rejected() {
        let err = load_lexicon("wow\t4.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::OutOfRange { line: 1, .. }));
        assert!(load_lexicon("edge\t-4\n".as_bytes()).is_ok());
    }

    #[test]
    fn booster_tokens_cannot_be_entries() {
        let err = load_lexicon("very\t1.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::BoosterCollision { .. }));
    }

    #[test]
    fn bundled_vader_satisfies_invariants() {
        let lex = SentimentLexicon::vader();
        assert!(lex.len() > 7000);
        assert_eq!(lex.valence("good"), Some(1.9));
        for (token, v) in lex.entries() {
            assert!(!token.is_empty());
            assert_eq!(token, token.to_lowercase());
            assert!((-4.0..=4.0).contains(&v));
            assert!(lex.booster(token).is_none());
        }
    }
}
