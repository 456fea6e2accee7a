//! Tweet corpora: ingestion, daily volume and sentiment, keyword statistics.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use chrono::{DateTime, NaiveDate, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::ingest::{field, parse_timestamp, CsvTable, IngestError, Ingested};
use crate::sentiment::{compound_only, SentimentLexicon};
use crate::series::{DailySeries, DateRange};

/// Keywords screened in the gender / skin-tone corpus.
pub const ETHICS_KEYWORDS: [&str; 9] = [
    "female", "male", "dark", "light", "medium", "albino", "alien", "ape", "zombie",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tweet {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub language: String,
}

impl Tweet {
    /// UTC calendar day of the tweet.
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

/// Result of [`ingest_tweets`].
#[derive(Debug, Clone, Default)]
pub struct TweetIngest {
    pub tweets: Vec<Tweet>,
    pub rejects: Vec<crate::Reject>,
    /// Rows dropped because their timestamp fell outside the study window.
    pub out_of_window: usize,
    /// Rows dropped by the language filter.
    pub other_language: usize,
}

/// Reads the `id,timestamp,text,lang` CSV.
///
/// Rows with a different language or outside `window` are dropped and
/// counted; rows with an unparseable timestamp or a repeated id go to the
/// rejects report. Only a missing column aborts ingestion.
pub fn ingest_tweets<R: Read>(
    source: R,
    language_filter: &str,
    window: DateRange,
) -> Result<TweetIngest, IngestError> {
    let mut table = CsvTable::open(source, "tweets")?;
    let id_col = table.require("id")?;
    let ts_col = table.require("timestamp")?;
    let text_col = table.require("text")?;
    let lang_col = table.require("lang")?;

    let mut out = TweetIngest::default();
    let mut accepted = Ingested::new();
    let mut seen = HashSet::new();
    for row in table.rows() {
        let (row_no, rec) = match row {
            Ok(r) => r,
            Err((row_no, msg)) => {
                accepted.reject(row_no, msg);
                continue;
            }
        };
        let parsed = (|| {
            let id = field(&rec, id_col, "id")?;
            let timestamp = parse_timestamp(field(&rec, ts_col, "timestamp")?)?;
            let text = rec
                .get(text_col)
                .ok_or_else(|| "missing field `text`".to_string())?;
            let language = field(&rec, lang_col, "lang")?;
            Ok::<_, String>(Tweet {
                id: id.to_string(),
                timestamp,
                text: text.to_string(),
                language: language.to_string(),
            })
        })();
        let tweet = match parsed {
            Ok(t) => t,
            Err(reason) => {
                accepted.reject(row_no, reason);
                continue;
            }
        };
        if !tweet.language.eq_ignore_ascii_case(language_filter) {
            out.other_language += 1;
            continue;
        }
        if !window.contains(tweet.date()) {
            out.out_of_window += 1;
            continue;
        }
        if !seen.insert(tweet.id.clone()) {
            accepted.reject(row_no, format!("duplicate id `{}`", tweet.id));
            continue;
        }
        accepted.records.push(tweet);
    }
    out.tweets = accepted.records;
    out.rejects = accepted.rejects;
    Ok(out)
}

/// Number of tweets per UTC day; days without tweets are absent.
pub fn daily_volume(corpus: &[Tweet]) -> DailySeries {
    let mut counts: BTreeMap<NaiveDate, u64> = BTreeMap::new();
    for t in corpus {
        *counts.entry(t.date()).or_default() += 1;
    }
    counts.into_iter().map(|(d, c)| (d, c as f64)).collect()
}

/// Compound score of every tweet, in corpus order.
pub fn score_corpus(corpus: &[Tweet], lexicon: &SentimentLexicon) -> Vec<f64> {
    corpus.iter().map(|t| compound_only(lexicon, &t.text)).collect()
}

/// Mean compound score per UTC day; days without tweets are absent.
pub fn daily_mean_sentiment(corpus: &[Tweet], lexicon: &SentimentLexicon) -> DailySeries {
    let scores = score_corpus(corpus, lexicon);
    daily_mean_of(corpus, &scores)
}

/// Daily mean of precomputed per-tweet scores (`scores[i]` belongs to `corpus[i]`).
pub fn daily_mean_of(corpus: &[Tweet], scores: &[f64]) -> DailySeries {
    let mut acc: BTreeMap<NaiveDate, (f64, u64)> = BTreeMap::new();
    for (t, s) in corpus.iter().zip(scores) {
        let e = acc.entry(t.date()).or_default();
        e.0 += s;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(d, (sum, n))| (d, sum / n as f64))
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KeywordError {
    #[error("keyword list is empty")]
    Empty,
    #[error("keyword #{0} is blank")]
    Blank(usize),
    #[error("keyword `{0}` must be a single word")]
    NotAWord(String),
    #[error("duplicate keyword `{0}`")]
    Duplicate(String),
}

/// Ordered, lowercase, duplicate-free keyword list matched as whole words,
/// ignoring case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordFilter {
    keywords: Vec<String>,
}

impl KeywordFilter {
    pub fn new<I, S>(keywords: I) -> Result<Self, KeywordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for (i, k) in keywords.into_iter().enumerate() {
            let k = k.as_ref().trim().to_lowercase();
            if k.is_empty() {
                return Err(KeywordError::Blank(i));
            }
            if words(&k).count() != 1 || words(&k).next() != Some(k.clone()) {
                return Err(KeywordError::NotAWord(k));
            }
            if out.contains(&k) {
                return Err(KeywordError::Duplicate(k));
            }
            out.push(k);
        }
        if out.is_empty() {
            return Err(KeywordError::Empty);
        }
        Ok(Self { keywords: out })
    }

    /// The nine gender and skin-tone keywords.
    pub fn ethics_default() -> Self {
        Self::new(ETHICS_KEYWORDS).expect("valid keyword list")
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    /// Number of whole-word occurrences of each keyword in `text`.
    fn count_in(&self, text: &str) -> Vec<u64> {
        let mut counts = vec![0u64; self.keywords.len()];
        for w in words(text) {
            if let Some(i) = self.keywords.iter().position(|k| *k == w) {
                counts[i] += 1;
            }
        }
        counts
    }
}

/// Lowercased maximal runs of alphanumeric characters.
fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

/// Whole-word, case-insensitive occurrence counts in keyword order.
/// Several hits inside one tweet each count.
pub fn keyword_frequency(corpus: &[Tweet], filter: &KeywordFilter) -> Vec<(String, u64)> {
    let mut totals = vec![0u64; filter.keywords.len()];
    for t in corpus {
        for (acc, c) in totals.iter_mut().zip(filter.count_in(&t.text)) {
            *acc += c;
        }
    }
    filter.keywords.iter().cloned().zip(totals).collect()
}

/// Mean compound score over tweets mentioning each keyword; `None` when no
/// tweet mentions it.
pub fn keyword_sentiment(
    corpus: &[Tweet],
    filter: &KeywordFilter,
    lexicon: &SentimentLexicon,
) -> Vec<(String, Option<f64>)> {
    let scores = score_corpus(corpus, lexicon);
    keyword_sentiment_of(corpus, &scores, filter)
}

/// [`keyword_sentiment`] over precomputed per-tweet scores.
pub fn keyword_sentiment_of(
    corpus: &[Tweet],
    scores: &[f64],
    filter: &KeywordFilter,
) -> Vec<(String, Option<f64>)> {
    let mut acc = vec![(0.0f64, 0u64); filter.keywords.len()];
    for (t, s) in corpus.iter().zip(scores) {
        for (slot, c) in acc.iter_mut().zip(filter.count_in(&t.text)) {
            if c > 0 {
                slot.0 += s;
                slot.1 += 1;
            }
        }
    }
    filter
        .keywords
        .iter()
        .cloned()
        .zip(acc)
        .map(|(k, (sum, n))| (k, (n > 0).then(|| sum / n as f64)))
        .collect()
}
