//! Run configuration: a `key = value` file plus command-line overrides.
//!
//! Recognised keys:
//!
//! | key                     | meaning                                         |
//! |-------------------------|-------------------------------------------------|
//! | `tweets`                | general tweet corpus CSV                        |
//! | `keyword_tweets`        | gender / skin-tone keyword corpus CSV           |
//! | `sales`                 | sales CSV                                       |
//! | `gas`                   | daily gas price CSV                             |
//! | `fx`                    | daily ETH/USD close CSV                         |
//! | `lexicon`               | sentiment lexicon (bundled VADER when unset)    |
//! | `out_dir`               | output directory (default `out`)                |
//! | `study_start`           | first day of the study window                   |
//! | `study_end`             | last day of the study window                    |
//! | `split_date`            | first day of the after window (2021-01-01)      |
//! | `correlation_threshold` | weak-correlation cut-off (0.5)                  |
//! | `max_adf_lag`           | ADF lag cap (Schwert's rule when unset)         |
//! | `language`              | tweet language kept (`en`)                      |
//! | `keywords`              | comma-separated keyword list                    |
//!
//! Blank lines and lines starting with `#` are ignored. Relative input
//! paths are resolved against the data directory when one is given.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use chrono::NaiveDate;
use punk_hedonics::ingest::parse_date;
use punk_hedonics::source::{Dataset, FileSource};
use punk_hedonics::study::DEFAULT_CORRELATION_THRESHOLD;
use punk_hedonics::tweets::ETHICS_KEYWORDS;
use punk_hedonics::{DateRange, KeywordFilter, WindowSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tweets: Option<PathBuf>,
    pub keyword_tweets: Option<PathBuf>,
    pub sales: Option<PathBuf>,
    pub gas: Option<PathBuf>,
    pub fx: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub study: DateRange,
    pub split_date: NaiveDate,
    pub correlation_threshold: f64,
    pub max_adf_lag: Option<usize>,
    pub language: String,
    pub keywords: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tweets: None,
            keyword_tweets: None,
            sales: None,
            gas: None,
            fx: None,
            lexicon: None,
            out_dir: PathBuf::from("out"),
            study: DateRange::study_default(),
            split_date: WindowSpec::default_split(),
            correlation_threshold: DEFAULT_CORRELATION_THRESHOLD,
            max_adf_lag: None,
            language: "en".into(),
            keywords: ETHICS_KEYWORDS.iter().map(|k| k.to_string()).collect(),
        }
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let path = || Some(PathBuf::from(value));
        match key {
            "tweets" => self.tweets = path(),
            "keyword_tweets" => self.keyword_tweets = path(),
            "sales" => self.sales = path(),
            "gas" => self.gas = path(),
            "fx" => self.fx = path(),
            "lexicon" => self.lexicon = path(),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "study_start" => self.study.start = parse_date(value).map_err(|e| anyhow!(e))?,
            "study_end" => self.study.end = parse_date(value).map_err(|e| anyhow!(e))?,
            "split_date" => self.split_date = parse_date(value).map_err(|e| anyhow!(e))?,
            "correlation_threshold" => {
                let t: f64 = value.parse().with_context(|| format!("invalid number `{value}`"))?;
                if !(t > 0.0 && t <= 1.0) {
                    bail!("correlation_threshold must lie in (0, 1], got {t}");
                }
                self.correlation_threshold = t;
            }
            "max_adf_lag" => {
                self.max_adf_lag = Some(value.parse().with_context(|| format!("invalid lag `{value}`"))?)
            }
            "language" => self.language = value.to_string(),
            "keywords" => {
                self.keywords = value
                    .split(',')
                    .map(|k| k.trim().to_string())
                    .filter(|k| !k.is_empty())
                    .collect()
            }
            other => bail!("unknown config key `{other}`"),
        }
        Ok(())
    }

    /// Parses the text of a config file on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)
            .with_context(|| format!("in config {}", path.display()))?;
        Ok(cfg)
    }

    /// Prefixes relative input paths with `data_dir`.
    pub fn resolve_paths(&mut self, data_dir: &Path) {
        for p in [
            &mut self.tweets,
            &mut self.keyword_tweets,
            &mut self.sales,
            &mut self.gas,
            &mut self.fx,
            &mut self.lexicon,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = data_dir.join(&*p);
            }
        }
    }

    /// Semantic checks that do not touch the file system.
    pub fn validate(&self) -> Result<()> {
        if self.study.start > self.study.end {
            bail!("study_start {} is after study_end {}", self.study.start, self.study.end);
        }
        WindowSpec::standard(self.study, self.split_date)?;
        self.keyword_filter()?;
        Ok(())
    }

    pub fn keyword_filter(&self) -> Result<KeywordFilter> {
        Ok(KeywordFilter::new(self.keywords.iter().map(String::as_str))?)
    }

    pub fn windows(&self) -> Result<[WindowSpec; 3]> {
        Ok(WindowSpec::standard(self.study, self.split_date)?)
    }

    /// Local-file source for every configured path.
    pub fn file_source(&self) -> FileSource {
        let mut src = FileSource::new();
        let entries = [
            (Dataset::Tweets, &self.tweets),
            (Dataset::KeywordTweets, &self.keyword_tweets),
            (Dataset::Sales, &self.sales),
            (Dataset::Gas, &self.gas),
            (Dataset::Fx, &self.fx),
            (Dataset::Lexicon, &self.lexicon),
        ];
        for (d, p) in entries {
            if let Some(p) = p {
                src.set(d, p);
            }
        }
        src
    }
}
