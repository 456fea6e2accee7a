//! Pipeline stages behind each subcommand. Every stage writes its files into
//! the configured output directory and records non-fatal problems as
//! warnings; only errors that make a stage meaningless abort the run.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use punk_hedonics::ingest::write_rejects;
use punk_hedonics::market::{
    attribute_distribution, daily_aggregates, ingest_fx, ingest_gas, ingest_sales, pct_change,
    resolve_rarity, InverseComboFrequency, MarketError, PctChange,
};
use punk_hedonics::panel::{build_panel, stationarity_screen, write_panel_csv, PanelError, PanelInputs};
use punk_hedonics::report::{lollipop_rows, structural_change_table, suite_tables, write_lollipop_csv};
use punk_hedonics::sentiment::load_lexicon;
use punk_hedonics::source::{DataSource, Dataset};
use punk_hedonics::study::{before_after, correlation_precheck, run_suite, FitOutcome, SuiteDocument};
use punk_hedonics::tweets::{daily_mean_of, daily_volume, ingest_tweets, keyword_frequency, keyword_sentiment, score_corpus};
use punk_hedonics::{DailySeries, Gender, ModelSpec, Reject, SaleRecord, SentimentLexicon, SkinTone};

use crate::config::RunConfig;

/// Pipeline subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Score,
    Keywords,
    Regress,
    Heatmap,
    All,
}

impl Command {
    /// Inputs that must be present before the command starts.
    pub fn required(self) -> &'static [Dataset] {
        match self {
            Command::Score => &[Dataset::Tweets],
            Command::Keywords => &[Dataset::KeywordTweets],
            Command::Heatmap => &[Dataset::Sales],
            Command::Regress | Command::All => &[Dataset::Tweets, Dataset::Sales, Dataset::Gas, Dataset::Fx],
        }
    }
}

/// Files written and warnings raised by a run.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    source: &'a dyn DataSource,
    out: Outcome,
    lexicon: Option<SentimentLexicon>,
    sales: Option<Vec<SaleRecord>>,
}

/// Runs `command`; outputs land in `cfg.out_dir`.
pub fn run(command: Command, cfg: &RunConfig, source: &dyn DataSource) -> Result<Outcome> {
    cfg.validate()?;
    for &d in command.required() {
        if !source.provides(d) {
            bail!("`{}` input is required for this command but not configured", d.key());
        }
        source
            .open(d)
            .with_context(|| format!("input `{}` ({}) is not readable", d.key(), source.describe(d)))?;
    }
    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating output directory {}", cfg.out_dir.display()))?;

    let mut ctx = Ctx {
        cfg,
        source,
        out: Outcome::default(),
        lexicon: None,
        sales: None,
    };
    match command {
        Command::Score => {
            score(&mut ctx)?;
        }
        Command::Keywords => keywords(&mut ctx)?,
        Command::Heatmap => heatmap(&mut ctx)?,
        Command::Regress => regress(&mut ctx)?,
        Command::All => {
            heatmap(&mut ctx)?;
            if source.provides(Dataset::KeywordTweets) {
                keywords(&mut ctx)?;
            } else {
                ctx.warn("keyword_tweets not configured; keyword outputs skipped");
            }
            regress(&mut ctx)?;
        }
    }
    Ok(ctx.out)
}

impl Ctx<'_> {
    fn warn(&mut self, msg: impl Into<String>) {
        self.out.warnings.push(msg.into());
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    fn open(&self, d: Dataset) -> Result<Box<dyn Read>> {
        self.source
            .open(d)
            .with_context(|| format!("opening `{}` ({})", d.key(), self.source.describe(d)))
    }

    fn context(&self, d: Dataset) -> String {
        format!("reading `{}` ({})", d.key(), self.source.describe(d))
    }

    /// Creates `name` in the output directory and hands a buffered writer
    /// to `body`.
    fn write<F>(&mut self, name: &str, body: F) -> Result<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<()>,
    {
        let path = self.path(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        body(&mut w).with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
        self.out.files.push(path);
        Ok(())
    }

    fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        self.write(name, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(header)?;
            for r in rows {
                csv.write_record(&r)?;
            }
            csv.flush()?;
            Ok(())
        })
    }

    fn write_series(&mut self, name: &str, value_header: &str, series: &DailySeries) -> Result<()> {
        let rows = series.iter().map(|(d, v)| vec![d.to_string(), v.to_string()]);
        self.write_csv(name, &["date", value_header], rows)
    }

    fn write_rejects(&mut self, d: Dataset, rejects: &[Reject]) -> Result<()> {
        if !rejects.is_empty() {
            self.warn(format!(
                "{} row(s) of `{}` rejected; see {}_rejects.csv",
                rejects.len(),
                d.key(),
                d.key()
            ));
        }
        self.write(&format!("{}_rejects.csv", d.key()), |w| Ok(write_rejects(w, rejects)?))
    }

    fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.write_all(b"\n")?;
            Ok(())
        })
    }

    fn lexicon(&mut self) -> Result<&SentimentLexicon> {
        if self.lexicon.is_none() {
            let lex = if self.source.provides(Dataset::Lexicon) {
                load_lexicon(self.open(Dataset::Lexicon)?).with_context(|| self.context(Dataset::Lexicon))?
            } else {
                SentimentLexicon::vader()
            };
            self.lexicon = Some(lex);
        }
        Ok(self.lexicon.as_ref().expect("initialised above"))
    }

    /// Sales inside the study window, ingested once per run.
    fn sales(&mut self) -> Result<Vec<SaleRecord>> {
        if let Some(s) = &self.sales {
            return Ok(s.clone());
        }
        let ingested = ingest_sales(self.open(Dataset::Sales)?).with_context(|| self.context(Dataset::Sales))?;
        self.write_rejects(Dataset::Sales, &ingested.rejects)?;
        let study = self.cfg.study;
        let (inside, outside): (Vec<_>, Vec<_>) =
            ingested.records.into_iter().partition(|s| study.contains(s.date));
        if !outside.is_empty() {
            self.warn(format!("{} sale(s) outside the study window ignored", outside.len()));
        }
        self.sales = Some(inside.clone());
        Ok(inside)
    }
}

/// Daily sentiment, its sign distribution and tweet volume. Returns the
/// daily mean compound series.
fn score(ctx: &mut Ctx<'_>) -> Result<DailySeries> {
    let ing = ingest_tweets(ctx.open(Dataset::Tweets)?, &ctx.cfg.language, ctx.cfg.study)
        .with_context(|| ctx.context(Dataset::Tweets))?;
    ctx.write_rejects(Dataset::Tweets, &ing.rejects)?;
    if ing.out_of_window > 0 {
        ctx.warn(format!("{} tweet(s) outside the study window ignored", ing.out_of_window));
    }
    let scores = score_corpus(&ing.tweets, ctx.lexicon()?);
    let daily = daily_mean_of(&ing.tweets, &scores);
    if daily.is_empty() {
        ctx.warn("no data: the tweet corpus has no usable rows; sentiment files are header-only");
    }
    ctx.write_series("daily_sentiment.csv", "value", &daily)?;

    let (mut pos, mut neg, mut neu) = (0u64, 0u64, 0u64);
    for v in daily.values() {
        match v.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => pos += 1,
            Some(std::cmp::Ordering::Less) => neg += 1,
            _ => neu += 1,
        }
    }
    let dist = if daily.is_empty() {
        Vec::new()
    } else {
        vec![
            vec!["positive".to_string(), pos.to_string()],
            vec!["negative".to_string(), neg.to_string()],
            vec!["neutral".to_string(), neu.to_string()],
        ]
    };
    ctx.write_csv("sentiment_distribution.csv", &["sign", "day_count"], dist)?;
    ctx.write_series("daily_volume.csv", "tweet_count", &daily_volume(&ing.tweets))?;
    Ok(daily)
}

fn keywords(ctx: &mut Ctx<'_>) -> Result<()> {
    let filter = ctx.cfg.keyword_filter()?;
    let ing = ingest_tweets(ctx.open(Dataset::KeywordTweets)?, &ctx.cfg.language, ctx.cfg.study)
        .with_context(|| ctx.context(Dataset::KeywordTweets))?;
    ctx.write_rejects(Dataset::KeywordTweets, &ing.rejects)?;
    if ing.tweets.is_empty() {
        ctx.warn("no data: the keyword corpus has no usable rows");
    }
    let freq = keyword_frequency(&ing.tweets, &filter);
    let sentiment = keyword_sentiment(&ing.tweets, &filter, ctx.lexicon()?);
    ctx.write_csv(
        "keyword_frequency.csv",
        &["keyword", "count"],
        freq.into_iter().map(|(k, c)| vec![k, c.to_string()]),
    )?;
    ctx.write_csv(
        "keyword_sentiment.csv",
        &["keyword", "mean_compound"],
        sentiment
            .into_iter()
            .map(|(k, v)| vec![k, v.map(|v| v.to_string()).unwrap_or_default()]),
    )
}

fn heatmap(ctx: &mut Ctx<'_>) -> Result<()> {
    let sales = ctx.sales()?;
    if sales.is_empty() {
        ctx.warn("no data: no sales in the study window; heatmap is all zeros");
    }
    let dist = attribute_distribution(&sales);
    let mut rows = Vec::new();
    for g in Gender::ALL {
        for s in SkinTone::ALL {
            rows.push(vec![
                g.to_string(),
                s.to_string(),
                dist.count(g, s).to_string(),
                dist.share(g, s).to_string(),
            ]);
        }
    }
    ctx.write_csv("heatmap.csv", &["gender", "skin_tone", "count", "share"], rows)
}

fn pct_or_empty(ctx: &mut Ctx<'_>, name: &str, series: &DailySeries) -> DailySeries {
    match pct_change(series) {
        Ok(PctChange { series, gaps }) => {
            if !gaps.is_empty() {
                ctx.warn(format!("{name}: {} day(s) with a zero previous value left as gaps", gaps.len()));
            }
            series
        }
        Err(MarketError::TooShort(n)) => {
            ctx.warn(format!("{name}: only {n} observed day(s); percent change unavailable"));
            DailySeries::new()
        }
        Err(e) => {
            ctx.warn(format!("{name}: {e}"));
            DailySeries::new()
        }
    }
}

fn regress(ctx: &mut Ctx<'_>) -> Result<()> {
    let sentiment = score(ctx)?;
    let sales = ctx.sales()?;

    let gas = ingest_gas(ctx.open(Dataset::Gas)?).with_context(|| ctx.context(Dataset::Gas))?;
    ctx.write_rejects(Dataset::Gas, &gas.rejects)?;
    let fx = ingest_fx(ctx.open(Dataset::Fx)?).with_context(|| ctx.context(Dataset::Fx))?;
    ctx.write_rejects(Dataset::Fx, &fx.rejects)?;

    let (priced, unpriced): (Vec<SaleRecord>, Vec<SaleRecord>) =
        sales.iter().cloned().partition(|s| fx.series.contains(s.date));
    if !unpriced.is_empty() {
        ctx.warn(format!(
            "{} sale(s) fall on days without an ETH/USD rate and are excluded from daily aggregates",
            unpriced.len()
        ));
    }
    let agg = daily_aggregates(&priced, &fx.series)?;
    let active_pct = pct_or_empty(ctx, "active wallets", &agg.active_wallets);
    let volume_pct = pct_or_empty(ctx, "sales volume", &agg.sales_volume_usd);
    let fx_pct = pct_or_empty(ctx, "ETH/USD", &fx.series);
    let rarity = resolve_rarity(&sales, &InverseComboFrequency);

    let inputs = PanelInputs {
        sentiment: &sentiment,
        active_wallet_pct: &active_pct,
        sales_volume_pct: &volume_pct,
        gas_gwei: &gas.series,
        fx_close: &fx.series,
        fx_pct: &fx_pct,
        rarity: &rarity,
    };
    let panel = match build_panel(&sales, inputs) {
        Ok(p) => p,
        Err(PanelError::Empty(cov)) => {
            let reasons: Vec<String> = cov
                .drop_counts()
                .iter()
                .map(|(r, n)| format!("{}={n}", r.as_str()))
                .collect();
            bail!(
                "no sale has complete daily inputs ({} sales; drops: {})",
                cov.sales,
                reasons.join(", ")
            );
        }
    };
    let mut coverage = vec![
        vec!["sales".to_string(), panel.coverage.sales.to_string()],
        vec!["rows".to_string(), panel.coverage.rows.to_string()],
    ];
    for (reason, n) in panel.coverage.drop_counts() {
        coverage.push(vec![format!("dropped_{}", reason.as_str()), n.to_string()]);
    }
    ctx.write_csv("coverage.csv", &["metric", "value"], coverage)?;
    ctx.write("panel.csv", |w| Ok(write_panel_csv(w, &panel.rows)?))?;

    let screen = stationarity_screen(&panel.rows, ctx.cfg.max_adf_lag);
    let failing = screen.non_stationary();
    if !failing.is_empty() {
        ctx.warn(format!("unit root not rejected at 5% for: {}", failing.join(", ")));
    }
    ctx.write_json("stationarity.json", &screen)?;

    let correlation = match correlation_precheck(&panel.rows, ModelSpec::M4, ctx.cfg.correlation_threshold) {
        Ok(c) => {
            if !c.weakly_correlated {
                let pairs: Vec<String> = c.offending.iter().map(|(a, b, r)| format!("{a}~{b} ({r:.3})")).collect();
                ctx.warn(format!("regressors not weakly correlated: {}", pairs.join(", ")));
            }
            Some(c)
        }
        Err(e) => {
            ctx.warn(format!("correlation pre-check unavailable: {e}"));
            None
        }
    };

    let windows = ctx.cfg.windows()?;
    let suite = run_suite(&panel.rows, &windows);
    for e in &suite.entries {
        if let FitOutcome::Skipped { reason } = &e.outcome {
            ctx.warn(format!("fit {} skipped: {reason}", e.key()));
        }
    }
    let structural = before_after(&suite);
    let doc = SuiteDocument::new(
        &suite,
        ctx.cfg.split_date,
        structural.as_ref().map_err(Clone::clone),
        correlation.as_ref(),
    )?;
    ctx.write_json("suite.json", &doc)?;

    let mut tables = suite_tables(&suite);
    match &structural {
        Ok(r) => {
            tables.push('\n');
            tables.push_str(&structural_change_table(r));
        }
        Err(note) => ctx.warn(format!("structural comparison unavailable: {note}")),
    }
    ctx.write("tables.txt", |w| Ok(w.write_all(tables.as_bytes())?))?;
    let lollipop = lollipop_rows(&suite);
    ctx.write("lollipop.csv", |w| Ok(write_lollipop_csv(w, &lollipop)?))
}

/// Output file names of a full run, for documentation and tests.
pub const ALL_OUTPUTS: [&str; 17] = [
    "coverage.csv",
    "daily_sentiment.csv",
    "daily_volume.csv",
    "fx_rejects.csv",
    "gas_rejects.csv",
    "heatmap.csv",
    "keyword_frequency.csv",
    "keyword_sentiment.csv",
    "keyword_tweets_rejects.csv",
    "lollipop.csv",
    "panel.csv",
    "sales_rejects.csv",
    "sentiment_distribution.csv",
    "stationarity.json",
    "suite.json",
    "tables.txt",
    "tweets_rejects.csv",
];
