use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use punk_hedonics::source::{DataSource, DisabledTransport, RemoteSource};
use punk_hedonics_cli::{run, write_synthetic_fixture, Command, RunConfig};

/// Sentiment-augmented hedonic pricing pipeline for CryptoPunk sales.
#[derive(Parser, Debug)]
#[command(name = "punk-hedonics", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Daily tweet sentiment, its sign distribution and tweet volume.
    Score(RunArgs),
    /// Keyword frequencies and per-keyword sentiment.
    Keywords(RunArgs),
    /// Panel, stationarity screen, regression suite, tables and plot data.
    Regress(RunArgs),
    /// Gender x skin-tone sale counts and shares.
    Heatmap(RunArgs),
    /// Every stage above.
    All(RunArgs),
    /// Write a seeded synthetic input set and a config that points at it.
    Synth {
        /// Directory for the generated CSVs and config.
        dir: PathBuf,
        #[arg(long, default_value_t = 2021)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Key-value config file; flags override its values.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Prefix for relative input paths.
    #[arg(long, env = "PUNK_HEDONICS_DATA_DIR")]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    tweets: Option<PathBuf>,
    #[arg(long)]
    keyword_tweets: Option<PathBuf>,
    #[arg(long)]
    sales: Option<PathBuf>,
    #[arg(long)]
    gas: Option<PathBuf>,
    #[arg(long)]
    fx: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// First day of the study window (YYYY-MM-DD).
    #[arg(long)]
    study_start: Option<String>,
    /// Last day of the study window (YYYY-MM-DD).
    #[arg(long)]
    study_end: Option<String>,
    /// First day of the after window (YYYY-MM-DD).
    #[arg(long)]
    split_date: Option<String>,
    #[arg(long)]
    correlation_threshold: Option<String>,
    #[arg(long)]
    max_adf_lag: Option<String>,
    #[arg(long)]
    language: Option<String>,
    /// Comma-separated keyword list.
    #[arg(long)]
    keywords: Option<String>,
    /// Read inputs from `<URL>/<dataset>.csv` instead of local files. The
    /// built-in transport refuses all requests; this exists for embedding.
    #[arg(long)]
    remote: Option<String>,
}

impl RunArgs {
    fn into_config(self) -> Result<(RunConfig, Option<String>)> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("out_dir", self.out_dir.map(|p| p.display().to_string())),
            ("tweets", self.tweets.map(|p| p.display().to_string())),
            ("keyword_tweets", self.keyword_tweets.map(|p| p.display().to_string())),
            ("sales", self.sales.map(|p| p.display().to_string())),
            ("gas", self.gas.map(|p| p.display().to_string())),
            ("fx", self.fx.map(|p| p.display().to_string())),
            ("lexicon", self.lexicon.map(|p| p.display().to_string())),
            ("study_start", self.study_start),
            ("study_end", self.study_end),
            ("split_date", self.split_date),
            ("correlation_threshold", self.correlation_threshold),
            ("max_adf_lag", self.max_adf_lag),
            ("language", self.language),
            ("keywords", self.keywords),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        if let Some(dir) = &self.data_dir {
            cfg.resolve_paths(dir);
        }
        Ok((cfg, self.remote))
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (command, args) = match cli.command {
        Cmd::Synth { dir, seed } => {
            let config = write_synthetic_fixture(&dir, seed)?;
            println!("{}", config.display());
            return Ok(());
        }
        Cmd::Score(a) => (Command::Score, a),
        Cmd::Keywords(a) => (Command::Keywords, a),
        Cmd::Regress(a) => (Command::Regress, a),
        Cmd::Heatmap(a) => (Command::Heatmap, a),
        Cmd::All(a) => (Command::All, a),
    };
    let (cfg, remote) = args.into_config()?;
    let file_source;
    let remote_source;
    let source: &dyn DataSource = match remote {
        Some(url) => {
            remote_source = RemoteSource::new(url, DisabledTransport);
            &remote_source
        }
        None => {
            file_source = cfg.file_source();
            &file_source
        }
    };
    let outcome = run(command, &cfg, source)?;
    for w in &outcome.warnings {
        warn!("{w}");
    }
    for f in &outcome.files {
        info!("wrote {}", f.display());
    }
    println!(
        "{} file(s) written to {} ({} warning(s))",
        outcome.files.len(),
        cfg.out_dir.display(),
        outcome.warnings.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
