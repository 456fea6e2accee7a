//! Sentiment-augmented hedonic pricing for CryptoPunk sales.
//!
//! The crate is organised as a pipeline:
//!
//! * [`sentiment`] scores short social-media texts with a VADER-compatible
//!   lexicon and rule engine.
//! * [`tweets`] ingests tweet corpora and derives daily and per-keyword
//!   aggregates.
//! * [`market`] ingests sales, gas prices and ETH/USD rates and derives daily
//!   market controls and attribute statistics.
//! * [`panel`] joins everything into sale-level regression rows.
//! * [`econometrics`] holds the numerical core (OLS, ADF, Pearson).
//! * [`study`] runs the nested-model / time-window grid and compares windows.
//! * [`report`] formats tables and plot-ready rows.
//! * [`source`] abstracts where input tables are read from.
//! * [`synthetic`] generates seeded panels and input sets with known structure.

pub mod econometrics;
pub mod ingest;
pub mod market;
pub mod panel;
pub mod report;
pub mod sentiment;
pub mod series;
pub mod source;
pub mod study;
pub mod synthetic;
pub mod tweets;

pub use econometrics::{AdfResult, OlsFit};
pub use ingest::{IngestError, Ingested, Reject};
pub use market::{Gender, NonhumanKind, SaleRecord, SkinTone};
pub use panel::PanelRow;
pub use sentiment::{SentimentLexicon, SentimentScore};
pub use series::{DailySeries, DateRange};
pub use study::{ModelSpec, Regressor, WindowSpec};
pub use tweets::{KeywordFilter, Tweet};
