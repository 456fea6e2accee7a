//! Sale-level regression rows: dummy encoding, log price and the daily joins.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::econometrics::{adf_test, schwert_max_lag, AdfError, AdfResult};
use crate::market::{Gender, SaleRecord, SkinTone};
use crate::series::DailySeries;

/// One observation. The dependent variable is `log_usd_price`; everything
/// else is a regressor or an identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub date: NaiveDate,
    pub punk_id: u32,
    pub log_usd_price: f64,
    pub x_dark: u8,
    pub x_light: u8,
    pub x_medium: u8,
    pub x_nonhuman: u8,
    pub x_male: u8,
    pub rarity: f64,
    pub active_wallet_pct: f64,
    pub sales_volume_pct: f64,
    pub gas_price_gwei: f64,
    pub fx_pct: f64,
    pub sentiment: f64,
}

/// Panel CSV header; column order matches [`PanelRow`] field order.
pub const PANEL_HEADER: [&str; 14] = [
    "date",
    "punk_id",
    "log_usd_price",
    "x_dark",
    "x_light",
    "x_medium",
    "x_nonhuman",
    "x_male",
    "rarity",
    "active_wallet_pct",
    "sales_volume_pct",
    "gas_price_gwei",
    "fx_pct",
    "sentiment",
];

/// Skin-tone and gender indicators against the Female + Albino base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dummies {
    pub dark: u8,
    pub light: u8,
    pub medium: u8,
    pub nonhuman: u8,
    pub male: u8,
}

pub fn encode_dummies(skin: SkinTone, gender: Gender) -> Dummies {
    let is = |b: bool| u8::from(b);
    Dummies {
        dark: is(skin == SkinTone::Dark),
        light: is(skin == SkinTone::Light),
        medium: is(skin == SkinTone::Medium),
        nonhuman: is(skin.is_nonhuman()),
        male: is(gender == Gender::Male),
    }
}

/// Daily inputs joined onto each sale by calendar day.
#[derive(Debug, Clone, Copy)]
pub struct PanelInputs<'a> {
    pub sentiment: &'a DailySeries,
    pub active_wallet_pct: &'a DailySeries,
    pub sales_volume_pct: &'a DailySeries,
    pub gas_gwei: &'a DailySeries,
    /// ETH/USD close, used for the USD price.
    pub fx_close: &'a DailySeries,
    pub fx_pct: &'a DailySeries,
    pub rarity: &'a BTreeMap<u32, f64>,
}

/// Why a sale produced no row. Checked in declaration order; the first
/// missing input is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DropReason {
    NonPositivePrice,
    Fx,
    Sentiment,
    ActiveWallets,
    SalesVolume,
    Gas,
    FxChange,
    Rarity,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::NonPositivePrice => "non_positive_price",
            DropReason::Fx => "fx",
            DropReason::Sentiment => "sentiment",
            DropReason::ActiveWallets => "active_wallets",
            DropReason::SalesVolume => "sales_volume",
            DropReason::Gas => "gas",
            DropReason::FxChange => "fx_change",
            DropReason::Rarity => "rarity",
        }
    }
}

/// Rows kept versus sales dropped during the join.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoverageReport {
    pub sales: usize,
    pub rows: usize,
    /// `(index into the sales slice, reason)`.
    pub dropped: Vec<(usize, DropReason)>,
}

impl CoverageReport {
    pub fn drop_counts(&self) -> BTreeMap<DropReason, usize> {
        let mut m = BTreeMap::new();
        for (_, r) in &self.dropped {
            *m.entry(*r).or_default() += 1;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PanelError {
    #[error("no sale has complete daily inputs ({} sales dropped)", .0.dropped.len())]
    Empty(CoverageReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub rows: Vec<PanelRow>,
    pub coverage: CoverageReport,
}

/// One row per sale whose date is covered by every daily input.
pub fn build_panel(sales: &[SaleRecord], inputs: PanelInputs<'_>) -> Result<Panel, PanelError> {
    let mut rows = Vec::with_capacity(sales.len());
    let mut coverage = CoverageReport {
        sales: sales.len(),
        ..CoverageReport::default()
    };
    for (idx, sale) in sales.iter().enumerate() {
        match panel_row(sale, &inputs) {
            Ok(row) => rows.push(row),
            Err(reason) => coverage.dropped.push((idx, reason)),
        }
    }
    coverage.rows = rows.len();
    if rows.is_empty() {
        return Err(PanelError::Empty(coverage));
    }
    Ok(Panel { rows, coverage })
}

fn panel_row(sale: &SaleRecord, inputs: &PanelInputs<'_>) -> Result<PanelRow, DropReason> {
    let day = sale.date;
    let need = |s: &DailySeries, reason| s.get(day).ok_or(reason);
    if sale.price_eth.is_nan() || sale.price_eth <= 0.0 {
        return Err(DropReason::NonPositivePrice);
    }
    let fx_close = need(inputs.fx_close, DropReason::Fx)?;
    let sentiment = need(inputs.sentiment, DropReason::Sentiment)?;
    let active_wallet_pct = need(inputs.active_wallet_pct, DropReason::ActiveWallets)?;
    let sales_volume_pct = need(inputs.sales_volume_pct, DropReason::SalesVolume)?;
    let gas_price_gwei = need(inputs.gas_gwei, DropReason::Gas)?;
    let fx_pct = need(inputs.fx_pct, DropReason::FxChange)?;
    let rarity = *inputs.rarity.get(&sale.punk_id).ok_or(DropReason::Rarity)?;
    let d = encode_dummies(sale.skin_tone, sale.gender);
    Ok(PanelRow {
        date: day,
        punk_id: sale.punk_id,
        log_usd_price: (sale.price_eth * fx_close).ln(),
        x_dark: d.dark,
        x_light: d.light,
        x_medium: d.medium,
        x_nonhuman: d.nonhuman,
        x_male: d.male,
        rarity,
        active_wallet_pct,
        sales_volume_pct,
        gas_price_gwei,
        fx_pct,
        sentiment,
    })
}

/// Writes the panel with [`PANEL_HEADER`]; floats use shortest round-trip
/// formatting.
pub fn write_panel_csv<W: Write>(writer: W, rows: &[PanelRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(PANEL_HEADER)?;
    for r in rows {
        w.write_record([
            r.date.to_string(),
            r.punk_id.to_string(),
            r.log_usd_price.to_string(),
            r.x_dark.to_string(),
            r.x_light.to_string(),
            r.x_medium.to_string(),
            r.x_nonhuman.to_string(),
            r.x_male.to_string(),
            r.rarity.to_string(),
            r.active_wallet_pct.to_string(),
            r.sales_volume_pct.to_string(),
            r.gas_price_gwei.to_string(),
            r.fx_pct.to_string(),
            r.sentiment.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Error)]
pub enum PanelCsvError {
    #[error("panel header mismatch: expected `{}`", PANEL_HEADER.join(","))]
    Header,
    #[error("panel row {row}: {source}")]
    Row {
        row: usize,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Reads a panel written by [`write_panel_csv`]. Strict: any bad row fails.
pub fn read_panel_csv<R: Read>(reader: R) -> Result<Vec<PanelRow>, PanelCsvError> {
    let mut r = csv::Reader::from_reader(reader);
    if r.headers()?.iter().ne(PANEL_HEADER.iter().copied()) {
        return Err(PanelCsvError::Header);
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|source| PanelCsvError::Row { row: i + 1, source }))
        .collect()
}

/// Outcome of screening one variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScreenOutcome {
    Tested { result: AdfResult, stationary: bool },
    Skipped { reason: String },
}

/// ADF outcome per variable, in a fixed order. The log price is collapsed
/// to its daily mean; daily controls are taken once per day.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    pub frequency: &'static str,
    pub variables: Vec<(String, ScreenOutcome)>,
}

impl StationarityReport {
    pub fn get(&self, name: &str) -> Option<&ScreenOutcome> {
        self.variables.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    /// Variables that were tested and failed to reject a unit root at 5 %.
    pub fn non_stationary(&self) -> Vec<&str> {
        self.variables
            .iter()
            .filter(|(_, o)| matches!(o, ScreenOutcome::Tested { stationary: false, .. }))
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

type Extract = fn(&PanelRow) -> f64;

pub const SCREENED_VARIABLES: [(&str, Extract); 6] = [
    ("log_usd_price", |r| r.log_usd_price),
    ("active_wallet_pct", |r| r.active_wallet_pct),
    ("sales_volume_pct", |r| r.sales_volume_pct),
    ("gas_price_gwei", |r| r.gas_price_gwei),
    ("fx_pct", |r| r.fx_pct),
    ("sentiment", |r| r.sentiment),
];

/// Screens one series; used for each panel variable.
pub fn screen_series(series: &[f64], max_lag: Option<usize>) -> ScreenOutcome {
    let lag = max_lag.unwrap_or_else(|| schwert_max_lag(series.len()));
    match adf_test(series, lag) {
        Ok(result) => ScreenOutcome::Tested {
            stationary: result.is_stationary(),
            result,
        },
        Err(AdfError::ZeroVariance) => ScreenOutcome::Skipped {
            reason: "zero variance".into(),
        },
        Err(AdfError::TooShort { len }) => ScreenOutcome::Skipped {
            reason: format!("too short ({len} days)"),
        },
        Err(e) => ScreenOutcome::Skipped {
            reason: e.to_string(),
        },
    }
}

/// Runs ADF on the daily-collapsed panel variables. `max_lag = None` uses
/// Schwert's rule per series.
pub fn stationarity_screen(panel: &[PanelRow], max_lag: Option<usize>) -> StationarityReport {
    let variables = SCREENED_VARIABLES
        .iter()
        .map(|(name, extract)| {
            let mut daily: BTreeMap<NaiveDate, (f64, u32)> = BTreeMap::new();
            for r in panel {
                let e = daily.entry(r.date).or_default();
                e.0 += extract(r);
                e.1 += 1;
            }
            let series: Vec<f64> = daily.values().map(|(s, n)| s / *n as f64).collect();
            (name.to_string(), screen_series(&series, max_lag))
        })
        .collect();
    StationarityReport {
        frequency: "daily mean",
        variables,
    }
}
