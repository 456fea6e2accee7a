//! CryptoPunk sales, gas prices and ETH/USD rates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{field, parse_date, parse_f64, CsvTable, IngestError, Ingested};
use crate::series::DailySeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Male, Gender::Female];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NonhumanKind {
    Alien,
    Ape,
    Zombie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SkinTone {
    Dark,
    Light,
    Medium,
    Albino,
    Nonhuman(NonhumanKind),
}

impl SkinTone {
    /// Heatmap column order.
    pub const ALL: [SkinTone; 7] = [
        SkinTone::Dark,
        SkinTone::Light,
        SkinTone::Medium,
        SkinTone::Albino,
        SkinTone::Nonhuman(NonhumanKind::Alien),
        SkinTone::Nonhuman(NonhumanKind::Ape),
        SkinTone::Nonhuman(NonhumanKind::Zombie),
    ];

    pub fn is_nonhuman(self) -> bool {
        matches!(self, SkinTone::Nonhuman(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} label `{label}`")]
pub struct LabelError {
    pub kind: &'static str,
    pub label: String,
}

impl FromStr for Gender {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "male" => Ok(Gender::Male),
            "female" => Ok(Gender::Female),
            _ => Err(LabelError {
                kind: "gender",
                label: s.to_string(),
            }),
        }
    }
}

impl FromStr for SkinTone {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "dark" => SkinTone::Dark,
            "light" => SkinTone::Light,
            "medium" => SkinTone::Medium,
            "albino" => SkinTone::Albino,
            "alien" => SkinTone::Nonhuman(NonhumanKind::Alien),
            "ape" => SkinTone::Nonhuman(NonhumanKind::Ape),
            "zombie" => SkinTone::Nonhuman(NonhumanKind::Zombie),
            _ => {
                return Err(LabelError {
                    kind: "skin tone",
                    label: s.to_string(),
                })
            }
        })
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Male => "Male",
            Gender::Female => "Female",
        })
    }
}

impl fmt::Display for SkinTone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkinTone::Dark => "Dark",
            SkinTone::Light => "Light",
            SkinTone::Medium => "Medium",
            SkinTone::Albino => "Albino",
            SkinTone::Nonhuman(NonhumanKind::Alien) => "Alien",
            SkinTone::Nonhuman(NonhumanKind::Ape) => "Ape",
            SkinTone::Nonhuman(NonhumanKind::Zombie) => "Zombie",
        })
    }
}

/// One sale. `rarity` is set only when the input file carries a rarity column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaleRecord {
    pub punk_id: u32,
    pub date: NaiveDate,
    pub price_eth: f64,
    pub skin_tone: SkinTone,
    pub gender: Gender,
    pub buyer_wallet: String,
    pub seller_wallet: String,
    pub rarity: Option<f64>,
}

/// Reads `punk_id,date,price_eth,skin_tone,gender,buyer,seller[,rarity]`.
/// Extra columns are ignored.
pub fn ingest_sales<R: Read>(source: R) -> Result<Ingested<SaleRecord>, IngestError> {
    let mut table = CsvTable::open(source, "sales")?;
    let cols = [
        table.require("punk_id")?,
        table.require("date")?,
        table.require("price_eth")?,
        table.require("skin_tone")?,
        table.require("gender")?,
        table.require("buyer")?,
        table.require("seller")?,
    ];
    let rarity_col = table.optional("rarity");

    let mut out = Ingested::new();
    for row in table.rows() {
        let (row_no, rec) = match row {
            Ok(r) => r,
            Err((row_no, msg)) => {
                out.reject(row_no, msg);
                continue;
            }
        };
        let parsed = (|| {
            let punk_id = field(&rec, cols[0], "punk_id")?;
            let punk_id: u32 = punk_id
                .parse()
                .map_err(|_| format!("bad punk_id `{punk_id}`"))?;
            let date = parse_date(field(&rec, cols[1], "date")?)?;
            let price_eth = parse_f64(field(&rec, cols[2], "price_eth")?, "price_eth")?;
            if price_eth < 0.0 {
                return Err(format!("negative price_eth {price_eth}"));
            }
            let skin_tone: SkinTone = field(&rec, cols[3], "skin_tone")?
                .parse()
                .map_err(|e: LabelError| e.to_string())?;
            let gender: Gender = field(&rec, cols[4], "gender")?
                .parse()
                .map_err(|e: LabelError| e.to_string())?;
            let buyer_wallet = field(&rec, cols[5], "buyer")?.to_string();
            let seller_wallet = field(&rec, cols[6], "seller")?.to_string();
            let rarity = match rarity_col.and_then(|c| rec.get(c)).map(str::trim) {
                None | Some("") => None,
                Some(raw) => {
                    let r = parse_f64(raw, "rarity")?;
                    if r <= 0.0 {
                        return Err(format!("non-positive rarity {r}"));
                    }
                    Some(r)
                }
            };
            Ok(SaleRecord {
                punk_id,
                date,
                price_eth,
                skin_tone,
                gender,
                buyer_wallet,
                seller_wallet,
                rarity,
            })
        })();
        match parsed {
            Ok(s) => out.records.push(s),
            Err(reason) => out.reject(row_no, reason),
        }
    }
    Ok(out)
}

fn ingest_positive_daily<R: Read>(
    source: R,
    source_name: &'static str,
    value_column: &'static str,
) -> Result<Ingested<(NaiveDate, f64)>, IngestError> {
    let mut table = CsvTable::open(source, source_name)?;
    let date_col = table.require("date")?;
    let value_col = table.require(value_column)?;
    let mut out = Ingested::new();
    let mut seen = BTreeSet::new();
    for row in table.rows() {
        let (row_no, rec) = match row {
            Ok(r) => r,
            Err((row_no, msg)) => {
                out.reject(row_no, msg);
                continue;
            }
        };
        let parsed = (|| {
            let date = parse_date(field(&rec, date_col, "date")?)?;
            let v = parse_f64(field(&rec, value_col, value_column)?, value_column)?;
            if v <= 0.0 {
                return Err(format!("non-positive {value_column} {v}"));
            }
            if !seen.insert(date) {
                return Err(format!("duplicate date {date}"));
            }
            Ok((date, v))
        })();
        match parsed {
            Ok(p) => out.records.push(p),
            Err(reason) => out.reject(row_no, reason),
        }
    }
    Ok(out)
}

/// Daily series plus the rows that failed validation.
#[derive(Debug, Clone, Default)]
pub struct SeriesIngest {
    pub series: DailySeries,
    pub rejects: Vec<crate::Reject>,
}

impl From<Ingested<(NaiveDate, f64)>> for SeriesIngest {
    fn from(i: Ingested<(NaiveDate, f64)>) -> Self {
        Self {
            series: i.records.into_iter().collect(),
            rejects: i.rejects,
        }
    }
}

/// Reads `date,gwei_avg` (mean gas price in gwei, > 0).
pub fn ingest_gas<R: Read>(source: R) -> Result<SeriesIngest, IngestError> {
    ingest_positive_daily(source, "gas", "gwei_avg").map(Into::into)
}

/// Reads `date,eth_usd_close` (USD per ETH, > 0).
pub fn ingest_fx<R: Read>(source: R) -> Result<SeriesIngest, IngestError> {
    ingest_positive_daily(source, "fx", "eth_usd_close").map(Into::into)
}

/// Sale counts per (gender, skin tone) cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttributeDistribution {
    pub counts: BTreeMap<(Gender, SkinTone), u64>,
    pub total: u64,
}

impl AttributeDistribution {
    pub fn count(&self, gender: Gender, skin: SkinTone) -> u64 {
        self.counts.get(&(gender, skin)).copied().unwrap_or(0)
    }

    fn share_of(&self, n: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            n as f64 / self.total as f64
        }
    }

    /// Fraction of all sales in one cell.
    pub fn share(&self, gender: Gender, skin: SkinTone) -> f64 {
        self.share_of(self.count(gender, skin))
    }

    pub fn gender_share(&self, gender: Gender) -> f64 {
        self.share_of(SkinTone::ALL.iter().map(|s| self.count(gender, *s)).sum())
    }

    pub fn skin_share(&self, skin: SkinTone) -> f64 {
        self.share_of(Gender::ALL.iter().map(|g| self.count(*g, skin)).sum())
    }

    /// Share of the three nonhuman types combined.
    pub fn nonhuman_share(&self) -> f64 {
        self.share_of(
            self.counts
                .iter()
                .filter(|((_, s), _)| s.is_nonhuman())
                .map(|(_, c)| c)
                .sum(),
        )
    }
}

/// Rounds a fraction to a percentage with one decimal place.
pub fn percent_1dp(fraction: f64) -> f64 {
    (fraction * 1000.0).round() / 10.0
}

pub fn attribute_distribution(sales: &[SaleRecord]) -> AttributeDistribution {
    let mut dist = AttributeDistribution::default();
    for s in sales {
        *dist.counts.entry((s.gender, s.skin_tone)).or_default() += 1;
        dist.total += 1;
    }
    dist
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error("no ETH/USD rate for {} sale date(s): {}", .0.len(), list_dates(.0))]
    UncoveredDates(Vec<NaiveDate>),
    #[error("percent change needs at least 2 observations, got {0}")]
    TooShort(usize),
}

fn list_dates(dates: &[NaiveDate]) -> String {
    let shown: Vec<String> = dates.iter().take(10).map(|d| d.to_string()).collect();
    let more = dates.len().saturating_sub(10);
    if more > 0 {
        format!("{} (+{more} more)", shown.join(", "))
    } else {
        shown.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DailyAggregates {
    /// Distinct buyer or seller wallets per day.
    pub active_wallets: DailySeries,
    /// Sum of `price_eth * fx(day)` per day.
    pub sales_volume_usd: DailySeries,
}

/// Daily active wallets (buyers ∪ sellers) and USD sales volume.
pub fn daily_aggregates(
    sales: &[SaleRecord],
    fx: &DailySeries,
) -> Result<DailyAggregates, MarketError> {
    let uncovered: BTreeSet<NaiveDate> = sales
        .iter()
        .map(|s| s.date)
        .filter(|d| !fx.contains(*d))
        .collect();
    if !uncovered.is_empty() {
        return Err(MarketError::UncoveredDates(uncovered.into_iter().collect()));
    }

    let mut wallets: BTreeMap<NaiveDate, BTreeSet<&str>> = BTreeMap::new();
    let mut volume: BTreeMap<NaiveDate, f64> = BTreeMap::new();
    for s in sales {
        let day = wallets.entry(s.date).or_default();
        day.insert(&s.buyer_wallet);
        day.insert(&s.seller_wallet);
        let rate = fx.get(s.date).expect("coverage checked above");
        *volume.entry(s.date).or_default() += s.price_eth * rate;
    }
    Ok(DailyAggregates {
        active_wallets: wallets
            .into_iter()
            .map(|(d, w)| (d, w.len() as f64))
            .collect(),
        sales_volume_usd: volume.into_iter().collect(),
    })
}

/// Day-over-day relative change and the dates dropped for a zero denominator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PctChange {
    pub series: DailySeries,
    pub gaps: Vec<NaiveDate>,
}

/// `(v[i] - v[i-1]) / v[i-1]` over consecutive observed dates, as a fraction.
/// The first date has no predecessor and is dropped.
pub fn pct_change(series: &DailySeries) -> Result<PctChange, MarketError> {
    if series.len() < 2 {
        return Err(MarketError::TooShort(series.len()));
    }
    let mut out = PctChange::default();
    let obs: Vec<(NaiveDate, f64)> = series.iter().collect();
    for pair in obs.windows(2) {
        let ((_, prev), (date, cur)) = (pair[0], pair[1]);
        if prev == 0.0 {
            out.gaps.push(date);
        } else {
            out.series.insert(date, (cur - prev) / prev);
        }
    }
    Ok(out)
}

/// Assigns each punk a positive rarity score.
pub trait RarityStrategy {
    fn score(&self, sales: &[SaleRecord]) -> BTreeMap<u32, f64>;
}

/// `N / count(combo)`, where `N` is the number of distinct punks and `count`
/// the number of distinct punks sharing the (gender, skin tone) combination.
/// A punk's attributes are taken from its first sale.
#[derive(Debug, Clone, Copy, Default)]
pub struct InverseComboFrequency;

impl RarityStrategy for InverseComboFrequency {
    fn score(&self, sales: &[SaleRecord]) -> BTreeMap<u32, f64> {
        let mut combo_of: HashMap<u32, (Gender, SkinTone)> = HashMap::new();
        for s in sales {
            combo_of.entry(s.punk_id).or_insert((s.gender, s.skin_tone));
        }
        let mut combo_counts: HashMap<(Gender, SkinTone), u64> = HashMap::new();
        for combo in combo_of.values() {
            *combo_counts.entry(*combo).or_default() += 1;
        }
        let n = combo_of.len() as f64;
        combo_of
            .into_iter()
            .map(|(id, combo)| (id, n / combo_counts[&combo] as f64))
            .collect()
    }
}

/// Rarity from [`InverseComboFrequency`].
pub fn rarity_score(sales: &[SaleRecord]) -> BTreeMap<u32, f64> {
    InverseComboFrequency.score(sales)
}

/// Rarity per punk, preferring a value supplied in the sales file over the
/// strategy's computed one.
pub fn resolve_rarity(sales: &[SaleRecord], strategy: &dyn RarityStrategy) -> BTreeMap<u32, f64> {
    let mut out = strategy.score(sales);
    for s in sales {
        if let Some(r) = s.rarity {
            out.insert(s.punk_id, r);
        }
    }
    out
}
