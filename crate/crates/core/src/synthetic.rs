//! Seeded synthetic data: a small end-to-end "world" of input CSVs, panels
//! with known generating coefficients, and AR(1) / random-walk series.
//!
//! Everything here is deterministic in the seed (ChaCha8).

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::market::{Gender, NonhumanKind, SkinTone};
use crate::panel::{encode_dummies, PanelRow};
use crate::series::DateRange;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn std_normal() -> Normal<f64> {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// `y[t] = phi * y[t-1] + e[t]`, `y[0] = e[0]`, unit Gaussian shocks.
pub fn ar1(seed: u64, n: usize, phi: f64) -> Vec<f64> {
    let mut r = rng(seed);
    let noise = std_normal();
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for _ in 0..n {
        prev = phi * prev + noise.sample(&mut r);
        out.push(prev);
    }
    out
}

/// Cumulative sum of unit Gaussian shocks.
pub fn random_walk(seed: u64, n: usize) -> Vec<f64> {
    ar1(seed, n, 1.0)
}

/// Generating coefficients for [`synthetic_panel`], intercept first, then
/// the Model 4 regressors in table order.
pub const GENERATING_COEFFICIENTS: [f64; 12] = [
    5.7,   // intercept
    0.3,   // dark
    0.2,   // light
    0.25,  // medium
    3.0,   // nonhuman
    0.01,  // rarity
    -0.3,  // male
    0.5,   // active wallets (%)
    0.4,   // sales volume (%)
    0.002, // gas price
    1.0,   // ETH/USD (%)
    2.0,   // sentiment
];

fn draw_skin(r: &mut ChaCha8Rng) -> SkinTone {
    let u: f64 = r.random();
    match u {
        u if u < 0.20 => SkinTone::Dark,
        u if u < 0.50 => SkinTone::Light,
        u if u < 0.80 => SkinTone::Medium,
        u if u < 0.95 => SkinTone::Albino,
        u if u < 0.97 => SkinTone::Nonhuman(NonhumanKind::Zombie),
        u if u < 0.99 => SkinTone::Nonhuman(NonhumanKind::Ape),
        _ => SkinTone::Nonhuman(NonhumanKind::Alien),
    }
}

fn draw_gender(r: &mut ChaCha8Rng) -> Gender {
    if r.random_bool(0.65) {
        Gender::Male
    } else {
        Gender::Female
    }
}

/// `n` panel rows spread over `range` whose log price follows
/// `coefficients` (see [`GENERATING_COEFFICIENTS`]) plus `N(0, sigma²)`
/// noise. Regressors are drawn independently of each other.
pub fn synthetic_panel(
    seed: u64,
    n: usize,
    coefficients: &[f64; 12],
    sigma: f64,
    range: DateRange,
) -> Vec<PanelRow> {
    let mut r = rng(seed);
    let noise = std_normal();
    let days = range.days();
    (0..n)
        .map(|i| {
            let d = encode_dummies(draw_skin(&mut r), draw_gender(&mut r));
            let mut row = PanelRow {
                date: range.start + Duration::days(r.random_range(0..days)),
                punk_id: (i % 10_000) as u32,
                log_usd_price: 0.0,
                x_dark: d.dark,
                x_light: d.light,
                x_medium: d.medium,
                x_nonhuman: d.nonhuman,
                x_male: d.male,
                rarity: r.random_range(1.0..50.0),
                active_wallet_pct: 0.2 * noise.sample(&mut r),
                sales_volume_pct: 0.5 * noise.sample(&mut r),
                gas_price_gwei: r.random_range(20.0..200.0),
                fx_pct: 0.04 * noise.sample(&mut r),
                sentiment: r.random_range(-0.2..0.6),
            };
            let x = [
                1.0,
                row.x_dark.into(),
                row.x_light.into(),
                row.x_medium.into(),
                row.x_nonhuman.into(),
                row.rarity,
                row.x_male.into(),
                row.active_wallet_pct,
                row.sales_volume_pct,
                row.gas_price_gwei,
                row.fx_pct,
                row.sentiment,
            ];
            let mean: f64 = x.iter().zip(coefficients).map(|(a, b)| a * b).sum();
            row.log_usd_price = mean + sigma * noise.sample(&mut r);
            row
        })
        .collect()
}

/// Sizes of a synthetic world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldConfig {
    pub seed: u64,
    pub range: DateRange,
    pub punks: u32,
    pub sales_per_day: usize,
    pub tweets_per_day: usize,
    pub keyword_tweets_per_day: usize,
    pub wallets: usize,
}

impl Default for WorldConfig {
    /// One year straddling the default 2021 split.
    fn default() -> Self {
        Self {
            seed: 2021,
            range: DateRange::new(
                NaiveDate::from_ymd_opt(2020, 7, 1).expect("valid date"),
                NaiveDate::from_ymd_opt(2021, 6, 30).expect("valid date"),
            )
            .expect("ordered"),
            punks: 2_000,
            sales_per_day: 4,
            tweets_per_day: 12,
            keyword_tweets_per_day: 3,
            wallets: 400,
        }
    }
}

/// Input CSVs in the formats the ingesters expect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticWorld {
    pub tweets_csv: String,
    pub keyword_tweets_csv: String,
    pub sales_csv: String,
    pub gas_csv: String,
    pub fx_csv: String,
}

/// File names written by [`SyntheticWorld::write_to`].
pub const WORLD_FILES: [&str; 5] = [
    "tweets.csv",
    "keyword_tweets.csv",
    "sales.csv",
    "gas.csv",
    "fx.csv",
];

impl SyntheticWorld {
    /// Writes the five CSVs into `dir` and returns their paths in
    /// [`WORLD_FILES`] order.
    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let bodies = [
            &self.tweets_csv,
            &self.keyword_tweets_csv,
            &self.sales_csv,
            &self.gas_csv,
            &self.fx_csv,
        ];
        WORLD_FILES
            .iter()
            .zip(bodies)
            .map(|(name, body)| {
                let p = dir.join(name);
                fs::write(&p, body)?;
                Ok(p)
            })
            .collect()
    }
}

const POSITIVE: [&str; 8] = [
    "love this punk, what a great buy",
    "amazing sale today, so happy",
    "the floor looks strong and healthy",
    "best collection ever, wonderful art",
    "excited to join the community! great people",
    "nice flip, feeling good about this",
    "beautiful pixels, really impressive",
    "congrats on the win, well deserved",
];
const NEGATIVE: [&str; 6] = [
    "terrible dump, awful market",
    "hate these gas fees, so bad",
    "sad to see the floor crash",
    "worst week ever, lost money",
    "scam bids everywhere, disgusting",
    "this is a horrible mess",
];
const NEUTRAL: [&str; 5] = [
    "just listed a punk",
    "floor at 80 eth right now",
    "transfer went through",
    "checking the sales history",
    "new bid placed on the board",
];
const KEYWORD_TEMPLATES: [&str; 6] = [
    "the {} punks look great",
    "bought a {} punk today, love it",
    "{} punk floor is up, nice",
    "another {} punk sold",
    "thinking about a {} punk",
    "{} ones are so cool",
];
/// Relative frequencies of the ethics keywords in keyword tweets.
const KEYWORD_WEIGHTS: [(&str, u32); 9] = [
    ("male", 30),
    ("female", 8),
    ("dark", 6),
    ("light", 5),
    ("medium", 5),
    ("albino", 4),
    ("alien", 3),
    ("ape", 4),
    ("zombie", 3),
];

fn pick<'a, T>(r: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[r.random_range(0..items.len())]
}

fn weighted_keyword(r: &mut ChaCha8Rng) -> &'static str {
    let total: u32 = KEYWORD_WEIGHTS.iter().map(|(_, w)| w).sum();
    let mut u = r.random_range(0..total);
    for (k, w) in KEYWORD_WEIGHTS {
        if u < w {
            return k;
        }
        u -= w;
    }
    unreachable!("weights cover the draw")
}

fn timestamp(r: &mut ChaCha8Rng, day: NaiveDate) -> String {
    let secs: u32 = r.random_range(0..86_400);
    format!(
        "{day}T{:02}:{:02}:{:02}Z",
        secs / 3600,
        (secs / 60) % 60,
        secs % 60
    )
}

/// Quotes a CSV field if it contains a delimiter or quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Generates a synthetic world. A latent daily mood drives both the tone
/// of the day's tweets and the day's prices, so the sentiment coefficient
/// is positive by construction.
pub fn synthetic_world(cfg: &WorldConfig) -> SyntheticWorld {
    let mut r = rng(cfg.seed);
    let noise = std_normal();
    let days: Vec<NaiveDate> = cfg.range.iter_days().collect();

    let punks: Vec<(SkinTone, Gender)> = (0..cfg.punks)
        .map(|_| (draw_skin(&mut r), draw_gender(&mut r)))
        .collect();
    let wallets: Vec<String> = (0..cfg.wallets)
        .map(|_| format!("0x{:016x}{:016x}", r.random::<u64>(), r.random::<u64>()))
        .collect();

    let mut mood = 0.0f64;
    let mut fx = 350.0f64;
    let mut tweets = String::from("id,timestamp,text,lang\n");
    let mut keyword_tweets = String::from("id,timestamp,text,lang\n");
    let mut sales = String::from("punk_id,date,price_eth,skin_tone,gender,buyer,seller\n");
    let mut gas = String::from("date,gwei_avg\n");
    let mut fx_csv = String::from("date,eth_usd_close\n");
    let mut tweet_id = 1u64;

    for &day in &days {
        mood = (0.7 * mood + 0.3 * noise.sample(&mut r)).clamp(-0.9, 0.9);
        fx *= (0.03 * noise.sample(&mut r)).exp();
        let gwei = 60.0 * (0.3 * noise.sample(&mut r)).exp();
        let _ = writeln!(gas, "{day},{gwei}");
        let _ = writeln!(fx_csv, "{day},{fx}");

        let p_pos = 0.45 + 0.3 * mood;
        let p_neg = 0.2 - 0.15 * mood;
        for _ in 0..cfg.tweets_per_day {
            let u: f64 = r.random();
            let text = if u < p_pos {
                pick(&mut r, &POSITIVE)
            } else if u < p_pos + p_neg {
                pick(&mut r, &NEGATIVE)
            } else {
                pick(&mut r, &NEUTRAL)
            };
            let lang = if r.random_bool(0.05) { "es" } else { "en" };
            let ts = timestamp(&mut r, day);
            let _ = writeln!(tweets, "{tweet_id},{ts},{},{lang}", csv_field(text));
            tweet_id += 1;
        }
        for _ in 0..cfg.keyword_tweets_per_day {
            let keyword = weighted_keyword(&mut r);
            let text = pick(&mut r, &KEYWORD_TEMPLATES).replace("{}", keyword);
            let ts = timestamp(&mut r, day);
            let _ = writeln!(keyword_tweets, "{tweet_id},{ts},{},en", csv_field(&text));
            tweet_id += 1;
        }

        for _ in 0..cfg.sales_per_day {
            let id = r.random_range(0..cfg.punks);
            let (skin, gender) = punks[id as usize];
            let d = encode_dummies(skin, gender);
            let log_usd = 9.0
                + 0.3 * f64::from(d.dark)
                + 0.2 * f64::from(d.light)
                + 0.25 * f64::from(d.medium)
                + 2.5 * f64::from(d.nonhuman)
                - 0.3 * f64::from(d.male)
                + 1.5 * mood
                + 0.4 * noise.sample(&mut r);
            let price_eth = log_usd.exp() / fx;
            let buyer = pick(&mut r, &wallets);
            let seller = pick(&mut r, &wallets);
            let _ = writeln!(sales, "{id},{day},{price_eth},{skin},{gender},{buyer},{seller}");
        }
    }

    SyntheticWorld {
        tweets_csv: tweets,
        keyword_tweets_csv: keyword_tweets,
        sales_csv: sales,
        gas_csv: gas,
        fx_csv,
    }
}
