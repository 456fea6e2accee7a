use std::collections::BTreeMap;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use punk_hedonics::market::{attribute_distribution, daily_aggregates, pct_change, rarity_score};
use punk_hedonics::panel::{build_panel, read_panel_csv, stationarity_screen, write_panel_csv, PanelInputs, ScreenOutcome};
use punk_hedonics::sentiment::score_text;
use punk_hedonics::synthetic::{ar1, random_walk};
use punk_hedonics::tweets::{
    daily_mean_sentiment, daily_volume, keyword_frequency, keyword_sentiment,
};
use punk_hedonics::{DailySeries, Gender, KeywordFilter, NonhumanKind, PanelRow, SaleRecord, SentimentLexicon, SkinTone, Tweet};

fn day(offset: i64) -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 3, 1).unwrap() + Duration::days(offset)
}

fn tweet(id: usize, offset: i64, hour: u32, text: &str) -> Tweet {
    let d = day(offset);
    Tweet {
        id: id.to_string(),
        timestamp: Utc.from_utc_datetime(&d.and_hms_opt(hour, 15, 0).unwrap()),
        text: text.to_string(),
        language: "en".into(),
    }
}

const TEXTS: [&str; 10] = [
    "great sale today",
    "terrible gas fees",
    "just listed a punk",
    "love this collection!",
    "not good at all",
    "the floor is fine",
    "awful dump, so sad",
    "happy with my ape",
    "nothing to report",
    "best punk ever",
];

#[test]
fn daily_means_match_group_by_oracle() {
    let lexicon = SentimentLexicon::vader();
    let corpus: Vec<Tweet> = TEXTS
        .iter()
        .enumerate()
        .map(|(i, t)| tweet(i, (i % 3) as i64, (i * 2) as u32, t))
        .collect();
    let got = daily_mean_sentiment(&corpus, &lexicon);

    let mut oracle: Vec<(NaiveDate, f64)> = Vec::new();
    for offset in 0..3 {
        let scores: Vec<f64> = corpus
            .iter()
            .filter(|t| t.timestamp.date_naive() == day(offset))
            .map(|t| score_text(&lexicon, &t.text).compound)
            .collect();
        oracle.push((day(offset), scores.iter().sum::<f64>() / scores.len() as f64));
    }
    assert_eq!(got.len(), 3);
    for (d, v) in oracle {
        assert!((got.get(d).unwrap() - v).abs() < 1e-12);
        assert!((-1.0..=1.0).contains(&v));
    }
    assert_eq!(daily_volume(&corpus).sum(), 10.0);
}

#[test]
fn keyword_sentiment_matches_filter_then_mean_oracle() {
    let lexicon = SentimentLexicon::vader();
    let filter = KeywordFilter::new(["male", "ape"]).unwrap();
    let texts = [
        "the male punks look great",
        "female punk, love it",
        "ape floor is up, nice",
        "Male and APE together",
        "terrible ape sale",
        "nothing relevant",
        "malestrom is not a keyword",
        "male male male",
        "a sad ape",
        "hello world",
        "MALE punk sold",
        "ape-like art, awesome",
        "female ape",
        "the market",
        "male!",
        "bad male punk",
        "apes are different",
        "zombie",
        "good",
        "ape",
    ];
    let corpus: Vec<Tweet> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| tweet(i, 0, 1, t))
        .collect();
    let got = keyword_sentiment(&corpus, &filter, &lexicon);
    let freq = keyword_frequency(&corpus, &filter);

    for (k, (name, value)) in filter.keywords().iter().zip(&got) {
        assert_eq!(k, name);
        let matching: Vec<f64> = corpus
            .iter()
            .filter(|t| {
                t.text
                    .to_lowercase()
                    .split(|c: char| !c.is_alphanumeric())
                    .any(|w| w == k)
            })
            .map(|t| score_text(&lexicon, &t.text).compound)
            .collect();
        let mean = matching.iter().sum::<f64>() / matching.len() as f64;
        assert!((value.unwrap() - mean).abs() < 1e-12, "{k}");
    }
    assert_eq!(freq, vec![("male".to_string(), 8), ("ape".to_string(), 7)]);
}

fn sale(punk_id: u32, offset: i64, price: f64, skin: SkinTone, gender: Gender, buyer: &str, seller: &str) -> SaleRecord {
    SaleRecord {
        punk_id,
        date: day(offset),
        price_eth: price,
        skin_tone: skin,
        gender,
        buyer_wallet: buyer.into(),
        seller_wallet: seller.into(),
        rarity: None,
    }
}

fn random_sales(seed: u64, n: usize, days: i64) -> Vec<SaleRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let skin = SkinTone::ALL[rng.random_range(0..SkinTone::ALL.len())];
            let gender = Gender::ALL[rng.random_range(0..2)];
            sale(
                rng.random_range(0..40),
                rng.random_range(0..days),
                rng.random_range(1.0..100.0),
                skin,
                gender,
                &format!("w{}", rng.random_range(0..8)),
                &format!("w{}", rng.random_range(0..8)),
            )
        })
        .collect()
}

fn fx_series(days: i64) -> DailySeries {
    (0..days).map(|o| (day(o), 1000.0 + 37.0 * o as f64)).collect()
}

#[test]
fn daily_aggregates_match_group_by_oracle() {
    let sales = random_sales(30, 30, 5);
    let fx = fx_series(5);
    let agg = daily_aggregates(&sales, &fx).unwrap();
    for o in 0..5 {
        let d = day(o);
        let todays: Vec<&SaleRecord> = sales.iter().filter(|s| s.date == d).collect();
        if todays.is_empty() {
            assert!(agg.active_wallets.get(d).is_none());
            continue;
        }
        let mut wallets: Vec<&str> = todays
            .iter()
            .flat_map(|s| [s.buyer_wallet.as_str(), s.seller_wallet.as_str()])
            .collect();
        wallets.sort_unstable();
        wallets.dedup();
        let volume: f64 = todays.iter().map(|s| s.price_eth * fx.get(d).unwrap()).sum();
        assert_eq!(agg.active_wallets.get(d), Some(wallets.len() as f64));
        assert!((agg.sales_volume_usd.get(d).unwrap() - volume).abs() < 1e-9 * volume);
    }
}

#[test]
fn pct_change_matches_shift_divide_oracle() {
    let walk = random_walk(50, 50);
    let series: DailySeries = walk.iter().enumerate().map(|(i, v)| (day(i as i64), 100.0 + v)).collect();
    let got = pct_change(&series).unwrap();
    assert!(got.gaps.is_empty());
    assert_eq!(got.series.len(), 49);
    for i in 1..50 {
        let (prev, cur) = (100.0 + walk[i - 1], 100.0 + walk[i]);
        assert!((got.series.get(day(i as i64)).unwrap() - (cur - prev) / prev).abs() < 1e-12);
    }
}

#[test]
fn four_sale_heatmap_counts() {
    let ape = SkinTone::Nonhuman(NonhumanKind::Ape);
    let sales = vec![
        sale(1, 0, 1.0, SkinTone::Dark, Gender::Male, "a", "b"),
        sale(2, 0, 1.0, SkinTone::Dark, Gender::Male, "a", "b"),
        sale(3, 0, 1.0, ape, Gender::Female, "a", "b"),
        sale(4, 0, 1.0, SkinTone::Albino, Gender::Female, "a", "b"),
    ];
    let dist = attribute_distribution(&sales);
    assert_eq!(dist.total, 4);
    assert_eq!(dist.count(Gender::Male, SkinTone::Dark), 2);
    assert_eq!(dist.count(Gender::Female, ape), 1);
    assert_eq!(dist.count(Gender::Female, SkinTone::Albino), 1);
    assert_eq!(dist.count(Gender::Male, SkinTone::Light), 0);
    assert_eq!(dist.gender_share(Gender::Male), 0.5);
    assert_eq!(dist.skin_share(SkinTone::Albino), 0.25);
}

#[test]
fn panel_join_matches_per_sale_lookup_oracle() {
    let days = 12;
    let sales = random_sales(50, 50, days);
    // Each input misses a different day so every drop reason is exercised.
    let series = |skip: i64, base: f64| -> DailySeries {
        (0..days).filter(|o| *o != skip).map(|o| (day(o), base + o as f64 / 100.0)).collect()
    };
    let fx_close = series(0, 2000.0);
    let sentiment = series(1, 0.1);
    let active = series(2, -0.05);
    let volume = series(3, 0.2);
    let gas = series(4, 40.0);
    let fx_pct = series(5, 0.01);
    let mut rarity = rarity_score(&sales);
    let missing_punk = sales[7].punk_id;
    rarity.remove(&missing_punk);

    let inputs = PanelInputs {
        sentiment: &sentiment,
        active_wallet_pct: &active,
        sales_volume_pct: &volume,
        gas_gwei: &gas,
        fx_close: &fx_close,
        fx_pct: &fx_pct,
        rarity: &rarity,
    };
    let panel = build_panel(&sales, inputs).unwrap();
    assert_eq!(panel.rows.len() + panel.coverage.dropped.len(), sales.len());

    let mut expected = Vec::new();
    for s in &sales {
        let lookups = [
            fx_close.get(s.date),
            sentiment.get(s.date),
            active.get(s.date),
            volume.get(s.date),
            gas.get(s.date),
            fx_pct.get(s.date),
            rarity.get(&s.punk_id).copied(),
        ];
        if lookups.iter().any(Option::is_none) {
            continue;
        }
        let v: Vec<f64> = lookups.iter().map(|x| x.unwrap()).collect();
        let flag = |b: bool| u8::from(b);
        expected.push(PanelRow {
            date: s.date,
            punk_id: s.punk_id,
            log_usd_price: (s.price_eth * v[0]).ln(),
            x_dark: flag(s.skin_tone == SkinTone::Dark),
            x_light: flag(s.skin_tone == SkinTone::Light),
            x_medium: flag(s.skin_tone == SkinTone::Medium),
            x_nonhuman: flag(matches!(s.skin_tone, SkinTone::Nonhuman(_))),
            x_male: flag(s.gender == Gender::Male),
            rarity: v[6],
            active_wallet_pct: v[2],
            sales_volume_pct: v[3],
            gas_price_gwei: v[4],
            fx_pct: v[5],
            sentiment: v[1],
        });
    }
    assert_eq!(panel.rows, expected);
    for row in &panel.rows {
        let s = sales.iter().find(|s| s.punk_id == row.punk_id && s.date == row.date).unwrap();
        let price = row.log_usd_price.exp() / fx_close.get(row.date).unwrap();
        let same_day: Vec<f64> = sales
            .iter()
            .filter(|t| t.punk_id == s.punk_id && t.date == s.date)
            .map(|t| t.price_eth)
            .collect();
        assert!(same_day.iter().any(|p| (p - price).abs() < 1e-9 * p.max(1.0)));
    }

    let mut buf = Vec::new();
    write_panel_csv(&mut buf, &panel.rows).unwrap();
    let back = read_panel_csv(buf.as_slice()).unwrap();
    assert_eq!(back, panel.rows);
}

fn rows_from_series(values: &[f64]) -> Vec<PanelRow> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| PanelRow {
            date: day(i as i64),
            punk_id: 1,
            log_usd_price: *v,
            x_dark: 0,
            x_light: 0,
            x_medium: 0,
            x_nonhuman: 0,
            x_male: 1,
            rarity: 2.0,
            active_wallet_pct: *v,
            sales_volume_pct: 0.0,
            gas_price_gwei: 50.0,
            fx_pct: *v,
            sentiment: 0.1,
        })
        .collect()
}

#[test]
fn stationarity_screen_flags_ar1_and_random_walk() {
    let ar = stationarity_screen(&rows_from_series(&ar1(11, 500, 0.5)), None);
    match ar.get("log_usd_price").unwrap() {
        ScreenOutcome::Tested { stationary, result } => {
            assert!(*stationary, "{}", result.statistic);
            assert!(result.statistic < -2.86);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(ar.get("sales_volume_pct"), Some(ScreenOutcome::Skipped { reason }) if reason == "zero variance"));

    let rw = stationarity_screen(&rows_from_series(&random_walk(11, 500)), None);
    assert!(rw.non_stationary().contains(&"log_usd_price"));
}

fn arbitrary_corpus() -> impl Strategy<Value = Vec<Tweet>> {
    let words = prop::sample::select(vec!["male", "Female", "ape", "APE!", "dark", "the", "punk", "good", "bad", "alien,"]);
    let text = prop::collection::vec(words, 0..8).prop_map(|w| w.join(" "));
    prop::collection::vec((text, 0i64..5), 0..20).prop_map(|items| {
        items
            .into_iter()
            .enumerate()
            .map(|(i, (t, d))| tweet(i, d, 3, &t))
            .collect()
    })
}

proptest! {
    #[test]
    fn keyword_frequency_is_additive(a in arbitrary_corpus(), b in arbitrary_corpus()) {
        let filter = KeywordFilter::ethics_default();
        let fa = keyword_frequency(&a, &filter);
        let fb = keyword_frequency(&b, &filter);
        let joined: Vec<Tweet> = a.iter().chain(&b).cloned().collect();
        let fab = keyword_frequency(&joined, &filter);
        for ((x, y), z) in fa.iter().zip(&fb).zip(&fab) {
            prop_assert_eq!(x.1 + y.1, z.1);
        }
    }

    #[test]
    fn keyword_sentiment_implies_frequency(corpus in arbitrary_corpus()) {
        let filter = KeywordFilter::ethics_default();
        let lexicon = SentimentLexicon::vader();
        let freq: BTreeMap<String, u64> = keyword_frequency(&corpus, &filter).into_iter().collect();
        for (k, v) in keyword_sentiment(&corpus, &filter, &lexicon) {
            prop_assert_eq!(v.is_some(), freq[&k] >= 1);
            if let Some(v) = v {
                prop_assert!((-1.0..=1.0).contains(&v));
            }
        }
        prop_assert_eq!(daily_volume(&corpus).sum() as usize, corpus.len());
    }
}
