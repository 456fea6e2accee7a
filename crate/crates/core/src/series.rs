//! Day-keyed series shared by the corpus, market and panel stages.

use std::collections::BTreeMap;

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

/// Ordered map from UTC calendar day to a value.
///
/// Dates are unique and iterate in increasing order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DailySeries(BTreeMap<NaiveDate, f64>);

impl DailySeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the value for `date`, returning the previous one.
    pub fn insert(&mut self, date: NaiveDate, value: f64) -> Option<f64> {
        self.0.insert(date, value)
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.0.get(&date).copied()
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.0.contains_key(&date)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (NaiveDate, f64)> + '_ {
        self.0.iter().map(|(d, v)| (*d, *v))
    }

    pub fn dates(&self) -> impl DoubleEndedIterator<Item = NaiveDate> + '_ {
        self.0.keys().copied()
    }

    pub fn values(&self) -> impl DoubleEndedIterator<Item = f64> + '_ {
        self.0.values().copied()
    }

    pub fn sum(&self) -> f64 {
        self.values().sum()
    }

    /// Largest value with its date; the earliest date wins ties.
    pub fn max(&self) -> Option<(NaiveDate, f64)> {
        self.iter().fold(None, |best, (d, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((d, v)),
        })
    }

    /// Sub-series restricted to `range` (inclusive on both ends).
    pub fn restrict(&self, range: DateRange) -> DailySeries {
        DailySeries(
            self.0
                .range(range.start..=range.end)
                .map(|(d, v)| (*d, *v))
                .collect(),
        )
    }
}

impl FromIterator<(NaiveDate, f64)> for DailySeries {
    fn from_iter<I: IntoIterator<Item = (NaiveDate, f64)>>(iter: I) -> Self {
        DailySeries(iter.into_iter().collect())
    }
}

/// Inclusive calendar-day range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    /// Returns `None` when `end` precedes `start`.
    pub fn new(start: NaiveDate, end: NaiveDate) -> Option<Self> {
        (start <= end).then_some(Self { start, end })
    }

    /// CryptoPunks launch day through the end of October 2022.
    pub fn study_default() -> Self {
        Self {
            start: NaiveDate::from_ymd_opt(2017, 6, 23).expect("valid date"),
            end: NaiveDate::from_ymd_opt(2022, 10, 31).expect("valid date"),
        }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn days(&self) -> i64 {
        (self.end - self.start).num_days() + 1
    }

    pub fn iter_days(&self) -> impl Iterator<Item = NaiveDate> {
        let start = self.start;
        (0..self.days()).map(move |i| start + Duration::days(i))
    }
}
