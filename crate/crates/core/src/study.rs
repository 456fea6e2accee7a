//! The experiment grid: four nested hedonic models over three time windows,
//! the correlation pre-check and the before/after structural comparison.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::econometrics::{
    ols_fit, pearson_matrix, significance_stars, CorrelationError, CorrelationMatrix, Design,
    OlsError, OlsFit, INTERCEPT,
};
use crate::panel::PanelRow;
use crate::series::DateRange;

/// Regressors in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regressor {
    Dark,
    Light,
    Medium,
    Nonhuman,
    Rarity,
    Male,
    ActiveWalletPct,
    SalesVolumePct,
    GasPrice,
    FxPct,
    Sentiment,
}

impl Regressor {
    pub const ALL: [Regressor; 11] = [
        Regressor::Dark,
        Regressor::Light,
        Regressor::Medium,
        Regressor::Nonhuman,
        Regressor::Rarity,
        Regressor::Male,
        Regressor::ActiveWalletPct,
        Regressor::SalesVolumePct,
        Regressor::GasPrice,
        Regressor::FxPct,
        Regressor::Sentiment,
    ];

    /// Column name in designs, fits and JSON.
    pub fn name(self) -> &'static str {
        match self {
            Regressor::Dark => "x_dark",
            Regressor::Light => "x_light",
            Regressor::Medium => "x_medium",
            Regressor::Nonhuman => "x_nonhuman",
            Regressor::Rarity => "rarity",
            Regressor::Male => "x_male",
            Regressor::ActiveWalletPct => "active_wallet_pct",
            Regressor::SalesVolumePct => "sales_volume_pct",
            Regressor::GasPrice => "gas_price_gwei",
            Regressor::FxPct => "fx_pct",
            Regressor::Sentiment => "sentiment",
        }
    }

    /// Row label in the text tables.
    pub fn label(self) -> &'static str {
        match self {
            Regressor::Dark => "Skin Tone: Dark",
            Regressor::Light => "Skin Tone: Light",
            Regressor::Medium => "Skin Tone: Medium",
            Regressor::Nonhuman => "Skin Tone: Nonhuman",
            Regressor::Rarity => "Rarity",
            Regressor::Male => "Gender: Male",
            Regressor::ActiveWalletPct => "Active Market Wallets (%)",
            Regressor::SalesVolumePct => "Sales (%)",
            Regressor::GasPrice => "Gas Price (Gwei)",
            Regressor::FxPct => "ETH/USD (%)",
            Regressor::Sentiment => "Sentiment Score",
        }
    }

    pub fn extract(self, row: &PanelRow) -> f64 {
        match self {
            Regressor::Dark => row.x_dark.into(),
            Regressor::Light => row.x_light.into(),
            Regressor::Medium => row.x_medium.into(),
            Regressor::Nonhuman => row.x_nonhuman.into(),
            Regressor::Rarity => row.rarity,
            Regressor::Male => row.x_male.into(),
            Regressor::ActiveWalletPct => row.active_wallet_pct,
            Regressor::SalesVolumePct => row.sales_volume_pct,
            Regressor::GasPrice => row.gas_price_gwei,
            Regressor::FxPct => row.fx_pct,
            Regressor::Sentiment => row.sentiment,
        }
    }

    pub fn from_name(name: &str) -> Option<Regressor> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }
}

/// Table label for a fitted column name, including the intercept.
pub fn column_label(name: &str) -> &str {
    if name == INTERCEPT {
        "(Intercept)"
    } else {
        Regressor::from_name(name).map_or(name, |r| r.label())
    }
}

/// One of the four nested specifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelSpec(u8);

impl ModelSpec {
    /// Attributes and rarity.
    pub const M1: ModelSpec = ModelSpec(1);
    /// + market activity and gas.
    pub const M2: ModelSpec = ModelSpec(2);
    /// + ETH/USD change.
    pub const M3: ModelSpec = ModelSpec(3);
    /// + sentiment.
    pub const M4: ModelSpec = ModelSpec(4);
    pub const ALL: [ModelSpec; 4] = [Self::M1, Self::M2, Self::M3, Self::M4];

    pub fn new(id: u8) -> Option<ModelSpec> {
        (1..=4).contains(&id).then_some(ModelSpec(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    /// Regressors in coefficient order (after the intercept). Each model's
    /// list is a prefix of the next one's.
    pub fn regressors(self) -> &'static [Regressor] {
        let len = match self.0 {
            1 => 6,
            2 => 9,
            3 => 10,
            _ => 11,
        };
        &Regressor::ALL[..len]
    }

    pub fn label(self) -> String {
        format!("Model {}", self.0)
    }

    /// Intercept plus this model's regressors over `rows`.
    pub fn design(self, rows: &[PanelRow]) -> Design {
        let mut d = Design::with_intercept(rows.len());
        for r in self.regressors() {
            d.push(r.name(), rows.iter().map(|row| r.extract(row)).collect());
        }
        d
    }
}

/// A named inclusive date window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub label: String,
    pub range: DateRange,
}

pub const BEFORE_LABEL: &str = "2017-2021";
pub const AFTER_LABEL: &str = "2021-2022";
pub const FULL_LABEL: &str = "2017-2022";

impl WindowSpec {
    pub fn default_split() -> NaiveDate {
        NaiveDate::from_ymd_opt(2021, 1, 1).expect("valid date")
    }

    /// The before / after / full windows of `study`, split so that `split`
    /// is the first day of the after window.
    pub fn standard(study: DateRange, split: NaiveDate) -> Result<[WindowSpec; 3], WindowError> {
        let before_end = split.pred_opt().ok_or(WindowError::Split(split))?;
        let before = DateRange::new(study.start, before_end).ok_or(WindowError::Split(split))?;
        let after = DateRange::new(split, study.end).ok_or(WindowError::Split(split))?;
        if before.start >= before.end || after.start >= after.end {
            return Err(WindowError::Split(split));
        }
        Ok([
            WindowSpec { label: BEFORE_LABEL.into(), range: before },
            WindowSpec { label: AFTER_LABEL.into(), range: after },
            WindowSpec { label: FULL_LABEL.into(), range: study },
        ])
    }

    pub fn slice(&self, panel: &[PanelRow]) -> Vec<PanelRow> {
        panel
            .iter()
            .filter(|r| self.range.contains(r.date))
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("split date {0} does not leave two non-empty windows inside the study range")]
    Split(NaiveDate),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Fit(OlsFit),
    Skipped { reason: String },
}

impl FitOutcome {
    pub fn fit(&self) -> Option<&OlsFit> {
        match self {
            FitOutcome::Fit(f) => Some(f),
            FitOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub window: String,
    pub model: ModelSpec,
    pub outcome: FitOutcome,
}

impl SuiteEntry {
    /// `window.model`, e.g. `2017-2021.4`.
    pub fn key(&self) -> String {
        format!("{}.{}", self.window, self.model.id())
    }
}

/// All fits ordered by (window, model).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub entries: Vec<SuiteEntry>,
}

impl Suite {
    pub fn get(&self, window: &str, model: ModelSpec) -> Option<&FitOutcome> {
        self.entries
            .iter()
            .find(|e| e.window == window && e.model == model)
            .map(|e| &e.outcome)
    }

    pub fn fit(&self, window: &str, model: ModelSpec) -> Option<&OlsFit> {
        self.get(window, model).and_then(FitOutcome::fit)
    }
}

/// Fits every model in every window. A window whose slice cannot support a
/// fit is recorded as skipped with the reason; other windows still run.
pub fn run_suite(panel: &[PanelRow], windows: &[WindowSpec]) -> Suite {
    let mut entries = Vec::with_capacity(windows.len() * ModelSpec::ALL.len());
    for w in windows {
        let rows = w.slice(panel);
        let y: Vec<f64> = rows.iter().map(|r| r.log_usd_price).collect();
        for model in ModelSpec::ALL {
            let outcome = match ols_fit(&model.design(&rows), &y) {
                Ok(fit) => FitOutcome::Fit(fit),
                Err(e) => FitOutcome::Skipped { reason: skip_reason(&e, rows.len()) },
            };
            entries.push(SuiteEntry { window: w.label.clone(), model, outcome });
        }
    }
    Suite { entries }
}

fn skip_reason(err: &OlsError, rows: usize) -> String {
    match err {
        OlsError::InsufficientData { .. } => format!("insufficient rows ({rows}): {err}"),
        _ => err.to_string(),
    }
}

/// Pearson matrix of a model's regressors plus the weak-correlation verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCheck {
    pub matrix: CorrelationMatrix,
    pub threshold: f64,
    /// True when every off-diagonal `|r|` is below `threshold`.
    pub weakly_correlated: bool,
    /// Pairs with `|r| >= threshold`.
    pub offending: Vec<(String, String, f64)>,
}

pub const DEFAULT_CORRELATION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrecheckError {
    #[error("panel is empty")]
    EmptyPanel,
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
}

pub fn correlation_precheck(
    panel: &[PanelRow],
    model: ModelSpec,
    threshold: f64,
) -> Result<CorrelationCheck, PrecheckError> {
    if panel.is_empty() {
        return Err(PrecheckError::EmptyPanel);
    }
    let columns: Vec<(String, Vec<f64>)> = model
        .regressors()
        .iter()
        .map(|r| (r.name().to_string(), panel.iter().map(|row| r.extract(row)).collect()))
        .collect();
    let matrix = pearson_matrix(&columns)?;
    let offending: Vec<(String, String, f64)> = matrix
        .pairs()
        .filter(|(_, _, r)| r.abs() >= threshold)
        .map(|(a, b, r)| (a.to_string(), b.to_string(), r))
        .collect();
    Ok(CorrelationCheck {
        weakly_correlated: offending.is_empty(),
        offending,
        threshold,
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientChange {
    pub name: String,
    pub coef_before: f64,
    pub coef_after: f64,
    /// `coef_before * coef_after < 0`.
    pub sign_flipped: bool,
    pub stars_before: u8,
    pub stars_after: u8,
    /// Significant at 10 % or better before, not significant at all after.
    pub significance_lost: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralChangeReport {
    pub rows: Vec<CoefficientChange>,
}

impl StructuralChangeReport {
    pub fn get(&self, name: &str) -> Option<&CoefficientChange> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn flips(&self) -> impl Iterator<Item = &CoefficientChange> {
        self.rows.iter().filter(|r| r.sign_flipped)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignmentError {
    #[error("fits have different regressors: [{}] vs [{}]", .before.join(", "), .after.join(", "))]
    Mismatch {
        before: Vec<String>,
        after: Vec<String>,
    },
    #[error("invalid p-value for `{0}`")]
    PValue(String),
}

/// Per-coefficient comparison of two fits with identical column order.
pub fn structural_change(
    before: &OlsFit,
    after: &OlsFit,
) -> Result<StructuralChangeReport, AlignmentError> {
    if before.names != after.names {
        return Err(AlignmentError::Mismatch {
            before: before.names.clone(),
            after: after.names.clone(),
        });
    }
    let stars = |fit: &OlsFit, i: usize| {
        significance_stars(fit.p_values[i]).map_err(|_| AlignmentError::PValue(fit.names[i].clone()))
    };
    let rows = before
        .names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let (cb, ca) = (before.coefficients[i], after.coefficients[i]);
            let (sb, sa) = (stars(before, i)?, stars(after, i)?);
            Ok(CoefficientChange {
                name: name.clone(),
                coef_before: cb,
                coef_after: ca,
                sign_flipped: cb * ca < 0.0,
                stars_before: sb,
                stars_after: sa,
                significance_lost: sb > 0 && sa == 0,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(StructuralChangeReport { rows })
}

pub const SUITE_SCHEMA_VERSION: u32 = 1;

/// Serialized suite: fits keyed `window.model`, the structural comparison
/// and the correlation pre-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteDocument<'a> {
    pub schema_version: u32,
    pub split_date: NaiveDate,
    pub fits: serde_json::Map<String, serde_json::Value>,
    pub structural_change: Option<&'a StructuralChangeReport>,
    pub structural_change_note: Option<String>,
    pub correlation: Option<&'a CorrelationCheck>,
}

impl<'a> SuiteDocument<'a> {
    pub fn new(
        suite: &Suite,
        split_date: NaiveDate,
        structural: Result<&'a StructuralChangeReport, String>,
        correlation: Option<&'a CorrelationCheck>,
    ) -> serde_json::Result<Self> {
        let mut fits = serde_json::Map::new();
        for e in &suite.entries {
            fits.insert(e.key(), serde_json::to_value(&e.outcome)?);
        }
        let (structural_change, structural_change_note) = match structural {
            Ok(r) => (Some(r), None),
            Err(note) => (None, Some(note)),
        };
        Ok(Self {
            schema_version: SUITE_SCHEMA_VERSION,
            split_date,
            fits,
            structural_change,
            structural_change_note,
            correlation,
        })
    }
}

/// Model 4 before versus after the split, when both fits exist.
pub fn before_after(suite: &Suite) -> Result<StructuralChangeReport, String> {
    let before = suite
        .fit(BEFORE_LABEL, ModelSpec::M4)
        .ok_or_else(|| format!("no Model 4 fit for {BEFORE_LABEL}"))?;
    let after = suite
        .fit(AFTER_LABEL, ModelSpec::M4)
        .ok_or_else(|| format!("no Model 4 fit for {AFTER_LABEL}"))?;
    structural_change(before, after).map_err(|e| e.to_string())
}
