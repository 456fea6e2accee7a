//! Augmented Dickey-Fuller unit-root test (constant, no trend).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ols::{ols_fit, Design, OlsError};

/// Shortest series accepted by [`adf_test`].
pub const MIN_ADF_LENGTH: usize = 20;

/// MacKinnon (2010) response-surface coefficients for the constant-only
/// single-series case: `cv(T) = b0 + b1/T + b2/T^2 + b3/T^3`.
const CRIT_1PCT: [f64; 4] = [-3.43035, -6.5393, -16.786, -79.433];
const CRIT_5PCT: [f64; 4] = [-2.86154, -2.8903, -4.234, -40.040];
const CRIT_10PCT: [f64; 4] = [-2.56677, -1.5384, -2.809, 0.0];

fn response_surface(b: &[f64; 4], nobs: usize) -> f64 {
    let t = nobs as f64;
    b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one_pct: f64,
    pub five_pct: f64,
    pub ten_pct: f64,
}

impl CriticalValues {
    pub fn for_nobs(nobs: usize) -> Self {
        Self {
            one_pct: response_surface(&CRIT_1PCT, nobs),
            five_pct: response_surface(&CRIT_5PCT, nobs),
            ten_pct: response_surface(&CRIT_10PCT, nobs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    pub one_pct: bool,
    pub five_pct: bool,
    pub ten_pct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    /// t-ratio on the lagged level.
    pub statistic: f64,
    /// Augmentation lags chosen by AIC.
    pub lags: usize,
    /// Observations in the final test regression.
    pub n_obs: usize,
    pub critical_values: CriticalValues,
    /// `statistic < critical value` at each level, i.e. unit root rejected.
    pub reject_at: Rejections,
}

impl AdfResult {
    /// Rejection of the unit root at 5 %, read as "stationary".
    pub fn is_stationary(&self) -> bool {
        self.reject_at.five_pct
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdfError {
    #[error("series has {len} observations, at least {MIN_ADF_LENGTH} required")]
    TooShort { len: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("series contains non-finite values")]
    NonFinite,
    #[error("test regression failed: {0}")]
    Regression(#[from] OlsError),
}

/// Schwert's rule `floor(12 * (n / 100)^(1/4))`.
pub fn schwert_max_lag(len: usize) -> usize {
    (12.0 * (len as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Regresses `dy[t]` on `[1, y[t-1], dy[t-1..=t-lags]]` for `t` drawn from
/// the first-difference index range `start..`.
fn adf_regression(
    y: &[f64],
    dy: &[f64],
    lags: usize,
    start: usize,
) -> Result<super::OlsFit, OlsError> {
    // dy[i] = y[i + 1] - y[i]; the lagged level for dy[i] is y[i].
    let rows = start..dy.len();
    let mut design = Design::with_intercept(rows.len());
    design.push("level_lag", rows.clone().map(|i| y[i]).collect());
    for l in 1..=lags {
        design.push(format!("diff_lag{l}"), rows.clone().map(|i| dy[i - l]).collect());
    }
    let response: Vec<f64> = rows.map(|i| dy[i]).collect();
    ols_fit(&design, &response)
}

/// Largest usable lag so the common-sample regression keeps enough
/// residual degrees of freedom.
fn clamp_max_lag(len: usize, requested: usize) -> usize {
    // With lag L: nobs = len - 1 - L, params = L + 2; keep nobs - params >= 10.
    let cap = len.saturating_sub(13) / 2;
    requested.min(cap)
}

/// ADF test with constant and AIC lag selection over `0..=max_lag`.
///
/// Candidate lags are compared on the common sample that the largest lag
/// allows; the chosen lag is then re-estimated on all available
/// observations.
pub fn adf_test(series: &[f64], max_lag: usize) -> Result<AdfResult, AdfError> {
    if series.len() < MIN_ADF_LENGTH {
        return Err(AdfError::TooShort { len: series.len() });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(AdfError::NonFinite);
    }
    let first = series[0];
    if series.iter().all(|v| *v == first) {
        return Err(AdfError::ZeroVariance);
    }

    let dy: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let max_lag = clamp_max_lag(series.len(), max_lag);

    let mut best: Option<(usize, f64)> = None;
    for lags in 0..=max_lag {
        let fit = adf_regression(series, &dy, lags, max_lag)?;
        let aic = fit.aic();
        match best {
            Some((_, b)) if aic >= b => {}
            _ => best = Some((lags, aic)),
        }
    }
    let lags = best.map_or(0, |(l, _)| l);

    let fit = adf_regression(series, &dy, lags, lags)?;
    let statistic = fit.t_stats[1];
    let critical_values = CriticalValues::for_nobs(fit.n_obs);
    Ok(AdfResult {
        statistic,
        lags,
        n_obs: fit.n_obs,
        reject_at: Rejections {
            one_pct: statistic < critical_values.one_pct,
            five_pct: statistic < critical_values.five_pct,
            ten_pct: statistic < critical_values.ten_pct,
        },
        critical_values,
    })
}
