use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dist::student_t_two_sided_p;
use super::linalg::{dot, qr_least_squares, Matrix};

pub const INTERCEPT: &str = "intercept";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OlsError {
    #[error("need more observations than parameters (n = {n_obs}, k = {n_params})")]
    InsufficientData { n_obs: usize, n_params: usize },
    #[error("design is rank deficient: `{column}` is a linear combination of [{}]", .depends_on.join(", "))]
    Singular {
        column: String,
        depends_on: Vec<String>,
    },
    #[error("column `{column}` has length {len}, expected {expected}")]
    Shape {
        column: String,
        len: usize,
        expected: usize,
    },
    #[error("non-finite value in `{0}`")]
    NonFinite(String),
}

/// Named design columns. Column order is the coefficient order of the fit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Design {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Design {
    pub fn new() -> Self {
        Self::default()
    }

    /// A design whose first column is a constant 1 named [`INTERCEPT`].
    pub fn with_intercept(n_obs: usize) -> Self {
        let mut d = Self::new();
        d.push(INTERCEPT, vec![1.0; n_obs]);
        d
    }

    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) -> &mut Self {
        self.names.push(name.into());
        self.columns.push(column);
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn n_obs(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn n_params(&self) -> usize {
        self.columns.len()
    }

    fn has_intercept(&self) -> bool {
        self.columns.iter().any(|c| c.iter().all(|v| *v == 1.0))
    }
}

/// OLS estimates with classical (homoskedastic) inference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Two-sided, Student-t with `n_obs - n_params` degrees of freedom.
    pub p_values: Vec<f64>,
    pub r2: f64,
    pub adj_r2: f64,
    pub n_obs: usize,
    pub n_params: usize,
    pub rss: f64,
}

impl OlsFit {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn df_resid(&self) -> usize {
        self.n_obs - self.n_params
    }

    /// Gaussian log-likelihood at the ML variance estimate `rss / n`.
    pub fn log_likelihood(&self) -> f64 {
        let n = self.n_obs as f64;
        -0.5 * n * ((2.0 * std::f64::consts::PI).ln() + (self.rss / n).ln() + 1.0)
    }

    /// `-2 logL + 2k`.
    pub fn aic(&self) -> f64 {
        -2.0 * self.log_likelihood() + 2.0 * self.n_params as f64
    }
}

/// Fits `response ~ design` by Householder QR.
///
/// R² is centred when the design contains a constant column and uncentred
/// otherwise.
pub fn ols_fit(design: &Design, response: &[f64]) -> Result<OlsFit, OlsError> {
    let n = response.len();
    let k = design.n_params();
    for (name, col) in design.names.iter().zip(&design.columns) {
        if col.len() != n {
            return Err(OlsError::Shape {
                column: name.clone(),
                len: col.len(),
                expected: n,
            });
        }
        if col.iter().any(|v| !v.is_finite()) {
            return Err(OlsError::NonFinite(name.clone()));
        }
    }
    if response.iter().any(|v| !v.is_finite()) {
        return Err(OlsError::NonFinite("response".into()));
    }
    if n <= k {
        return Err(OlsError::InsufficientData {
            n_obs: n,
            n_params: k,
        });
    }

    let x = Matrix::from_columns(&design.columns);
    let sol = qr_least_squares(&x, response).map_err(|def| OlsError::Singular {
        column: design.names[def.column].clone(),
        depends_on: def
            .combination
            .iter()
            .map(|&i| design.names[i].clone())
            .collect(),
    })?;

    let fitted = x.mul_vec(&sol.coefficients);
    let resid: Vec<f64> = response.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let rss = dot(&resid, &resid);
    let df = (n - k) as f64;
    let sigma2 = rss / df;

    let standard_errors: Vec<f64> = sol
        .unscaled_variances()
        .into_iter()
        .map(|v| (sigma2 * v).sqrt())
        .collect();
    let t_stats: Vec<f64> = sol
        .coefficients
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b / se)
        .collect();
    let p_values = t_stats
        .iter()
        .map(|t| student_t_two_sided_p(*t, df))
        .collect();

    let tss = if design.has_intercept() {
        let mean = response.iter().sum::<f64>() / n as f64;
        response.iter().map(|y| (y - mean).powi(2)).sum::<f64>()
    } else {
        dot(response, response)
    };
    let r2 = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    // The min guards the k = 1 case, where rounding can put adj_r2 an ulp above r2.
    let adj_r2 = (1.0 - (1.0 - r2) * (n as f64 - 1.0) / df).min(r2);

    Ok(OlsFit {
        names: design.names.clone(),
        coefficients: sol.coefficients,
        standard_errors,
        t_stats,
        p_values,
        r2,
        adj_r2,
        n_obs: n,
        n_params: k,
        rss,
    })
}
