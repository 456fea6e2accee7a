use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrelationError {
    #[error("need at least two columns")]
    TooFewColumns,
    #[error("column `{column}` has length {len}, expected {expected}")]
    Length {
        column: String,
        len: usize,
        expected: usize,
    },
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("column `{0}` is constant")]
    Constant(String),
    #[error("column `{0}` contains non-finite values")]
    NonFinite(String),
}

/// Symmetric Pearson correlation matrix with named rows/columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }

    /// Off-diagonal pairs `(row, col, r)` with `row < col`.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        let k = self.names.len();
        (0..k).flat_map(move |i| {
            ((i + 1)..k).map(move |j| (self.names[i].as_str(), self.names[j].as_str(), self.values[i][j]))
        })
    }
}

/// Pearson correlations between every pair of named columns.
pub fn pearson_matrix(columns: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix, CorrelationError> {
    if columns.len() < 2 {
        return Err(CorrelationError::TooFewColumns);
    }
    let n = columns[0].1.len();
    for (name, c) in columns {
        if c.len() != n {
            return Err(CorrelationError::Length {
                column: name.clone(),
                len: c.len(),
                expected: n,
            });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(CorrelationError::NonFinite(name.clone()));
        }
    }
    if n < 2 {
        return Err(CorrelationError::TooShort(n));
    }

    let centred: Vec<Vec<f64>> = columns
        .iter()
        .map(|(name, c)| {
            let mean = c.iter().sum::<f64>() / n as f64;
            let d: Vec<f64> = c.iter().map(|v| v - mean).collect();
            if d.iter().all(|v| *v == 0.0) {
                Err(CorrelationError::Constant(name.clone()))
            } else {
                Ok(d)
            }
        })
        .collect::<Result<_, _>>()?;
    let norms: Vec<f64> = centred
        .iter()
        .map(|d| d.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();

    let k = columns.len();
    let mut values = vec![vec![0.0; k]; k];
    for i in 0..k {
        values[i][i] = 1.0;
        for j in (i + 1)..k {
            let cov: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = (cov / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: columns.iter().map(|(n, _)| n.clone()).collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(name: &str, v: Vec<f64>) -> (String, Vec<f64>) {
        (name.to_string(), v)
    }

    #[test]
    fn self_and_negated() {
        let x = vec![1.0, 3.0, 2.0, 7.0, 5.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let m = pearson_matrix(&[col("x", x.clone()), col("x2", x), col("neg", neg)]).unwrap();
        assert!((m.get("x", "x2").unwrap() - 1.0).abs() < 1e-15);
        assert!((m.get("x", "neg").unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(m.get("neg", "neg"), Some(1.0));
        assert_eq!(m.pairs().count(), 3);
    }

    #[test]
    fn constant_column_is_named() {
        let err = pearson_matrix(&[col("a", vec![1.0, 2.0]), col("flat", vec![4.0, 4.0])]).unwrap_err();
        assert_eq!(err, CorrelationError::Constant("flat".into()));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(
            pearson_matrix(&[col("a", vec![1.0, 2.0])]).unwrap_err(),
            CorrelationError::TooFewColumns
        );
        assert!(matches!(
            pearson_matrix(&[col("a", vec![1.0, 2.0]), col("b", vec![1.0])]),
            Err(CorrelationError::Length { .. })
        ));
        assert_eq!(
            pearson_matrix(&[col("a", vec![1.0]), col("b", vec![1.0])]).unwrap_err(),
            CorrelationError::TooShort(1)
        );
    }
}
