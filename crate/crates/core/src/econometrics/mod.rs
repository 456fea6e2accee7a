//! Numerical core: least squares with inference, unit-root testing,
//! correlations and significance coding.

pub mod adf;
pub mod correlation;
pub mod dist;
pub mod linalg;
pub mod ols;

use thiserror::Error;

pub use adf::{adf_test, schwert_max_lag, AdfError, AdfResult, CriticalValues, MIN_ADF_LENGTH};
pub use correlation::{pearson_matrix, CorrelationError, CorrelationMatrix};
pub use ols::{ols_fit, Design, OlsError, OlsFit, INTERCEPT};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("p-value {0} outside [0, 1]")]
pub struct PValueDomainError(pub f64);

/// Significance level in stars: 3 for p < 0.01, 2 for p < 0.05, 1 for
/// p < 0.1, otherwise 0.
pub fn significance_stars(p: f64) -> Result<u8, PValueDomainError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PValueDomainError(p));
    }
    Ok(if p < 0.01 {
        3
    } else if p < 0.05 {
        2
    } else if p < 0.1 {
        1
    } else {
        0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_brackets() {
        assert_eq!(significance_stars(0.005), Ok(3));
        assert_eq!(significance_stars(0.01), Ok(2));
        assert_eq!(significance_stars(0.049), Ok(2));
        assert_eq!(significance_stars(0.07), Ok(1));
        assert_eq!(significance_stars(0.1), Ok(0));
        assert_eq!(significance_stars(0.5), Ok(0));
        assert_eq!(significance_stars(0.0), Ok(3));
        assert_eq!(significance_stars(1.0), Ok(0));
    }

    #[test]
    fn star_domain() {
        assert!(significance_stars(-0.1).is_err());
        assert!(significance_stars(1.5).is_err());
        assert!(significance_stars(f64::NAN).is_err());
    }
}
