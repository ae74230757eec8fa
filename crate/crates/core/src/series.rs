use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation controls shared by every infinite sum and product in the crate.
///
/// A series stops at the first term whose magnitude drops below `abs_tol`
/// (that term is still added), or after `max_terms` terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub max_terms: usize,
    pub abs_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            max_terms: 64,
            abs_tol: 1e-15,
        }
    }
}

impl SeriesConfig {
    pub fn new(max_terms: usize, abs_tol: f64) -> Result<Self> {
        let cfg = SeriesConfig { max_terms, abs_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::invalid("max_terms", "must be positive"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(
                "abs_tol",
                format!("must be a finite value >= 0, got {}", self.abs_tol),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = SeriesConfig::default();
        assert_eq!(cfg.max_terms, 64);
        assert_eq!(cfg.abs_tol, 1e-15);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SeriesConfig::new(0, 1e-15).is_err());
        assert!(SeriesConfig::new(8, -1.0).is_err());
        assert!(SeriesConfig::new(8, f64::NAN).is_err());
        assert!(SeriesConfig::new(8, 0.0).is_ok());
    }
}
