//! Geometric, exponential and truncated hypoexponential variates.
//!
//! `Exp(rate)` always means the rate parameterization: mean `1 / rate`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::series::SeriesConfig;

/// Geom(p) on {1, 2, ...} by inversion: `floor(ln U / ln(1 - p)) + 1`.
pub fn sample_geometric(p: f64, stream: &mut RngStream) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1], got {p}")));
    }
    Ok(geometric_unchecked(p, stream))
}

#[inline]
pub(crate) fn geometric_unchecked(p: f64, stream: &mut RngStream) -> u64 {
    if p == 1.0 {
        return 1;
    }
    let u = stream.uniform_open0();
    // ln_1p keeps full precision for p down to 2^-60 and beyond
    let t = (u.ln() / (-p).ln_1p()).floor();
    // saturating float-to-int conversion
    (t as u64).saturating_add(1)
}

pub fn sample_exponential(rate: f64, stream: &mut RngStream) -> Result<f64> {
    check_rate(rate)?;
    Ok(exponential_from_uniform(rate, stream.uniform_open0()))
}

/// Inversion map `-ln(u) / rate` for `u` in (0, 1].
#[inline]
pub fn exponential_from_uniform(rate: f64, u: f64) -> f64 {
    -u.ln() / rate
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("rate", format!("must be positive and finite, got {rate}")))
    }
}

/// Sampler for `Σ_{i=1}^{L} Exp(2^i)`, the truncation of the infinite sum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypoSampler {
    /// Number of exponential summands kept.
    pub levels: usize,
    /// Mean of the omitted tail `Σ_{i>L} Exp(2^i)`, i.e. `2^{-L}`; the sampler
    /// is biased low by exactly this much.
    pub truncation_bias: f64,
}

impl HypoSampler {
    pub fn new(cfg: &SeriesConfig) -> Result<Self> {
        cfg.validate()?;
        let mut levels = 1usize;
        while levels < cfg.max_terms && 2f64.powi(1 - levels as i32) >= cfg.abs_tol {
            levels += 1;
        }
        Ok(HypoSampler {
            levels,
            truncation_bias: 2f64.powi(-(levels as i32)),
        })
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        (1..=self.levels)
            .map(|i| exponential_from_uniform(2f64.powi(i as i32), stream.uniform_open0()))
            .sum()
    }
}

pub fn sample_hypo(cfg: &SeriesConfig, stream: &mut RngStream) -> Result<f64> {
    Ok(HypoSampler::new(cfg)?.sample(stream))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_var(xs: impl Iterator<Item = f64>) -> (f64, f64, usize) {
        let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
        for x in xs {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
        }
        (mean, m2 / (n - 1) as f64, n)
    }

    #[test]
    fn geometric_rejects_out_of_range() {
        let mut s = RngStream::new(0, 0);
        for p in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(sample_geometric(p, &mut s).is_err());
        }
    }

    #[test]
    fn geometric_with_certain_success() {
        let mut s = RngStream::new(3, 0);
        assert!((0..1000).all(|_| sample_geometric(1.0, &mut s).unwrap() == 1));
    }

    #[test]
    fn geometric_half_pmf_and_mean() {
        let mut s = RngStream::new(11, 0);
        let n = 1_000_000;
        let draws: Vec<u64> = (0..n).map(|_| sample_geometric(0.5, &mut s).unwrap()).collect();
        let ones = draws.iter().filter(|&&x| x == 1).count() as f64 / n as f64;
        let twos = draws.iter().filter(|&&x| x == 2).count() as f64 / n as f64;
        assert!((ones - 0.5).abs() < 5.0 * (0.25 / n as f64).sqrt());
        assert!((twos - 0.25).abs() < 5.0 * (0.1875 / n as f64).sqrt());
        let (mean, var, _) = mean_var(draws.iter().map(|&x| x as f64));
        assert!((mean - 2.0).abs() < 0.01);
        // Var Geom(p) = (1-p)/p^2 = 2
        assert!((var - 2.0).abs() < 5.0 * (var * 10.0 / n as f64).sqrt());
    }

    #[test]
    fn geometric_tiny_p_is_finite() {
        let mut s = RngStream::new(5, 0);
        let p = 2f64.powi(-60);
        let n = 20_000;
        let mean = (0..n)
            .map(|_| sample_geometric(p, &mut s).unwrap() as f64 * p)
            .sum::<f64>()
            / n as f64;
        // scaled mean near 1 with sd 1/sqrt(n)
        assert!((mean - 1.0).abs() < 5.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn exponential_inversion_formula() {
        let x = exponential_from_uniform(1.0, (-1.0f64).exp());
        assert!((x - 1.0).abs() < 1e-15);
        assert!(sample_exponential(0.0, &mut RngStream::new(0, 0)).is_err());
        assert!(sample_exponential(-1.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn exponential_rate_two() {
        let mut s = RngStream::new(13, 0);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_exponential(2.0, &mut s).unwrap()).collect();
        let (mean, var, _) = mean_var(xs.iter().copied());
        assert!((mean - 0.5).abs() < 0.005);
        assert!((var - 0.25).abs() < 5.0 * (8.0 * 0.0625 / n as f64).sqrt());
        let tail = xs.iter().filter(|&&x| x > 1.0).count() as f64 / n as f64;
        let p = (-2.0f64).exp();
        assert!((tail - p).abs() < 5.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn hypo_levels_follow_tolerance() {
        let h = HypoSampler::new(&SeriesConfig::default()).unwrap();
        // smallest L with 2^{1-L} < 1e-15
        assert_eq!(h.levels, 51);
        assert_eq!(h.truncation_bias, 2f64.powi(-51));
        let capped = HypoSampler::new(&SeriesConfig::new(10, 0.0).unwrap()).unwrap();
        assert_eq!(capped.levels, 10);
    }

    #[test]
    fn hypo_moments() {
        let mut s = RngStream::new(17, 0);
        let cfg = SeriesConfig::default();
        let sampler = HypoSampler::new(&cfg).unwrap();
        let (mean, var, _) = mean_var((0..1_000_000).map(|_| sampler.sample(&mut s)));
        assert!((mean - 1.0).abs() < 0.005, "{mean}");
        assert!((var - 1.0 / 3.0).abs() < 0.005, "{var}");
    }

    #[test]
    fn hypo_truncation_depth_barely_moves_mean() {
        let levels = 6;
        let short = HypoSampler::new(&SeriesConfig::new(levels, 0.0).unwrap()).unwrap();
        let long = HypoSampler::new(&SeriesConfig::new(levels + 8, 0.0).unwrap()).unwrap();
        let n = 1_000_000;
        let mean = |h: &HypoSampler| {
            let mut s = RngStream::new(23, 0);
            (0..n).map(|_| h.sample(&mut s)).sum::<f64>() / n as f64
        };
        let delta = (mean(&long) - mean(&short)).abs();
        assert!(delta < 2f64.powi(1 - levels as i32), "{delta}");
    }

    #[test]
    fn identical_streams_give_identical_bits() {
        let cfg = SeriesConfig::default();
        let a: Vec<f64> = {
            let mut s = RngStream::new(99, 4);
            (0..100).map(|_| sample_hypo(&cfg, &mut s).unwrap()).collect()
        };
        let b: Vec<f64> = {
            let mut s = RngStream::new(99, 4);
            (0..100).map(|_| sample_hypo(&cfg, &mut s).unwrap()).collect()
        };
        assert_eq!(
            a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }
}
