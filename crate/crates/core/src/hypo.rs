//! The limiting law `Hypo = Σ_{i>=1} Exp(2^i)` of the rescaled greedy set size.
//!
//! Everything here is built from one family of alternating series with
//! coefficients
//!
//! ```text
//! a_i = (-1)^{i-1} Π_{r=1}^{i-1} 1 / (2^r - 1),        Σ_i a_i = C,
//! ```
//!
//! where `C = Π_{s>=1} (1 - 2^{-s})`. In this notation
//!
//! ```text
//! density   f(x)     = (2 / C) Σ a_i 2^{i-1} e^{-2^i x}
//! survival  1 - F(x) = (1 / C) Σ a_i e^{-2^i x}
//! band      Pr[x/2 <= Hypo < x] = (1 / C) Σ a_i (e^{-2^{i-1} x} - e^{-2^i x})
//! ```
//!
//! For small arguments the leading terms are of order one while the sums are
//! many orders of magnitude smaller, so terms are formed and accumulated in
//! double-double arithmetic. Exponentials saturate to zero once their
//! argument passes the double underflow threshold (745).

use std::sync::OnceLock;

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::metrics::Cdf;
use crate::series::SeriesConfig;

/// Coefficient table length; `a_i` underflows long before this.
const TABLE_LEN: usize = 256;

struct Tables {
    /// `a_1 ..= a_TABLE_LEN` (index 0 is `a_1`).
    coeff: Vec<Dd>,
    c: Dd,
    c_inv: Dd,
    identity_residual: f64,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut coeff = Vec::with_capacity(TABLE_LEN);
        let mut a = Dd::ONE;
        for i in 1..=TABLE_LEN {
            coeff.push(if i % 2 == 1 { a } else { -a });
            // 2^i - 1 is exact in f64 for i <= 53; beyond that a is far below 1e-300
            a = a / (2f64.powi(i as i32) - 1.0);
        }
        let c = partial_product_dd(120);
        let c_inv = Dd::ONE / c;
        let sum = coeff.iter().fold(Dd::ZERO, |acc, &t| acc + t);
        // Σ a_i / C = F(∞) = 1
        let identity_residual = (sum * c_inv - Dd::ONE).abs().to_f64();
        debug_assert!(identity_residual < 1e-12);
        Tables {
            coeff,
            c,
            c_inv,
            identity_residual,
        }
    })
}

fn partial_product_dd(terms: usize) -> Dd {
    (1..=terms).fold(Dd::ONE, |acc, s| {
        acc * (Dd::ONE + (-2f64.powi(-(s as i32))))
    })
}

/// `|Σ a_i / C - 1|`, the residual of the identity `F(∞) = 1` checked when the
/// coefficient table is built.
pub fn series_identity_residual() -> f64 {
    tables().identity_residual
}

/// `Π_{s=1}^{terms} (1 - 2^{-s})`.
pub fn euler_partial_product(terms: usize) -> f64 {
    partial_product_dd(terms).to_f64()
}

/// `C = Π_{s>=1} (1 - 2^{-s})`, truncated at the first `S` with `2^{-S} < abs_tol`
/// (or at `max_terms`).
pub fn euler_constant_c(cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    let mut terms = 1;
    while terms < cfg.max_terms && 2f64.powi(-(terms as i32)) >= cfg.abs_tol {
        terms += 1;
    }
    Ok(euler_partial_product(terms))
}

/// Sums `term(i)` for `i = 1, 2, ...`, stopping after the first term with
/// magnitude below `abs_tol` or after `max_terms` terms.
fn alternating_sum(cfg: &SeriesConfig, mut term: impl FnMut(usize, Dd) -> Dd) -> (Dd, usize) {
    let t = tables();
    let limit = cfg.max_terms.min(TABLE_LEN);
    let mut acc = Dd::ZERO;
    let mut used = 0;
    for i in 1..=limit {
        let v = term(i, t.coeff[i - 1]);
        acc = acc + v;
        used = i;
        if v.abs().hi < cfg.abs_tol {
            break;
        }
    }
    (acc, used)
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("x", format!("must be nonnegative, got {x}")))
    }
}

/// `2^i x` scaled exactly (x is a double, the factor a power of two).
#[inline]
fn scaled(x: f64, i: usize) -> f64 {
    x * 2f64.powi(i as i32)
}

/// Density of `Hypo`.
pub fn hypo_density(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_x(x)?;
    cfg.validate()?;
    Ok(density_dd(x, cfg).to_f64())
}

fn density_dd(x: f64, cfg: &SeriesConfig) -> Dd {
    if x.is_infinite() {
        return Dd::ZERO;
    }
    let (sum, _) = alternating_sum(cfg, |i, a| {
        (a * Dd::exp_neg(scaled(x, i))).ldexp(i as i32 - 1)
    });
    (sum * tables().c_inv).ldexp(1)
}

/// `Pr[Hypo > x]`.
pub fn hypo_survival(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_x(x)?;
    cfg.validate()?;
    Ok(survival_dd(x, cfg).to_f64())
}

fn survival_dd(x: f64, cfg: &SeriesConfig) -> Dd {
    if x.is_infinite() {
        return Dd::ZERO;
    }
    let (sum, _) = alternating_sum(cfg, |i, a| a * Dd::exp_neg(scaled(x, i)));
    sum * tables().c_inv
}

/// `F(x) = Pr[Hypo <= x]` by termwise integration of the density series,
/// `F(x) = (1/C) Σ a_i (1 - e^{-2^i x})`.
pub fn hypo_cdf(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_x(x)?;
    cfg.validate()?;
    Ok(cdf_dd(x, cfg).to_f64().clamp(0.0, 1.0))
}

fn cdf_dd(x: f64, cfg: &SeriesConfig) -> Dd {
    if x >= 1.0 {
        // the survival series converges in a handful of terms here
        return Dd::ONE - survival_dd(x, cfg);
    }
    let (sum, _) = alternating_sum(cfg, |i, a| a * (Dd::ONE - Dd::exp_neg(scaled(x, i))));
    sum * tables().c_inv
}

/// `Pr[x/2 <= Hypo < x]`, computed directly so that narrow or far-out bands
/// keep their relative precision.
pub fn hypo_band(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_x(x)?;
    cfg.validate()?;
    Ok(band_dd(x, cfg).to_f64().max(0.0))
}

fn band_dd(x: f64, cfg: &SeriesConfig) -> Dd {
    if x.is_infinite() || x == 0.0 {
        return Dd::ZERO;
    }
    let (sum, _) = alternating_sum(cfg, |i, a| {
        let lo = scaled(x, i - 1);
        a * (Dd::exp_neg(lo) - Dd::exp_neg(2.0 * lo))
    });
    sum * tables().c_inv
}

/// `q_k = Pr[n / 2^{k+1} <= Hypo < n / 2^k]`, the limiting stand-in for
/// `Pr[bk = k]`.
pub fn q_k(n: u64, k: u32, cfg: &SeriesConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    cfg.validate()?;
    // n / 2^k, exact for every n below 2^53; huge ratios saturate inside exp_neg
    let x = n as f64 * 2f64.powi(-(k as i32));
    Ok(band_dd(x, cfg).to_f64().max(0.0))
}

/// Density of `log2(1 / Hypo)`:
/// `g(y) = (2 ln 2 / C) 2^{-y} Σ a_i 2^{i-1} e^{-2^{i-y}}`.
pub fn log_hypo_density(y: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !y.is_finite() {
        return Ok(0.0);
    }
    let (sum, _) = alternating_sum(cfg, |i, a| {
        (a * Dd::exp_neg((i as f64 - y).exp2())).ldexp(i as i32 - 1)
    });
    let scale = 2.0 * std::f64::consts::LN_2 * (-y).exp2();
    Ok((sum * tables().c_inv * scale).to_f64())
}

/// Normalizing constant used internally (full double-double precision).
pub fn euler_constant() -> f64 {
    tables().c.to_f64()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEntry {
    pub c: i32,
    pub probability: f64,
}

/// Limiting law of `bk - floor(log2 n)` along `n` with `frac(log2 n) = theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable {
    pub theta: f64,
    pub entries: Vec<LimitEntry>,
    /// `Σ c Pr[c]`; for `theta = 0` this is the expected deviation of `bk` from `log2 n`.
    pub mean_dev: f64,
    pub variance: f64,
    pub std_dev: f64,
}

impl LimitTable {
    pub fn get(&self, c: i32) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.c == c)
            .map(|e| e.probability)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

pub const DEFAULT_C_RANGE: (i32, i32) = (-8, 12);

/// Limit table on `c_range` (inclusive), which must cover `[-8, 12]`.
///
/// Entry `c` is `Pr[floor(log2(1 / Hypo) + theta) = c] = Pr[x/2 <= Hypo < x]`
/// with `x = 2^{theta - c}`.
pub fn limit_table(theta: f64, cfg: &SeriesConfig, c_range: (i32, i32)) -> Result<LimitTable> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::invalid("theta", format!("must lie in [0, 1), got {theta}")));
    }
    cfg.validate()?;
    let (c_min, c_max) = c_range;
    if c_min > DEFAULT_C_RANGE.0 || c_max < DEFAULT_C_RANGE.1 {
        return Err(Error::invalid(
            "c_range",
            format!("[{c_min}, {c_max}] must cover [-8, 12]"),
        ));
    }
    let entries: Vec<LimitEntry> = (c_min..=c_max)
        .map(|c| LimitEntry {
            c,
            probability: band_dd((theta - c as f64).exp2(), cfg).to_f64().max(0.0),
        })
        .collect();
    let mean_dev: f64 = entries.iter().map(|e| e.c as f64 * e.probability).sum();
    let second: f64 = entries
        .iter()
        .map(|e| (e.c as f64).powi(2) * e.probability)
        .sum();
    let variance = second - mean_dev * mean_dev;
    Ok(LimitTable {
        theta,
        entries,
        mean_dev,
        variance,
        std_dev: variance.sqrt(),
    })
}

/// `Hypo` as a CDF evaluator.
#[derive(Debug, Clone, Copy, Default)]
pub struct HypoLaw {
    pub cfg: SeriesConfig,
}

impl Cdf for HypoLaw {
    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            cdf_dd(t, &self.cfg).to_f64().clamp(0.0, 1.0)
        }
    }
}
