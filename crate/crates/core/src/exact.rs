//! Exact law of the greedy stable-set size via sums of geometric variables.
//!
//! With `S_k = Geom(1) + Geom(1/2) + ... + Geom(2^{1-k})` (the index of the
//! `k`-th accepted vertex in an unbounded scan), the greedy set on `n`
//! vertices has fewer than `k` members exactly when `S_k > n`. Each
//! convolution below keeps the pmf of `S_k` on `[offset, cutoff]` and carries
//! `Pr[S_k > cutoff]` in a separate overflow bucket, so survival
//! probabilities at the cutoff are exact rather than truncated.

use serde::Serialize;

use crate::error::{Error, Result};

/// Masses below this are flushed to zero (and accounted in `flushed`).
const FLUSH_BELOW: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretePmf {
    /// Smallest support point represented in `mass`.
    pub offset: u64,
    /// `mass[j] = Pr[X = offset + j]` for `offset + j <= cutoff`.
    pub mass: Vec<f64>,
    /// `Pr[X > cutoff]`.
    pub overflow: f64,
    pub cutoff: u64,
    /// Total mass flushed to zero because it fell below the double range.
    pub flushed: f64,
}

impl DiscretePmf {
    pub fn point_mass(at: u64, cutoff: u64) -> Self {
        if at > cutoff {
            DiscretePmf {
                offset: at,
                mass: Vec::new(),
                overflow: 1.0,
                cutoff,
                flushed: 0.0,
            }
        } else {
            let mut mass = vec![0.0; (cutoff - at + 1) as usize];
            mass[0] = 1.0;
            DiscretePmf {
                offset: at,
                mass,
                overflow: 0.0,
                cutoff,
                flushed: 0.0,
            }
        }
    }

    /// `Pr[X = t]`; values above the cutoff are not resolved and report 0.
    pub fn prob(&self, t: u64) -> f64 {
        if t < self.offset {
            return 0.0;
        }
        self.mass
            .get((t - self.offset) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// `Pr[X <= cutoff]`.
    pub fn inside(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `Pr[X <= t]` for `t <= cutoff`; beyond the cutoff returns `1 - overflow`.
    pub fn cdf(&self, t: u64) -> f64 {
        if t < self.offset {
            return 0.0;
        }
        let upto = ((t - self.offset) as usize + 1).min(self.mass.len());
        self.mass[..upto].iter().sum()
    }

    /// Cumulative sums `Pr[X <= offset + j]` for every represented point.
    pub fn cumulative(&self) -> Vec<f64> {
        self.mass
            .iter()
            .scan(0.0, |acc, &m| {
                *acc += m;
                Some(*acc)
            })
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.inside() + self.overflow
    }
}

/// Law of `base + Geom(q)`, truncated at `cutoff` with an overflow bucket.
///
/// The pmf uses the running accumulator `a_t = (1-q) a_{t-1} + q Pr[base = t-1]`
/// and the new overflow adds `Σ_t Pr[base = t] (1-q)^{cutoff - t}` (evaluated by
/// Horner's rule) to the old one, since anything already above the cutoff stays
/// there.
pub fn convolve_geometric(base: &DiscretePmf, q: f64, cutoff: u64) -> Result<DiscretePmf> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::invalid("q", format!("must lie in (0, 1], got {q}")));
    }
    let stay = 1.0 - q;
    let offset = base.offset + 1;

    // Mass of base above the new cutoff (if the cutoff shrank) belongs in overflow.
    let mut overflow = base.overflow;
    let mut spill = 0.0;
    for (j, &m) in base.mass.iter().enumerate() {
        let t = base.offset + j as u64;
        if t > cutoff {
            overflow += m;
        } else {
            spill = spill * stay + m;
        }
    }
    // spill = Σ_{t <= cutoff} m_t (1-q)^{last - t}, where last is the top represented
    // point not above the cutoff; shift to exponent cutoff - t.
    let top = (base.offset + base.mass.len() as u64).saturating_sub(1).min(cutoff);
    if !base.mass.is_empty() && base.offset <= cutoff {
        overflow += spill * stay.powf((cutoff - top) as f64);
    }

    if offset > cutoff {
        return Ok(DiscretePmf {
            offset,
            mass: Vec::new(),
            overflow,
            cutoff,
            flushed: base.flushed,
        });
    }

    let len = (cutoff - offset + 1) as usize;
    let mut mass = Vec::with_capacity(len);
    let mut flushed = base.flushed;
    let mut acc = 0.0;
    for j in 0..len {
        // t = offset + j, so Pr[base = t - 1] = base.prob(base.offset + j)
        let prev = base.mass.get(j).copied().unwrap_or(0.0);
        acc = stay * acc + q * prev;
        if acc != 0.0 && acc < FLUSH_BELOW {
            flushed += acc;
            acc = 0.0;
        }
        mass.push(acc);
    }
    Ok(DiscretePmf {
        offset,
        mass,
        overflow,
        cutoff,
        flushed,
    })
}

/// Default largest `k` worth tabulating: past `2 log2 n` the probabilities
/// underflow.
pub fn default_k_max(n: u64) -> usize {
    2 * ceil_log2(n) as usize + 8
}

pub(crate) fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Survival split of `S_0, ..., S_{k_max+1}` at `cutoff`: for each stage the pair
/// (`Pr[S <= cutoff]`, `Pr[S > cutoff]`). `skip_first` drops the `Geom(1)` summand.
fn staged_split(cutoff: u64, k_max: usize, skip_first: bool) -> Result<Vec<(f64, f64)>> {
    let mut law = DiscretePmf::point_mass(0, cutoff);
    let mut stages = Vec::with_capacity(k_max + 2);
    stages.push((1.0, 0.0));
    for k in 1..=k_max + 1 {
        if !(skip_first && k == 1) {
            law = convolve_geometric(&law, 2f64.powi(1 - k as i32), cutoff)?;
        }
        stages.push((law.inside(), law.overflow));
    }
    Ok(stages)
}

/// `Pr[bk < k]` for `k = 0..=k_max + 1`, read off as the overflow `Pr[S_k > n]`.
pub fn size_below_probs(n: u64, k_max: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    Ok(staged_split(n, k_max, false)?
        .into_iter()
        .map(|(_, over)| over)
        .collect())
}

fn pk_from_stages(stages: &[(f64, f64)]) -> Vec<f64> {
    stages
        .windows(2)
        .map(|w| {
            let ((in0, over0), (in1, over1)) = (w[0], w[1]);
            // Pr[bk = k] = Pr[S_k <= n] - Pr[S_{k+1} <= n] = Pr[S_{k+1} > n] - Pr[S_k > n]
            let p = if in1 < 0.5 { in0 - in1 } else { over1 - over0 };
            p.max(0.0)
        })
        .collect()
}

/// `p_k = Pr[bk = k]` for `k = 0..=k_max` (index 0 is always 0 for `n >= 1`).
///
/// Differences are taken on whichever side of the split (`Pr[S_k <= n]` or
/// the overflow `Pr[S_k > n]`) is the smaller number, so small probabilities
/// keep their relative precision in both tails.
pub fn exact_pk(n: u64, k_max: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    Ok(pk_from_stages(&staged_split(n, k_max, false)?))
}

/// Same probabilities through `Pr[bk < k] = Pr[Geom(1/2) + ... + Geom(2^{1-k}) >= n]`,
/// which drops the deterministic `Geom(1) = 1` summand.
pub fn exact_pk_shifted(n: u64, k_max: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    // T >= n  <=>  T > n - 1
    let mut stages = staged_split(n - 1, k_max, true)?;
    // S_0 = 0 is not a shifted sum; Pr[bk < 0] = 0 regardless
    stages[0] = (1.0, 0.0);
    Ok(pk_from_stages(&stages))
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Law of `T = Geom(1/2) + Geom(1/4) + ... + Geom(2^{1-k})` (the integer part
/// of the normalized sum in the rewritten size formula), on `[0, cutoff]`.
pub fn gypo_sum_law(k: u32, cutoff: u64) -> Result<DiscretePmf> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    let mut law = DiscretePmf::point_mass(0, cutoff);
    for j in 1..k {
        law = convolve_geometric(&law, 2f64.powi(-(j as i32)), cutoff)?;
    }
    Ok(law)
}

/// CDF of `(n / 2^k) * Gypo`, where `Gypo = T / n`: since the `n` cancels,
/// this is `Pr[T / 2^k <= t]`, i.e. `Pr[T <= floor(t 2^k)]`.
///
/// The grid must be sorted and nonnegative; values past the DP cutoff read
/// `1 - overflow` (the cutoff is placed at the largest grid point).
pub fn gypo_scaled_cdf(n: u64, k: u32, grid: &[f64]) -> Result<Vec<f64>> {
    check_n(n)?;
    check_grid(grid)?;
    let Some(&t_max) = grid.last() else {
        return Ok(Vec::new());
    };
    let cutoff = (t_max * 2f64.powi(k as i32)).floor() as u64;
    let law = gypo_sum_law(k, cutoff)?;
    Ok(ScaledLattice::new(law, k).cdf_many(grid))
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::invalid("grid", "points must be nonnegative"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("grid", "points must be sorted"));
    }
    Ok(())
}

/// A lattice law `X = T / 2^k` backed by the pmf of the integer `T`.
#[derive(Debug, Clone)]
pub struct ScaledLattice {
    law: DiscretePmf,
    cumulative: Vec<f64>,
    scale: f64,
}

impl ScaledLattice {
    pub fn new(law: DiscretePmf, k: u32) -> Self {
        let cumulative = law.cumulative();
        ScaledLattice {
            law,
            cumulative,
            scale: 2f64.powi(k as i32),
        }
    }

    pub fn law(&self) -> &DiscretePmf {
        &self.law
    }

    /// Lattice spacing `2^{-k}`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.scale
    }

    fn cdf_index(&self, index: f64) -> f64 {
        // Pr[T <= index]
        if index < self.law.offset as f64 {
            return 0.0;
        }
        let j = (index - self.law.offset as f64) as u64;
        match self.cumulative.get(j as usize) {
            Some(&c) => c,
            None => 1.0 - self.law.overflow,
        }
    }

    /// `Pr[X <= t]`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.cdf_index((t * self.scale).floor())
    }

    /// `Pr[X < t]`.
    pub fn cdf_left(&self, t: f64) -> f64 {
        let s = t * self.scale;
        let below = if s.fract() == 0.0 { s - 1.0 } else { s.floor() };
        self.cdf_index(below)
    }

    pub fn cdf_many(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&t| self.cdf(t)).collect()
    }

    /// Atoms with positive mass inside `[lo, hi]`.
    pub fn atoms(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.law
            .mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(j, _)| (self.law.offset + j as u64) as f64 / self.scale)
            .filter(|&x| x >= lo && x <= hi)
            .collect()
    }
}
