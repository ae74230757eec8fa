//! Distances between one-dimensional laws.
//!
//! CDFs follow the strict-inequality convention of the KS and W1 formulas,
//! `Pr[X < t]`, so every evaluator reports both the right-continuous value
//! `Pr[X <= t]` and the left limit `Pr[X < t]`; at lattice atoms the two differ
//! and the supremum can sit on either side of a jump.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ScaledLattice;

/// A cumulative distribution function on the real line.
pub trait Cdf {
    /// `Pr[X <= t]`.
    fn cdf(&self, t: f64) -> f64;

    /// `Pr[X < t]`; equal to `cdf` for continuous laws.
    fn cdf_left(&self, t: f64) -> f64 {
        self.cdf(t)
    }

    /// Jump points within `[lo, hi]`, sorted ascending. Empty for continuous laws.
    fn atoms(&self, _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }

    /// True when the law has no continuous part, i.e. the CDF is constant
    /// between consecutive atoms.
    fn is_discrete(&self) -> bool {
        false
    }
}

impl<T: Cdf + ?Sized> Cdf for &T {
    fn cdf(&self, t: f64) -> f64 {
        (**self).cdf(t)
    }
    fn cdf_left(&self, t: f64) -> f64 {
        (**self).cdf_left(t)
    }
    fn atoms(&self, lo: f64, hi: f64) -> Vec<f64> {
        (**self).atoms(lo, hi)
    }
    fn is_discrete(&self) -> bool {
        (**self).is_discrete()
    }
}

impl Cdf for ScaledLattice {
    fn cdf(&self, t: f64) -> f64 {
        ScaledLattice::cdf(self, t)
    }
    fn cdf_left(&self, t: f64) -> f64 {
        ScaledLattice::cdf_left(self, t)
    }
    fn atoms(&self, lo: f64, hi: f64) -> Vec<f64> {
        ScaledLattice::atoms(self, lo, hi)
    }
    fn is_discrete(&self) -> bool {
        true
    }
}

/// A finitely supported law given by explicit atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    atoms: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteLaw {
    /// Atoms need not be sorted; masses must be nonnegative.
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.iter().any(|&(x, m)| !x.is_finite() || !(m >= 0.0)) {
            return Err(Error::invalid("points", "atoms must be finite with nonnegative mass"));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::with_capacity(pts.len());
        let mut cumulative: Vec<f64> = Vec::with_capacity(pts.len());
        let mut acc = 0.0;
        for (x, m) in pts {
            acc += m;
            if atoms.last() == Some(&x) {
                *cumulative.last_mut().unwrap() = acc;
            } else {
                atoms.push(x);
                cumulative.push(acc);
            }
        }
        Ok(DiscreteLaw { atoms, cumulative })
    }

    pub fn point_mass(at: f64) -> Self {
        DiscreteLaw {
            atoms: vec![at],
            cumulative: vec![1.0],
        }
    }

    /// Law of `origin + spacing * j` with `Pr[j] = probs[j]`.
    pub fn lattice(origin: f64, spacing: f64, probs: &[f64]) -> Result<Self> {
        DiscreteLaw::new(
            probs
                .iter()
                .enumerate()
                .map(|(j, &p)| (origin + spacing * j as f64, p)),
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

impl Cdf for DiscreteLaw {
    fn cdf(&self, t: f64) -> f64 {
        let idx = self.atoms.partition_point(|&a| a <= t);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    fn cdf_left(&self, t: f64) -> f64 {
        let idx = self.atoms.partition_point(|&a| a < t);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    fn atoms(&self, lo: f64, hi: f64) -> Vec<f64> {
        let start = self.atoms.partition_point(|&a| a < lo);
        let end = self.atoms.partition_point(|&a| a <= hi);
        self.atoms[start..end].to_vec()
    }

    fn is_discrete(&self) -> bool {
        true
    }
}

/// `Exp(rate)`, mean `1 / rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl Cdf for Exponential {
    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            -(-self.rate * t).exp_m1()
        }
    }
}

/// A continuous law given by a closure.
pub struct ContinuousCdf<F>(pub F);

impl<F: Fn(f64) -> f64> Cdf for ContinuousCdf<F> {
    fn cdf(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// `Σ_k |p_k - q_k| + |(1 - Σ p) - (1 - Σ q)|`.
///
/// The lists are aligned at index 0; a shorter list is padded with zeros.
/// Mass missing from a list (its deficit from 1) is treated as one extra atom
/// outside the listed range, so truncated tails are never silently dropped.
pub fn l1_discrete(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let body: f64 = (0..len).map(|k| (at(p, k) - at(q, k)).abs()).sum();
    let tail_p = 1.0 - p.iter().sum::<f64>();
    let tail_q = 1.0 - q.iter().sum::<f64>();
    body + (tail_p - tail_q).abs()
}

/// `sup_t |F(t) - G(t)|` over the grid and every atom of either law inside the
/// grid's span, checking both one-sided values at each point.
pub fn ks_distance(f: &impl Cdf, g: &impl Cdf, grid: &[f64]) -> Result<f64> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("grid", "points must be sorted"));
    }
    let (Some(&lo), Some(&hi)) = (grid.first(), grid.last()) else {
        return Ok(0.0);
    };
    let mut points = grid.to_vec();
    points.extend(f.atoms(lo, hi));
    points.extend(g.atoms(lo, hi));
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(points
        .iter()
        .map(|&t| {
            let right = (f.cdf(t) - g.cdf(t)).abs();
            let left = (f.cdf_left(t) - g.cdf_left(t)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max))
}

/// Boundary mass above which `w1_distance` logs a warning.
pub const W1_BOUNDARY_WARN: f64 = 1e-9;

/// `∫ |F(t) - G(t)| dt` over `domain`.
///
/// Breakpoints are a uniform grid at `resolution` merged with the atoms of
/// both laws. Between breakpoints a discrete CDF is constant, so a cell where
/// both laws are discrete is integrated exactly; otherwise Simpson's rule is
/// applied with the step side held at its value on the cell.
pub fn w1_distance(f: &impl Cdf, g: &impl Cdf, domain: (f64, f64), resolution: f64) -> Result<f64> {
    let (lo, hi) = domain;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("domain", format!("[{lo}, {hi}] is not a finite interval")));
    }
    if !(resolution > 0.0) {
        return Err(Error::invalid("resolution", "must be positive"));
    }
    let boundary = [
        f.cdf_left(lo),
        1.0 - f.cdf(hi),
        g.cdf_left(lo),
        1.0 - g.cdf(hi),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if boundary > W1_BOUNDARY_WARN {
        log::warn!("w1_distance: {boundary:.3e} of the mass lies outside [{lo}, {hi}]");
    }

    let cells = ((hi - lo) / resolution).ceil() as usize;
    let mut points: Vec<f64> = (0..=cells)
        .map(|i| (lo + i as f64 * resolution).min(hi))
        .collect();
    points.extend(f.atoms(lo, hi));
    points.extend(g.atoms(lo, hi));
    points.sort_by(f64::total_cmp);
    points.dedup();

    let (f_step, g_step) = (f.is_discrete(), g.is_discrete());
    let mut total = 0.0;
    let mut fa = f.cdf(points[0]);
    let mut ga = g.cdf(points[0]);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fb, gb) = (f.cdf(b), g.cdf(b));
        let h = b - a;
        if f_step && g_step {
            total += h * (fa - ga).abs();
        } else {
            // a right-continuous step CDF takes its value at `a` on the whole cell
            let m = 0.5 * (a + b);
            let fm = if f_step { fa } else { f.cdf(m) };
            let gm = if g_step { ga } else { g.cdf(m) };
            let fe = if f_step { fa } else { fb };
            let ge = if g_step { ga } else { gb };
            total += h / 6.0 * ((fa - ga).abs() + 4.0 * (fm - gm).abs() + (fe - ge).abs());
        }
        fa = fb;
        ga = gb;
    }
    Ok(total)
}

/// `W1(Geom(p) / n, Exp(p n))` by exact integration cell by cell.
///
/// On `s ∈ [(r-1)/n, r/n)` the geometric survival function is the constant
/// `(1-p)^{r-1}` while the exponential one is `e^{-p n s}`; the absolute
/// difference is integrated in closed form, splitting at the crossing point
/// when it falls inside the cell. Summation stops once the remaining tail
/// integrals of both laws are below `1e-15`.
pub fn w1_geom_exp(p: f64, n: u64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::invalid("p", format!("must lie in (0, 1/2], got {p}")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let log_stay = (-p).ln_1p();
    // ∫_a^b e^{-p u} du in the unscaled variable u = n s
    let exp_integral = |a: f64, b: f64| (-p * a).exp() * -(-p * (b - a)).exp_m1() / p;
    let mut total = 0.0;
    let mut r: u64 = 1;
    loop {
        let a = (r - 1) as f64;
        let b = r as f64;
        let geo = ((r - 1) as f64 * log_stay).exp();
        // e^{-p u} = geo at u* = (r-1) ln(1-p) / (-p) >= r - 1
        let cross = a * log_stay / -p;
        let cell = if cross >= b {
            exp_integral(a, b) - geo
        } else {
            (exp_integral(a, cross) - geo * (cross - a)) + (geo * (b - cross) - exp_integral(cross, b))
        };
        total += cell;
        // remaining tails: Σ_{j>r} (1-p)^{j-1} = (1-p)^r / p and ∫_r^∞ e^{-p u} du
        let geo_tail = (r as f64 * log_stay).exp() / p;
        let exp_tail = (-p * b).exp() / p;
        if geo_tail < 1e-15 && exp_tail < 1e-15 {
            break;
        }
        r += 1;
    }
    Ok(total / n as f64)
}

/// Summary of the distances between two laws on the integers `0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub l1: f64,
    pub tv: f64,
    pub ks: f64,
    pub w1: f64,
    pub grid_spec: String,
}

impl DistanceReport {
    /// Distances between integer-valued laws given as pmfs aligned at 0
    /// (deficits from 1 are treated as mass beyond the listed range).
    pub fn for_pmfs(p: &[f64], q: &[f64]) -> Self {
        let l1 = l1_discrete(p, q);
        let len = p.len().max(q.len());
        let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        let (mut cp, mut cq) = (0.0, 0.0);
        let (mut ks, mut w1) = (0.0f64, 0.0);
        for k in 0..len {
            cp += at(p, k);
            cq += at(q, k);
            let d = (cp - cq).abs();
            ks = ks.max(d);
            w1 += d;
        }
        DistanceReport {
            l1,
            tv: l1 / 2.0,
            ks,
            w1,
            grid_spec: format!("integer support 0..{}, tail deficits as one extra atom", len),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_examples() {
        assert_eq!(l1_discrete(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_eq!(l1_discrete(&[1.0, 0.0], &[0.0, 1.0]), 2.0);
        assert!((l1_discrete(&[0.5, 0.5], &[0.25, 0.75]) - 0.5).abs() < 1e-15);
        // deficit counts as mass: (1) vs (0.5 + 0.5 elsewhere)
        assert!((l1_discrete(&[1.0], &[0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_examples() {
        let a = DiscreteLaw::point_mass(0.0);
        let b = DiscreteLaw::point_mass(1.0);
        let grid = [0.0, 0.5, 1.0, 2.0];
        assert_eq!(ks_distance(&a, &a, &grid).unwrap(), 0.0);
        assert_eq!(ks_distance(&a, &b, &grid).unwrap(), 1.0);
        assert!(ks_distance(&a, &b, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn ks_sees_left_limits() {
        // lattice atom at 1 carries half the mass; compare with Exp(ln 2) whose
        // CDF at 1 is 1/2: the gap is 1/2 just below the atom and 0 at it.
        let lat = DiscreteLaw::new([(1.0, 0.5), (3.0, 0.5)]).unwrap();
        let e = Exponential { rate: 2f64.ln() };
        let ks = ks_distance(&lat, &e, &[0.0, 4.0]).unwrap();
        assert!((ks - 0.5).abs() < 1e-12, "{ks}");
    }

    #[test]
    fn w1_examples() {
        let a = DiscreteLaw::point_mass(0.25);
        let b = DiscreteLaw::point_mass(2.0);
        assert_eq!(w1_distance(&a, &a, (0.0, 3.0), 0.1).unwrap(), 0.0);
        assert!((w1_distance(&a, &b, (0.0, 3.0), 0.1).unwrap() - 1.75).abs() < 1e-12);
        let e1 = Exponential { rate: 1.0 };
        let e2 = Exponential { rate: 2.0 };
        let w = w1_distance(&e1, &e2, (0.0, 50.0), 1e-3).unwrap();
        assert!((w - 0.5).abs() < 1e-9, "{w}");
        assert!(w1_distance(&e1, &e2, (1.0, 0.0), 1e-3).is_err());
        assert!(w1_distance(&e1, &e2, (0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn geom_exp_argument_checks() {
        assert!(w1_geom_exp(0.6, 4).is_err());
        assert!(w1_geom_exp(0.0, 4).is_err());
        assert!(w1_geom_exp(0.5, 0).is_err());
    }

    #[test]
    fn geom_exp_matches_generic_integration() {
        let exact = w1_geom_exp(0.5, 1).unwrap();
        let probs: Vec<f64> = (1..=80).map(|t| 0.5f64.powi(t)).collect();
        let geom = DiscreteLaw::lattice(1.0, 1.0, &probs).unwrap();
        let e = Exponential { rate: 0.5 };
        let generic = w1_distance(&geom, &e, (0.0, 120.0), 1e-4).unwrap();
        assert!((exact - generic).abs() < 1e-6, "{exact} vs {generic}");
    }

    #[test]
    fn geom_exp_scales_as_one_over_n() {
        let base = w1_geom_exp(0.25, 1).unwrap();
        for n in [2u64, 16, 1024] {
            let w = w1_geom_exp(0.25, n).unwrap();
            assert!((w * n as f64 - base).abs() < 1e-12);
        }
    }

    #[test]
    fn pmf_report_invariants() {
        let p = [0.0, 0.25, 0.5, 0.25];
        let q = [0.1, 0.2, 0.4, 0.2];
        let r = DistanceReport::for_pmfs(&p, &q);
        assert_eq!(r.tv, r.l1 / 2.0);
        assert!(r.ks <= r.l1);
        assert!(r.w1 >= 0.0);
    }
}
