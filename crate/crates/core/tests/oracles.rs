//! Independent oracles for the constants and laws computed by the library.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use greedy_stable::exact::{default_k_max, exact_pk};
use greedy_stable::greedy::enumerate_exact;
use greedy_stable::hypo::{self, DEFAULT_C_RANGE};
use greedy_stable::sampling::HypoSampler;
use greedy_stable::{RngStream, SeriesConfig};

/// Rank of an `m x m` matrix over GF(2), rows as bit masks.
fn gf2_full_rank(mut rows: Vec<u32>) -> bool {
    let m = rows.len();
    for col in 0..m {
        let bit = 1u32 << col;
        let Some(pivot) = (col..m).find(|&r| rows[r] & bit != 0) else {
            return false;
        };
        rows.swap(col, pivot);
        let p = rows[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && *row & bit != 0 {
                *row ^= p;
            }
        }
    }
    true
}

#[test]
fn random_gf2_matrices_are_invertible_at_the_partial_product_rate() {
    const M: usize = 8;
    const TRIALS: u64 = 1_000_000;
    let mut stream = RngStream::new(2718, 0);
    let mut hits = 0u64;
    for _ in 0..TRIALS {
        let word = stream.next_u64();
        let rows = (0..M).map(|r| ((word >> (8 * r)) & 0xff) as u32).collect();
        hits += gf2_full_rank(rows) as u64;
    }
    let rate = hits as f64 / TRIALS as f64;
    let want = hypo::euler_partial_product(M);
    assert!((rate - want).abs() < 0.002, "{rate} vs {want}");
}

#[test]
fn partial_products_match_rational_arithmetic() {
    let one = BigRational::from_integer(BigInt::from(1));
    let mut prod = one.clone();
    for s in 1..=40usize {
        prod *= &one - BigRational::new(BigInt::from(1), BigInt::from(1u64) << s);
        let exact = prod.to_f64().unwrap();
        let got = hypo::euler_partial_product(s);
        assert!(((got - exact) / exact).abs() < 1e-15, "s={s}: {got} vs {exact}");
    }
    // the infinite product sits within its 40-factor tail
    let c = hypo::euler_constant();
    assert!((c - prod.to_f64().unwrap()).abs() < 2f64.powi(-39));
}

#[test]
fn enumeration_gives_exact_rationals() {
    let law = enumerate_exact(3).unwrap();
    assert_eq!(law.probs[&1], Ratio::new(1, 4));
    assert_eq!(law.probs[&2], Ratio::new(5, 8));
    assert_eq!(law.probs[&3], Ratio::new(1, 8));
    let total: Ratio<u64> = enumerate_exact(5).unwrap().probs.values().sum();
    assert_eq!(total, Ratio::from_integer(1));
}

#[test]
fn enumeration_matches_dp_for_small_n() {
    for n in 1..=5usize {
        let k = default_k_max(n as u64);
        let dp = exact_pk(n as u64, k).unwrap();
        let brute = enumerate_exact(n).unwrap().to_vec(k);
        for (a, b) in dp.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-12, "n={n}");
        }
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn density_moments_by_quadrature() {
    let cfg = SeriesConfig::default();
    let f = |x: f64| hypo::hypo_density(x, &cfg).unwrap();
    let m = |p: i32| simpson(|x| x.powi(p) * f(x), 0.0, 30.0, 60_000);
    assert!((m(0) - 1.0).abs() < 1e-8);
    assert!((m(1) - 1.0).abs() < 1e-8);
    assert!((m(2) - m(1).powi(2) - 1.0 / 3.0).abs() < 1e-7);
}

#[test]
fn cdf_matches_integrated_density() {
    let cfg = SeriesConfig::default();
    for i in 1..=20 {
        let x = 0.2 * i as f64;
        let quad = simpson(|t| hypo::hypo_density(t, &cfg).unwrap(), 0.0, x, 20_000);
        let cdf = hypo::hypo_cdf(x, &cfg).unwrap();
        assert!((cdf - quad).abs() < 1e-9, "x={x}: {cdf} vs {quad}");
    }
}

#[test]
fn log_density_is_a_change_of_variables() {
    let cfg = SeriesConfig::default();
    for y in [-1.0f64, 0.0, 1.0, 2.5] {
        let x = 2f64.powf(-y);
        let want = hypo::hypo_density(x, &cfg).unwrap() * x * std::f64::consts::LN_2;
        let got = hypo::log_hypo_density(y, &cfg).unwrap();
        assert!((got - want).abs() < 1e-10, "y={y}");
    }
    let mass = simpson(|y| hypo::log_hypo_density(y, &cfg).unwrap(), -10.0, 10.0, 4000);
    assert!((mass - 1.0).abs() < 1e-6);
}

#[test]
fn sampled_hypo_matches_cdf() {
    const N: usize = 200_000;
    let cfg = SeriesConfig::default();
    let sampler = HypoSampler::new(&cfg).unwrap();
    let mut stream = RngStream::new(99, 3);
    let mut xs: Vec<f64> = (0..N).map(|_| sampler.sample(&mut stream)).collect();
    xs.sort_by(f64::total_cmp);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = hypo::hypo_cdf(x, &cfg).unwrap();
            (f - i as f64 / N as f64).abs().max((f - (i + 1) as f64 / N as f64).abs())
        })
        .fold(0.0, f64::max);
    // 99.9% Kolmogorov quantile is 1.95 / sqrt(N)
    assert!(ks < 1.95 / (N as f64).sqrt(), "{ks}");
}

#[test]
fn limit_table_matches_sampled_offsets() {
    // log2(n) - bk = c  <=>  floor(log2(1/H)) = c at theta = 0
    const N: usize = 400_000;
    let cfg = SeriesConfig::default();
    let table = hypo::limit_table(0.0, &cfg, DEFAULT_C_RANGE).unwrap();
    let sampler = HypoSampler::new(&cfg).unwrap();
    let mut stream = RngStream::new(5, 5);
    let mut counts = std::collections::BTreeMap::<i32, u64>::new();
    for _ in 0..N {
        let c = (1.0 / sampler.sample(&mut stream)).log2().floor() as i32;
        *counts.entry(c).or_default() += 1;
    }
    for c in -3..=3 {
        let p = table.get(c).unwrap();
        let freq = counts.get(&c).copied().unwrap_or(0) as f64 / N as f64;
        let se = (p * (1.0 - p) / N as f64).sqrt();
        assert!((freq - p).abs() < 5.0 * se, "c={c}: {freq} vs {p}");
    }
}
