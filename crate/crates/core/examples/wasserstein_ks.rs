//! Wasserstein and Kolmogorov-Smirnov distances: geometric versus exponential,
//! and the scaled geometric sum versus its hypoexponential limit.
//!
//! ```text
//! cargo run --release --example wasserstein_ks
//! ```

use greedy_stable::exact::{gypo_sum_law, ScaledLattice};
use greedy_stable::hypo::{self, HypoLaw};
use greedy_stable::metrics::{ks_distance, w1_distance, w1_geom_exp};
use greedy_stable::SeriesConfig;

fn main() -> greedy_stable::Result<()> {
    println!("W1(Geom(p)/n, Exp(pn)):");
    for p in [0.5, 0.25, 0.1] {
        let row: Vec<String> = [1u64, 16, 256]
            .iter()
            .map(|&n| Ok(format!("n*W1(n={n}) = {:.6}", n as f64 * w1_geom_exp(p, n)?)))
            .collect::<greedy_stable::Result<_>>()?;
        println!("  p={p}: {}", row.join(", "));
    }

    let cfg = SeriesConfig::default();
    let limit = HypoLaw { cfg };
    let f_max = (1..10_000)
        .map(|i| hypo::hypo_density(i as f64 * 3e-4, &cfg))
        .collect::<greedy_stable::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let grid: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
    println!("\nscaled geometric sum with k levels versus the limit (f_max = {f_max:.6}):");
    println!("{:>3} {:>11} {:>11} {:>14}", "k", "KS", "W1", "2 sqrt(f W1)");
    for k in [6u32, 8, 10, 12, 14] {
        let lattice = ScaledLattice::new(gypo_sum_law(k, 20 << k)?, k);
        let ks = ks_distance(&lattice, &limit, &grid)?;
        let w1 = w1_distance(&lattice, &limit, (0.0, 20.0), 1e-3)?;
        println!("{k:>3} {ks:>11.4e} {w1:>11.4e} {:>14.4e}", 2.0 * (f_max * w1).sqrt());
    }
    Ok(())
}
