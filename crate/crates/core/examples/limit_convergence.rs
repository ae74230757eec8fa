//! Distance between the exact size law and its hypoexponential approximation
//! as `n` grows, optionally with a Monte Carlo column.
//!
//! ```text
//! cargo run --release --example limit_convergence -- 20000
//! ```

use greedy_stable::commands::{compare, ExperimentConfig};
use greedy_stable::greedy::Method;

fn main() -> greedy_stable::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let cfg = ExperimentConfig {
        n_list: (4..=10).map(|e| 1u64 << (2 * e)).chain([1000, 100_000]).collect(),
        trials,
        method: Method::Geometric,
        ..Default::default()
    };
    println!(
        "{:>8} {:>6} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "n", "theta", "l1", "ks", "w1", "l1 * n", "l1 (mc)"
    );
    for r in compare(&cfg)? {
        println!(
            "{:>8} {:>6.3} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.5} {:>11}",
            r.n,
            r.theta,
            r.l1_pk_qk,
            r.ks,
            r.w1,
            r.l1_pk_qk * r.n as f64,
            r.l1_mc.map_or("-".to_string(), |x| format!("{x:.4e}"))
        );
    }
    Ok(())
}
