//! Exact law of the greedy stable set size, checked against brute-force
//! enumeration for tiny graphs and shown for larger ones.
//!
//! ```text
//! cargo run --release --example exact_distribution -- 65536
//! ```

use greedy_stable::exact::{default_k_max, exact_pk, exact_pk_shifted};
use greedy_stable::greedy::enumerate_exact;

fn main() -> greedy_stable::Result<()> {
    for n in 1..=4 {
        let law = enumerate_exact(n)?;
        let probs: Vec<String> = law.probs.iter().map(|(k, p)| format!("{k}: {p}")).collect();
        println!("n={n} by enumeration: {}", probs.join(", "));
    }

    let n: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1 << 16);
    let k_max = default_k_max(n);
    let p = exact_pk(n, k_max)?;
    let shifted = exact_pk_shifted(n, k_max)?;
    let gap = p
        .iter()
        .zip(&shifted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("\nn={n}, k <= {k_max}, both recurrences agree to {gap:.1e}");
    for (k, pk) in p.iter().enumerate().filter(|(_, &x)| x > 1e-10) {
        println!("  Pr[bk = {k:>2}] = {pk:.12}");
    }
    let mean: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
    println!("  E[bk] = {mean:.6}, log2 n = {:.6}", (n as f64).log2());
    Ok(())
}
