//! Limiting distribution of `log2(n) - bk` for a chosen fractional part of
//! `log2 n`.
//!
//! ```text
//! cargo run --example limit_table -- 0.5
//! ```

use greedy_stable::hypo::{limit_table, DEFAULT_C_RANGE};
use greedy_stable::SeriesConfig;

fn main() -> greedy_stable::Result<()> {
    let theta: f64 = match std::env::args().nth(1) {
        Some(s) => s
            .parse()
            .map_err(|_| greedy_stable::Error::invalid("theta", format!("cannot parse `{s}`")))?,
        None => 0.0,
    };
    let table = limit_table(theta, &SeriesConfig::default(), DEFAULT_C_RANGE)?;
    println!("theta = {theta}");
    println!("{:>4}  {:>22}", "c", "lim Pr[bk = log2 n + c]");
    for e in table.entries.iter().filter(|e| e.probability > 1e-12) {
        println!("{:>4}  {:>22.15e}", e.c, e.probability);
    }
    println!("mean deviation  {:.15}", table.mean_dev);
    println!("variance        {:.15}", table.variance);
    println!("std deviation   {:.15}", table.std_dev);
    Ok(())
}
