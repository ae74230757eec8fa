//! Runs the greedy heuristic on random graphs with both samplers and prints
//! the empirical size distribution next to the exact one.
//!
//! ```text
//! cargo run --release --example greedy_simulation -- 1000 200000
//! ```

use greedy_stable::exact::exact_pk;
use greedy_stable::greedy::{collect_empirical, greedy_run_graph, mean_survivors, Method};
use greedy_stable::RngStream;

fn arg(i: usize, default: u64) -> u64 {
    std::env::args()
        .nth(i)
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

fn main() -> greedy_stable::Result<()> {
    let n = arg(1, 1000);
    let trials = arg(2, 100_000);
    let seed = 17;

    let run = greedy_run_graph(n, &mut RngStream::new(seed, 0), true)?;
    println!("one run on G({n}, 1/2): bk = {}", run.bk);
    println!("  surviving candidates N_k: {:?}", run.survivors.unwrap());

    let graph = collect_empirical(n, trials, seed, Method::Graph)?;
    let geo = collect_empirical(n, trials, seed, Method::Geometric)?;
    let top = graph.max_size().max(geo.max_size()) as usize;
    let exact = exact_pk(n, top)?;
    let (fg, fq) = (graph.frequencies(top), geo.frequencies(top));
    println!("\n{trials} trials per method");
    println!("{:>3} {:>10} {:>10} {:>10}", "k", "graph", "geometric", "exact");
    for k in 0..=top {
        if fg[k] > 0.0 || fq[k] > 0.0 {
            println!("{k:>3} {:>10.6} {:>10.6} {:>10.6}", fg[k], fq[k], exact[k]);
        }
    }
    println!("mean bk: graph {:.4}, geometric {:.4}", graph.mean(), geo.mean());

    let survivors = mean_survivors(n, 2000, seed)?;
    println!("\nE[N_k] over 2000 traced runs (expected about n / 2^k):");
    for (k, m) in survivors.iter().enumerate().take(8) {
        println!("  k={k}: {m:.2} vs {:.2}", n as f64 / 2f64.powi(k as i32));
    }
    Ok(())
}
