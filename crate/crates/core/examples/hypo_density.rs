//! Evaluates the hypoexponential limit law and writes plot data for the
//! density of `log2(1/H)`.
//!
//! ```text
//! cargo run --example hypo_density -- density.csv
//! ```

use greedy_stable::commands::{cmd_density_csv, GridSpec, OutputFormat};
use greedy_stable::hypo;
use greedy_stable::sampling::HypoSampler;
use greedy_stable::{RngStream, SeriesConfig};

fn main() -> greedy_stable::Result<()> {
    let cfg = SeriesConfig::default();
    println!("C = {:.20}", hypo::euler_constant_c(&cfg)?);
    println!("{:>6} {:>20} {:>20} {:>20}", "x", "density", "cdf", "survival");
    for x in [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        println!(
            "{x:>6} {:>20.12e} {:>20.12e} {:>20.12e}",
            hypo::hypo_density(x, &cfg)?,
            hypo::hypo_cdf(x, &cfg)?,
            hypo::hypo_survival(x, &cfg)?
        );
    }

    let sampler = HypoSampler::new(&cfg)?;
    let mut stream = RngStream::new(1, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| sampler.sample(&mut stream)).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    println!(
        "\nsampled with {} exponential stages (bias {:.1e}): mean {mean:.4}, variance {var:.4}",
        sampler.levels, sampler.truncation_bias
    );

    let art = cmd_density_csv(&GridSpec::default(), &cfg, OutputFormat::Csv)?;
    match std::env::args().nth(1) {
        Some(path) => {
            art.write_to(path.as_ref())?;
            println!("wrote density of log2(1/H) to {path}");
        }
        None => {
            let peak = hypo::log_hypo_density(0.5, &cfg)?;
            println!("g(0.5) = {peak:.12}; pass a path to write the full grid");
        }
    }
    Ok(())
}
