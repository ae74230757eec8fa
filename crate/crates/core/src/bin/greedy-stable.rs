use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greedy_stable::commands::{
    self, parse_n_list, Artifact, ExperimentConfig, GridSpec, OutputFormat, DEFAULT_SEED,
    SEED_ENV,
};
use greedy_stable::greedy::Method;
use greedy_stable::hypo::DEFAULT_C_RANGE;
use greedy_stable::{Result, SeriesConfig};

#[derive(Parser)]
#[command(name = "greedy-stable", version, about = "Greedy stable sets in G(n, 1/2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Series {
    #[arg(long, default_value_t = SeriesConfig::default().max_terms)]
    max_terms: usize,
    #[arg(long, default_value_t = SeriesConfig::default().abs_tol)]
    abs_tol: f64,
}

impl Series {
    fn config(&self) -> Result<SeriesConfig> {
        SeriesConfig::new(self.max_terms, self.abs_tol)
    }
}

#[derive(Args)]
struct Sizes {
    #[arg(long, conflicts_with = "n_list")]
    n: Option<String>,
    /// Comma-separated sizes; `2^k` is accepted.
    #[arg(long)]
    n_list: Option<String>,
}

impl Sizes {
    fn resolve(&self, default: &str) -> Result<Vec<u64>> {
        parse_n_list(self.n.as_deref().or(self.n_list.as_deref()).unwrap_or(default))
    }
}

#[derive(Args)]
struct Run {
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "graph")]
    method: Method,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo distribution of the greedy stable set size.
    Simulate {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        out: Output,
    },
    /// Exact distribution of the greedy stable set size.
    ExactPk {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Distance between the exact distribution and its limit.
    Compare {
        #[command(flatten)]
        sizes: Sizes,
        /// Monte Carlo trials per n; 0 compares the exact law only.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        series: Series,
        #[command(flatten)]
        out: Output,
    },
    /// Limiting probabilities of log2(n) - bk = c.
    LimitTable {
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = DEFAULT_C_RANGE.0, allow_hyphen_values = true)]
        c_min: i32,
        #[arg(long, default_value_t = DEFAULT_C_RANGE.1, allow_hyphen_values = true)]
        c_max: i32,
        #[command(flatten)]
        series: Series,
        #[command(flatten)]
        out: Output,
    },
    /// Density of log2(1/H) on a uniform grid.
    DensityCsv {
        #[arg(long, default_value_t = GridSpec::default().y_min, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = GridSpec::default().y_max, allow_hyphen_values = true)]
        y_max: f64,
        #[arg(long, default_value_t = GridSpec::default().step)]
        step: f64,
        #[command(flatten)]
        series: Series,
        #[command(flatten)]
        out: Output,
    },
}

fn run(cli: Cli) -> Result<()> {
    let (artifact, out): (Artifact, Output) = match cli.command {
        Command::Simulate { sizes, trials, run, out } => {
            let cfg = ExperimentConfig {
                n_list: sizes.resolve("1024")?,
                trials,
                seed: run.seed,
                method: run.method,
                output_format: out.format,
                output_path: out.out.clone(),
                ..Default::default()
            };
            (commands::cmd_simulate(&cfg)?, out)
        }
        Command::ExactPk { sizes, k_max, out } => {
            let cfg = ExperimentConfig {
                n_list: sizes.resolve("1024")?,
                output_format: out.format,
                output_path: out.out.clone(),
                ..Default::default()
            };
            (commands::cmd_exact_pk(&cfg, k_max)?, out)
        }
        Command::Compare { sizes, trials, run, series, out } => {
            let cfg = ExperimentConfig {
                n_list: sizes.resolve("2^8,2^10,2^12,2^14,2^16,2^18,2^20")?,
                trials,
                seed: run.seed,
                method: run.method,
                series: series.config()?,
                output_format: out.format,
                output_path: out.out.clone(),
            };
            (commands::cmd_compare(&cfg)?, out)
        }
        Command::LimitTable { theta, c_min, c_max, series, out } => {
            let (_, art) =
                commands::cmd_limit_table(theta, (c_min, c_max), &series.config()?, out.format)?;
            (art, out)
        }
        Command::DensityCsv { y_min, y_max, step, series, out } => {
            let grid = GridSpec { y_min, y_max, step };
            (commands::cmd_density_csv(&grid, &series.config()?, out.format)?, out)
        }
    };
    artifact.emit(out.out.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
