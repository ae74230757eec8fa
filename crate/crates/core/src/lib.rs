//! Greedy stable sets in `G(n, 1/2)` and the hypoexponential limit of their size.
//!
//! The crate simulates the scan-and-accept heuristic, computes the exact law of
//! the stable-set size by convolving geometric distributions, evaluates the
//! limiting law `Hypo = Σ_{i>=1} Exp(2^i)` through its alternating series, and
//! measures how close the two are in L1, Kolmogorov–Smirnov and Wasserstein-1
//! distance.
//!
//! ```
//! use greedy_stable::{exact, hypo, SeriesConfig};
//!
//! let n = 1 << 12;
//! let p = exact::exact_pk(n, exact::default_k_max(n)).unwrap();
//! let q: Vec<f64> = (0..p.len() as u32)
//!     .map(|k| hypo::q_k(n, k, &SeriesConfig::default()).unwrap())
//!     .collect();
//! let l1 = greedy_stable::metrics::l1_discrete(&p, &q);
//! assert!(l1 < 1e-3);
//! ```

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;

pub mod commands;
pub mod error;
pub mod exact;
pub mod greedy;
pub mod hypo;
pub mod metrics;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use series::SeriesConfig;
