//! The greedy stable-set heuristic on `G(n, 1/2)`.
//!
//! Vertices are scanned in order and a vertex joins the stable set when it has
//! no edge to any current member. Three routes produce the size `bk`:
//!
//! * [`greedy_run_graph`] samples the graph lazily, flipping one fair coin per
//!   (scanned vertex, current member) pair, and only until the first edge is
//!   found. Unexamined edges never influence the output, so they are never drawn.
//! * [`greedy_run_geometric`] jumps straight from one accepted vertex to the
//!   next: with `k` members, each later vertex is acceptable with probability
//!   `2^{-k}`, so the gap is `Geom(2^{-k})`.
//! * [`enumerate_exact`] averages over every graph and every scan order for
//!   tiny `n`, in exact rational arithmetic.
//!
//! Scanning in index order loses nothing against a uniformly random order:
//! the lazily sampled graph is exchangeable in its vertex labels.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ceil_log2;
use crate::rng::{CoinFlips, RngStream};
use crate::sampling::geometric_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub n: u64,
    pub seed: u64,
    pub stream_id: u64,
    /// Size of the stable set found.
    pub bk: u64,
    /// `N_0, ..., N_bk`: vertices after the `k`-th member that have no edge to
    /// the first `k` members. Recorded on request by the graph route only.
    pub survivors: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Graph,
    Geometric,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Graph => "graph",
            Method::Geometric => "geometric",
        }
    }
}

/// One run of the heuristic on a lazily sampled `G(n, 1/2)`.
///
/// Each scanned vertex flips coins against the members in order and stops at
/// the first edge; it joins when all `k` coins come up "no edge". With
/// `trace`, the number of zero-coins per vertex is histogrammed, which is
/// enough to recover every survivor count `N_j` (a vertex scanned after the
/// `j`-th member counts towards `N_j` exactly when its first `j` coins are zero).
pub fn greedy_run_graph(n: u64, stream: &mut RngStream, trace: bool) -> Result<RunRecord> {
    check_n(n)?;
    let (seed, stream_id) = (stream.seed(), stream.stream_id());
    let mut coins = CoinFlips::new(stream);
    let mut members: u32 = 0;
    let mut zero_runs: Vec<u64> = Vec::new();
    for _ in 0..n {
        let tails = coins.tails_run(members);
        if trace {
            if zero_runs.len() <= tails as usize {
                zero_runs.resize(tails as usize + 1, 0);
            }
            zero_runs[tails as usize] += 1;
        }
        if tails == members {
            members += 1;
        }
    }
    let bk = members as u64;
    let survivors = trace.then(|| {
        // N_j = #{vertices with at least j leading zero coins}; such a vertex was
        // necessarily scanned after the j-th member, and that member (j - 1 zeros)
        // is not counted
        let mut out = vec![0u64; bk as usize + 1];
        let mut acc = 0;
        for j in (0..=bk as usize).rev() {
            acc += zero_runs.get(j).copied().unwrap_or(0);
            out[j] = acc;
        }
        out
    });
    Ok(RunRecord {
        n,
        seed,
        stream_id,
        bk,
        survivors,
    })
}

/// Round cap for the geometric route, `ceil(2 log2 n) + 64`.
pub fn geometric_round_cap(n: u64) -> u64 {
    2 * ceil_log2(n) as u64 + 64
}

/// One run through the accepted-index process `i_{k+1} = i_k + Geom(2^{-k})`,
/// `i_0 = 0`; the size is the largest `k` with `i_k <= n`.
pub fn greedy_run_geometric(n: u64, stream: &mut RngStream) -> Result<RunRecord> {
    check_n(n)?;
    let cap = geometric_round_cap(n);
    let mut index: u64 = 0;
    let mut k: u64 = 0;
    while k < cap {
        let gap = geometric_unchecked(2f64.powi(-(k as i32)), stream);
        index = index.saturating_add(gap);
        if index > n {
            break;
        }
        k += 1;
    }
    Ok(RunRecord {
        n,
        seed: stream.seed(),
        stream_id: stream.stream_id(),
        bk: k,
        survivors: None,
    })
}

pub const ENUMERATION_MAX_N: usize = 5;

/// Exact law of `bk` over all `2^{C(n,2)}` graphs and all `n!` scan orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSizeLaw {
    pub n: usize,
    pub probs: BTreeMap<u64, Ratio<u64>>,
}

impl ExactSizeLaw {
    /// Probabilities indexed by size `0..=k_max` as doubles.
    pub fn to_vec(&self, k_max: usize) -> Vec<f64> {
        (0..=k_max as u64)
            .map(|k| {
                self.probs
                    .get(&k)
                    .map(|r| *r.numer() as f64 / *r.denom() as f64)
                    .unwrap_or(0.0)
            })
            .collect()
    }
}

pub fn enumerate_exact(n: usize) -> Result<ExactSizeLaw> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    if n > ENUMERATION_MAX_N {
        return Err(Error::EnumerationTooLarge {
            n,
            max: ENUMERATION_MAX_N,
        });
    }
    let mut pair_index = [[0usize; ENUMERATION_MAX_N]; ENUMERATION_MAX_N];
    let mut edges = 0;
    for u in 0..n {
        for v in u + 1..n {
            pair_index[u][v] = edges;
            pair_index[v][u] = edges;
            edges += 1;
        }
    }
    let orders = permutations(n);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for graph in 0u64..(1 << edges) {
        let adjacent = |u: usize, v: usize| graph >> pair_index[u][v] & 1 == 1;
        for order in &orders {
            let mut set: Vec<usize> = Vec::with_capacity(n);
            for &v in order {
                if set.iter().all(|&m| !adjacent(m, v)) {
                    set.push(v);
                }
            }
            *counts.entry(set.len() as u64).or_default() += 1;
        }
    }
    let total = (1u64 << edges) * orders.len() as u64;
    Ok(ExactSizeLaw {
        n,
        probs: counts
            .into_iter()
            .map(|(k, c)| (k, Ratio::new(c, total)))
            .collect(),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Occurrence counts of `bk` over independent runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalPmf {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub method: Method,
    pub counts: BTreeMap<u64, u64>,
}

impl EmpiricalPmf {
    /// Relative frequencies indexed by size `0..=k_max`.
    pub fn frequencies(&self, k_max: usize) -> Vec<f64> {
        (0..=k_max as u64)
            .map(|k| self.counts.get(&k).copied().unwrap_or(0) as f64 / self.trials as f64)
            .collect()
    }

    pub fn max_size(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        let s: u64 = self.counts.iter().map(|(k, c)| k * c).sum();
        s as f64 / self.trials as f64
    }
}

/// Runs `trials` independent executions, trial `i` on substream `i` of `seed`.
///
/// Counts are merged by addition, so the result does not depend on how the
/// trials are split across threads.
pub fn collect_empirical(n: u64, trials: u64, seed: u64, method: Method) -> Result<EmpiricalPmf> {
    check_n(n)?;
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    const CHUNK: u64 = 1 << 12;
    let chunks = trials.div_ceil(CHUNK);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local: BTreeMap<u64, u64> = BTreeMap::new();
            for id in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut stream = RngStream::new(seed, id);
                let run = match method {
                    Method::Graph => greedy_run_graph(n, &mut stream, false),
                    Method::Geometric => greedy_run_geometric(n, &mut stream),
                }
                .expect("n validated above");
                *local.entry(run.bk).or_default() += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    Ok(EmpiricalPmf {
        n,
        trials,
        seed,
        method,
        counts: merged,
    })
}

/// Average survivor trajectory `E[N_k]` over traced graph runs (entries past a
/// run's termination count as 0).
pub fn mean_survivors(n: u64, trials: u64, seed: u64) -> Result<Vec<f64>> {
    check_n(n)?;
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let sums = (0..trials)
        .into_par_iter()
        .map(|id| {
            let mut stream = RngStream::new(seed, id);
            greedy_run_graph(n, &mut stream, true)
                .expect("n validated above")
                .survivors
                .unwrap_or_default()
        })
        .reduce(Vec::new, |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    Ok(sums.into_iter().map(|s| s as f64 / trials as f64).collect())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n", "must be at least 1"))
    } else {
        Ok(())
    }
}
