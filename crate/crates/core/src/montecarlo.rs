//! Monte Carlo estimate of node reliability.
//!
//! Trials are split into fixed chunks and chunk `i` draws from ChaCha8
//! stream `i` of the seed, so the estimate does not depend on how chunks are
//! scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::parallel::{map_ordered, Execution};

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    /// `|mean - exact| <= k * stderr`; a zero standard error demands equality.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr + f64::EPSILON
    }
}

fn run_chunk(g: &Graph, p: f64, seed: u64, chunk: u64, trials: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = g.order();
    let mut hits = 0;
    for _ in 0..trials {
        let mut alive = 0u64;
        for v in 0..n {
            if rng.gen::<f64>() < p {
                alive |= 1 << v;
            }
        }
        if g.is_connected_set(alive) {
            hits += 1;
        }
    }
    hits
}

/// Fraction of trials in which the surviving vertices (each kept with
/// probability `p`) are nonempty and induce a connected subgraph.
pub fn monte_carlo_estimate(
    g: &Graph,
    p: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let chunks: Vec<(u64, u64)> = (0..trials.div_ceil(CHUNK))
        .map(|i| (i, CHUNK.min(trials - i * CHUNK)))
        .collect();
    let successes: u64 = map_ordered(&chunks, exec, |&(i, t)| run_chunk(g, p, seed, i, t))
        .into_iter()
        .sum();
    let mean = successes as f64 / trials as f64;
    let stderr = (mean * (1.0 - mean) / trials as f64).sqrt();
    Ok(Estimate {
        trials,
        successes,
        mean,
        stderr,
    })
}
