//! Monte Carlo estimates of trajectory entropy and hitting time.
//!
//! Sampling the chain from `i` until it first reaches `j` draws a trajectory
//! `T` with probability `p(T)`, so the sample mean of `−log p(T)` estimates
//! `H_ij` and the mean length estimates `E_i(τ_j)` (first return time when
//! `i == j`).
//!
//! Sample `k` uses its own SplitMix64 sub-stream (see [`crate::rng`]).
//! Samples are grouped into fixed-size chunks that are reduced in index
//! order, so results do not depend on the number of worker threads.

use rand_core::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{check_irreducible, StochasticMatrix};
use crate::error::{ChainError, Result};
use crate::rng;

pub const DEFAULT_STEP_CAP: u64 = 1_000_000;
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub length: u64,
    pub neg_log_prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncated;

/// Per-row cumulative distributions and `−log P_ij` tables.
#[derive(Debug, Clone)]
pub struct TrajectorySampler {
    n: usize,
    cumulative: Vec<f64>,
    neg_log: Vec<f64>,
}

impl TrajectorySampler {
    pub fn new(p: &StochasticMatrix) -> Self {
        let n = p.n();
        let mut cumulative = Vec::with_capacity(n * n);
        let mut neg_log = Vec::with_capacity(n * n);
        for row in p.rows() {
            let mut acc = 0.0;
            for &x in row {
                acc += x;
                cumulative.push(acc);
                neg_log.push(if x > 0.0 { -x.ln() } else { f64::INFINITY });
            }
        }
        Self {
            n,
            cumulative,
            neg_log,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn step<R: RngCore>(&self, from: usize, rng: &mut R) -> usize {
        let row = &self.cumulative[from * self.n..(from + 1) * self.n];
        let u = rng::unit_f64(rng);
        match row.iter().position(|&c| u < c) {
            Some(j) => j,
            // u landed above a row total that rounded below 1.
            None => row
                .iter()
                .enumerate()
                .rev()
                .find(|&(j, _)| self.neg_log[from * self.n + j].is_finite())
                .map(|(j, _)| j)
                .expect("row has positive mass"),
        }
    }

    /// Walks from `from` until the first visit to `to` at time >= 1.
    pub fn sample<R: RngCore>(
        &self,
        from: usize,
        to: usize,
        rng: &mut R,
        step_cap: u64,
    ) -> std::result::Result<Trajectory, Truncated> {
        let mut state = from;
        let mut neg_log_prob = 0.0;
        for length in 1..=step_cap {
            let next = self.step(state, rng);
            neg_log_prob += self.neg_log[state * self.n + next];
            state = next;
            if state == to {
                return Ok(Trajectory {
                    length,
                    neg_log_prob,
                });
            }
        }
        Err(Truncated)
    }
}

/// Convenience wrapper over [`TrajectorySampler::sample`].
pub fn sample_trajectory<R: RngCore>(
    p: &StochasticMatrix,
    from: usize,
    to: usize,
    rng: &mut R,
    step_cap: u64,
) -> std::result::Result<Trajectory, Truncated> {
    TrajectorySampler::new(p).sample(from, to, rng, step_cap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub step_cap: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            step_cap: DEFAULT_STEP_CAP,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub truncated: u64,
    pub seed: u64,
    pub step_cap: u64,
}

impl McEstimate {
    /// Truncated trajectories bias the mean low.
    pub fn unreliable(&self) -> bool {
        self.truncated > 0
    }

    /// `(mean − reference) / std_error`; zero when both the gap and the
    /// standard error vanish.
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = self.mean - reference;
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }
}

/// Estimates of `H_ij` and `E_i(τ_j)` from one shared set of trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McPair {
    pub entropy: McEstimate,
    pub hitting: McEstimate,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Self {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStats {
    entropy: Moments,
    length: Moments,
    truncated: u64,
}

fn run_chunk(sampler: &TrajectorySampler, from: usize, to: usize, cfg: &McConfig, chunk: u64) -> ChunkStats {
    let mut stats = ChunkStats::default();
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(cfg.samples);
    for k in start..end {
        let mut rng = rng::stream(cfg.seed, k);
        match sampler.sample(from, to, &mut rng, cfg.step_cap) {
            Ok(t) => {
                stats.entropy.push(t.neg_log_prob);
                stats.length.push(t.length as f64);
            }
            Err(Truncated) => stats.truncated += 1,
        }
    }
    stats
}

/// Simulates `cfg.samples` trajectories from `from` to `to`.
pub fn estimate(p: &StochasticMatrix, from: usize, to: usize, cfg: &McConfig) -> Result<McPair> {
    let n = p.n();
    for s in [from, to] {
        if s >= n {
            return Err(ChainError::StateOutOfRange { state: s, n });
        }
    }
    if cfg.samples == 0 {
        return Err(ChainError::ParameterOutOfRange("samples must be at least 1".into()));
    }
    if cfg.step_cap == 0 {
        return Err(ChainError::ParameterOutOfRange("step cap must be at least 1".into()));
    }
    if !check_irreducible(p) {
        return Err(ChainError::NotIrreducible);
    }

    let sampler = TrajectorySampler::new(p);
    let chunks = cfg.samples.div_ceil(CHUNK);
    let work = || -> Vec<ChunkStats> {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(&sampler, from, to, cfg, c))
            .collect()
    };
    let per_chunk = if cfg.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| ChainError::ParameterOutOfRange(format!("thread pool: {e}")))?
            .install(work)
    };

    let total = per_chunk
        .into_iter()
        .fold(ChunkStats::default(), |acc, c| ChunkStats {
            entropy: acc.entropy.merge(c.entropy),
            length: acc.length.merge(c.length),
            truncated: acc.truncated + c.truncated,
        });
    let make = |m: Moments| McEstimate {
        mean: m.mean,
        std_error: m.std_error(),
        samples: cfg.samples,
        truncated: total.truncated,
        seed: cfg.seed,
        step_cap: cfg.step_cap,
    };
    Ok(McPair {
        entropy: make(total.entropy),
        hitting: make(total.length),
    })
}

pub fn estimate_trajectory_entropy(
    p: &StochasticMatrix,
    from: usize,
    to: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    estimate(p, from, to, cfg).map(|e| e.entropy)
}

pub fn estimate_hitting_time(
    p: &StochasticMatrix,
    from: usize,
    to: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    estimate(p, from, to, cfg).map(|e| e.hitting)
}
