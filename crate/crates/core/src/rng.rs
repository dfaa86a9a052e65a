//! Seeded randomness shared by the generators and the Monte Carlo oracle.
//!
//! Everything is driven by SplitMix64 (Steele, Lea & Flood 2014): state
//! `x += 0x9E3779B97F4A7C15`, output `mix(x)`, seeded by setting `x = seed`.
//! Reals are drawn as `(next_u64 >> 11) · 2^-53` in `[0, 1)`, and integers
//! below `m` as `floor(u · m)`. Sub-stream `k` of a master seed starts from
//! the `k`-th output (0-based) of a SplitMix64 seeded with the master seed.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn seeded(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn below<R: RngCore>(rng: &mut R, bound: usize) -> usize {
    ((unit_f64(rng) * bound as f64) as usize).min(bound - 1)
}

/// Seed of sub-stream `index`, computed without stepping through the
/// earlier outputs.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    seeded(master.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA))).next_u64()
}

pub fn stream(master: u64, index: u64) -> SplitMix64 {
    seeded(stream_seed(master, index))
}
