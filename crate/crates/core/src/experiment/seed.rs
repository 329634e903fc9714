//! Sub-seed derivation.
//!
//! A sub-seed is `mix(mix(master) ^ (slot << 32 | repetition))`, where `mix`
//! is the SplitMix64 finalizer (a bijection on `u64`). Slot 0 belongs to the
//! environment and slot `k + 1` to the `k`-th agent. For a fixed master seed
//! distinct `(slot, repetition)` pairs therefore never collide.
//!
//! Each sub-seed feeds a ChaCha8 generator; independent roles under one
//! sub-seed use distinct ChaCha stream ids (see [`Stream`]).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn seed_schedule(master: u64, slot: u32, repetition: u32) -> u64 {
    splitmix64(splitmix64(master) ^ (u64::from(slot) << 32 | u64::from(repetition)))
}

/// Sub-seed of the environment for a repetition.
pub fn environment_seed(master: u64, repetition: u32) -> u64 {
    seed_schedule(master, 0, repetition)
}

/// Sub-seed of agent `index` (0-based) for a repetition.
pub fn agent_seed(master: u64, index: u32, repetition: u32) -> u64 {
    seed_schedule(master, index + 1, repetition)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Hidden means of the instance (environment seed).
    Instance = 0,
    /// Monte Carlo scoring of paths for exact regret (environment seed).
    RegretScoring = 1,
    /// Feedback noise seen by one agent (agent seed).
    Feedback = 2,
    /// Random source/target choice (master seed).
    Endpoints = 3,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
