//! Seeded random streams.
//!
//! A stream is the ChaCha8 keystream of `rand_chacha::ChaCha8Rng`, keyed by
//! `ChaCha8Rng::seed_from_u64(seed)` and selected by a 64-bit stream id via
//! `set_stream`. ChaCha is counter based, so two streams with the same key
//! never overlap. Bounded integers are always drawn as `u64` so the output
//! does not depend on the platform's pointer width.
//!
//! Per-trial seeds come from [`trial_seed`], which runs the SplitMix64
//! finalizer over the master seed and the trial index.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream id used for the matching process.
pub const MATCHING_STREAM: u64 = 0;
/// Stream id used for colour choices inside a pipeline run.
pub const COLOUR_STREAM: u64 = 1;
/// Stream id used for pre-sampled graph generation.
pub const GRAPH_STREAM: u64 = 2;
/// Stream id for auxiliary sampling (perturbations, probes).
pub const AUX_STREAM: u64 = 3;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`: `mix64(master ^ mix64(index + γ))`
/// with γ the SplitMix64 increment.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
}

#[derive(Clone, Debug)]
pub struct DeterministicRandomSource {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl DeterministicRandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        DeterministicRandomSource {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform integer in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.inner.gen_range(0..bound)
    }

    /// Uniform index into a collection of length `len`.
    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Exact Bernoulli(`num / den`) trial.
    pub fn bernoulli_ratio(&mut self, num: u64, den: u64) -> bool {
        debug_assert!(num <= den && den > 0);
        self.below(den) < num
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }
}

impl RngCore for DeterministicRandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
