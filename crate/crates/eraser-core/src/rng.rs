//! Seeded random-number plumbing.
//!
//! The generator is ChaCha12 (`rand_chacha`), seeded with
//! [`SeedableRng::seed_from_u64`]. Reproducibility is promised within this
//! repository only: the same (seed, stream) pair always yields the same
//! draws. Partitioned work derives one generator per partition from the
//! same seed by setting the ChaCha stream number to the partition index, so
//! partition 0 coincides with the unpartitioned generator.

// f64 math through the trait so the no_std build finds it in libm.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Generator for a whole run. Stream 0 of the given seed.
pub fn seeded(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Generator for one partition of a run: same seed, stream = partition.
pub fn partition(seed: u64, partition: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(partition);
    rng
}

/// Uniform draw in [0, 1) with 53 random mantissa bits.
pub fn uniform_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw via Box-Muller. The cosine branch is returned and
/// the sine branch discarded, keeping the draw count per call fixed.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    // Shift into (0, 1] so the logarithm is finite.
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = uniform_f64(rng);
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}
