//! Portable pseudo-random number generation.
//!
//! All randomized procedures in this crate draw from [`PortableRng`], a
//! fixed algorithm that is easy to reproduce in other languages:
//!
//! * generator: xoshiro256** (Blackman & Vigna), state seeded by expanding the
//!   64-bit seed with SplitMix64 (four successive outputs);
//! * `uniform()`: `(next_u64() >> 11) * 2^-53`, a double in `[0, 1)`.
//!
//! Every consumer documents the order in which it draws values, so a seed
//! identifies a dataset or a binning grid across implementations. The
//! algorithm identifier is [`RNG_ALGORITHM`].

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Version tag of the generator and the derived sampling procedures.
pub const RNG_ALGORITHM: &str = "xoshiro256starstar-splitmix64/v1";

#[derive(Debug, Clone)]
pub struct PortableRng {
    inner: Xoshiro256StarStar,
}

impl PortableRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` by `floor(uniform() * bound)`.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        let k = (self.uniform() * bound as f64) as usize;
        k.min(bound - 1)
    }

    /// Poisson variate by inversion with sequential search.
    ///
    /// Draws one uniform `u` and returns the smallest `k` with `F(k) > u`.
    pub fn poisson(&mut self, mean: f64) -> usize {
        let u = self.uniform();
        let mut p = (-mean).exp();
        let mut cdf = p;
        let mut k = 0usize;
        // The tail guard protects against cdf saturating below u through rounding.
        while u >= cdf && p > 0.0 {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
        }
        k
    }
}
