//! Seeded randomness for reproducible runs.
//!
//! Every run owns a single MT19937 stream. All draws go through the
//! helpers here so the consumed stream is fully determined by the seed,
//! independent of the scalar precision in use.

use rand_mt::Mt19937GenRand32;

use crate::scalar::Scalar;

/// One MT19937 stream.
#[derive(Clone, Debug)]
pub struct Rng {
    mt: Mt19937GenRand32,
}

impl Rng {
    /// Seeds the generator from a 64-bit seed, keyed as the two 32-bit
    /// halves `[low, high]`.
    pub fn from_seed(seed: u64) -> Self {
        let key = [seed as u32, (seed >> 32) as u32];
        Rng {
            mt: Mt19937GenRand32::new_with_key(key.iter().copied()),
        }
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        self.mt.next_u32()
    }

    /// Uniform draw in `[0, 1)` with 53-bit resolution (two u32 words).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        let a = (self.next_u32() >> 5) as f64;
        let b = (self.next_u32() >> 6) as f64;
        (a * 67_108_864.0 + b) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn uniform<F: Scalar>(&mut self, lo: F, hi: F) -> F {
        lo + F::from_f64(self.next_f64()) * (hi - lo)
    }

    /// Uniform index in `[0, n)`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.next_u32() as usize % n
    }

    /// Uniform index in `[0, n)`, excluding `skip`. Requires `n >= 2`.
    pub fn index_excluding(&mut self, n: usize, skip: usize) -> usize {
        debug_assert!(n >= 2);
        loop {
            let i = self.index(n);
            if i != skip {
                return i;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }
}

/// Derives an independent sub-stream seed from a master seed and a tag
/// path, so folds, restarts, and grid cells are individually re-runnable.
///
/// Mixing function: a splitmix64 chain over `master` followed by each tag.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ splitmix64(tag));
    }
    state
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
