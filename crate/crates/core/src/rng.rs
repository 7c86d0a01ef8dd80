//! Counter-based deterministic randomness.
//!
//! Every random decision in the toolkit is a pure function of a 64-bit seed
//! and a small tuple of index words (component tag, level, vertex id, ...).
//! This keeps runs reproducible bit-for-bit regardless of iteration order or
//! thread count, and lets any sub-stage re-derive its own draws in isolation.

/// Component tags for deriving per-stage seeds from the root seed.
pub mod tag {
    pub const PATHS: u64 = 1;
    pub const HIERARCHY: u64 = 2;
    pub const BACKWARD: u64 = 3;
    pub const LARGE_BETA: u64 = 4;
    pub const FOLKLORE: u64 = 5;
    pub const SHORTCUT: u64 = 6;
    pub const GENERATE: u64 = 7;
    pub const VERIFY_SAMPLE: u64 = 8;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a seed with a tuple of index words into a uniform 64-bit value.
pub fn mix(seed: u64, words: &[u64]) -> u64 {
    let mut z = splitmix64(seed);
    for &w in words {
        z = splitmix64(z ^ w.wrapping_mul(GOLDEN));
    }
    z
}

/// Derive a sub-seed for a tagged component.
pub fn derive(seed: u64, component: u64) -> u64 {
    mix(seed, &[component])
}

/// Derive a sub-seed for a tagged component with an extra index (e.g. path id).
pub fn derive2(seed: u64, component: u64, index: u64) -> u64 {
    mix(seed, &[component, index])
}

/// Uniform draw in [0, 1) keyed by (seed, words).
pub fn unit(seed: u64, words: &[u64]) -> f64 {
    // 53 high bits -> dyadic rational in [0,1)
    (mix(seed, words) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A sequential stream view over the counter space, for generators that
/// need "the next draw" rather than an indexed one.
#[derive(Debug, Clone)]
pub struct Stream {
    seed: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.seed, &[self.counter]);
        self.counter += 1;
        v
    }

    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound) via rejection, bound > 0.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    pub fn next_range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }
}
