//! Seedable, platform-independent pseudo-random number generation.
//!
//! Generated instances and solver runs must be reproducible bit-for-bit
//! across platforms and releases, so the generator algorithm is pinned here
//! rather than borrowed from an external crate whose stream could change
//! between versions. Two classic generators are used:
//!
//! * [`splitmix64`] — the 64-bit SplitMix step, used to expand a 64-bit seed
//!   into generator state and to derive per-instance seeds.
//! * [`Xoshiro256PlusPlus`] — Blackman & Vigna's xoshiro256++ as the main
//!   stream generator.
//!
//! The derived procedures are normative for reproducibility:
//!
//! * integers in `[0, bound)`: rejection sampling — draw `v: u64`, accept if
//!   `v >= 2^64 mod bound`, return `v % bound`;
//! * floats in `[0, 1)`: `(v >> 11) as f64 * 2^-53`;
//! * shuffles: Fisher–Yates from the top index down, `swap(i, next_below(i+1))`
//!   for `i = len-1 .. 1`.
//!
//! Any reimplementation following these steps reproduces identical instances
//! from identical seeds.

/// One step of SplitMix64: advances `state` by the golden-ratio increment and
/// returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256++ stream generator with 256 bits of state.
#[derive(Debug, Clone)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    /// Seeds the state with four consecutive SplitMix64 outputs.
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        Self {
            s: [
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
            ],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform float in `[0, 1)` from the top 53 bits of one draw.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by rejection sampling.
    ///
    /// # Panics
    /// Panics if `bound` is zero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below requires a positive bound");
        // 2^64 mod bound; draws below it would bias the remainder.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let v = self.next_u64();
            if v >= threshold {
                return v % bound;
            }
        }
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Uniformly chosen element reference.
    ///
    /// # Panics
    /// Panics if `items` is empty.
    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.next_below(items.len() as u64) as usize]
    }
}
