//! Keyed random streams for share generation.
//!
//! Each pixel gets its own stream derived from `(seed, pixel_index)`, so the
//! output does not depend on the order pixels are processed in. The
//! algorithm is fixed so other implementations can reproduce shares bit for
//! bit:
//!
//! ```text
//! mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!            return z ^ (z >> 31)                       (wrapping u64)
//! init:      state = seed ^ mix64(pixel_index)
//! next_u64:  state += 0x9E3779B97F4A7C15; return mix64(state)
//! below(b):  b <= 2^64: draw x until x >= (2^64 - b) mod b; return x mod b
//!            b >  2^64: x = (next_u64 << 64) | next_u64, same rule on 128 bits
//! ```
//!
//! Not a cryptographic generator.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct PixelRng {
    state: u64,
}

impl PixelRng {
    pub fn new(seed: u64, pixel_index: u64) -> Self {
        Self {
            state: seed ^ mix64(pixel_index),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform in `0..bound` for bounds wider than 64 bits.
    pub fn below_u128(&mut self, bound: u128) -> u128 {
        assert!(bound > 0);
        if let Ok(small) = u64::try_from(bound) {
            return u128::from(self.below(small));
        }
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let hi = u128::from(self.next_u64());
            let x = (hi << 64) | u128::from(self.next_u64());
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform `j`-subset of `0..n` as a bit mask, by partial Fisher-Yates:
    /// for `t` in `0..j`, swap slot `t` with slot `t + below(n - t)`; the
    /// first `j` slots are the subset.
    pub fn subset(&mut self, n: usize, j: usize) -> u64 {
        debug_assert!(j <= n && n <= 64);
        let mut rows: [u8; 64] = std::array::from_fn(|i| i as u8);
        let mut mask = 0u64;
        for t in 0..j {
            let s = t + self.below((n - t) as u64) as usize;
            rows.swap(t, s);
            mask |= 1 << rows[t];
        }
        mask
    }
}
