//! Deterministic pseudo-randomness.
//!
//! Verification runs must be reproducible from (config, seed), so we use a
//! tiny SplitMix64 stream instead of an OS entropy source. The same stream
//! picks modular-rank primes and torus evaluation points.

/// SplitMix64; passes through the full 2^64 state space, good enough for
/// picking primes and sample points.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in 0..bound (bound > 0), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform in lo..=hi.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs with this base set.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = crate::rat::powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = crate::rat::mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The next prime at or above n (n kept below 2^63 so modular products fit).
pub fn next_prime(mut n: u64) -> u64 {
    if n < 3 {
        return 3;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime_u64(n) {
        n += 2;
    }
    n
}

/// `count` distinct word-size primes drawn from the seeded stream, sorted.
/// Primes land in [2^59, 2^60) so pivots in modular elimination stay far from
/// the structure constants' small prime factors.
pub fn random_primes(rng: &mut SplitMix64, count: usize) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::with_capacity(count);
    while out.len() < count {
        let candidate = (1u64 << 59) + rng.below(1u64 << 59);
        let p = next_prime(candidate);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne
        assert!(!is_prime_u64(1_000_000_000_000));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn stream_is_reproducible() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let ps = random_primes(&mut a, 3);
        assert_eq!(ps.len(), 3);
        for &p in &ps {
            assert!(is_prime_u64(p));
        }
    }
}
