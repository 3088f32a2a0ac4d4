//! SplitMix64, spelled out so other implementations can reproduce corpora
//! bit for bit.
//!
//! ```text
//! next():
//!     state = state + 0x9E3779B97F4A7C15            (wrapping)
//!     z = state
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//!     return z ^ (z >> 31)
//! below(n):  (next() as u128 * n as u128) >> 64     (n > 0)
//! unit():    (next() >> 11) * 2^-53                 (in [0, 1))
//! shuffle(v): for i = len-1 down to 1: swap(v[i], v[below(i+1)])
//! ```
//!
//! The initial state is the seed itself.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.below(i + 1);
            v.swap(i, j);
        }
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        self.shuffle(&mut p);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut r = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..5).map(|_| r.next_u64()).collect();
        assert_eq!(
            got,
            vec![
                6457827717110365317,
                3203168211198807973,
                9817491932198370423,
                4593380528125082431,
                16408922859458223821,
            ]
        );
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = SplitMix64::new(9);
        for n in 1..50 {
            for _ in 0..20 {
                assert!(r.below(n) < n);
            }
        }
        let u = r.unit();
        assert!((0.0..1.0).contains(&u));
    }

    #[test]
    fn permutation_is_a_permutation() {
        let mut p = SplitMix64::new(3).permutation(30);
        p.sort_unstable();
        assert_eq!(p, (0..30).collect::<Vec<_>>());
    }
}
