//! Seeded 64-bit linear congruential generator.
//!
//! State update `s <- s * 6364136223846793005 + 1442695040888963407 (mod 2^64)`
//! (Knuth's MMIX constants). Outputs use the top 53 bits, so a given seed
//! yields the same stream on every platform and in every language that
//! implements the same two lines.

use num_complex::Complex64;

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        let mut rng = Lcg64 { state: seed };
        // one warm-up step so that seed 0 does not emit 0.0 first
        rng.next_u64();
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Complex number with real and imaginary parts uniform on `[-1, 1)`.
    pub fn complex_unit_square(&mut self) -> Complex64 {
        let re = self.uniform(-1.0, 1.0);
        let im = self.uniform(-1.0, 1.0);
        Complex64::new(re, im)
    }

    /// `degree + 1` coefficients drawn with [`Lcg64::complex_unit_square`].
    pub fn polynomial(&mut self, degree: usize) -> Vec<Complex64> {
        (0..=degree).map(|_| self.complex_unit_square()).collect()
    }
}
