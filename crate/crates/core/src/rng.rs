//! 64-bit linear congruential generator shared by every seeded suite.
//!
//! `state ← state·6364136223846793005 + 1442695040888963407 (mod 2⁶⁴)`; a
//! uniform `f64` in `[0, 1)` is the top 53 bits of the new state times 2⁻⁵³.

pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `0..=max`, by rejection-free multiply-shift.
    pub fn below_inclusive(&mut self, max: u32) -> u32 {
        let span = u64::from(max) + 1;
        ((u128::from(self.next_u64() >> 32) * u128::from(span)) >> 32) as u32
    }
}
