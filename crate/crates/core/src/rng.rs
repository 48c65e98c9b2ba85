//! Seeded synthetic data.
//!
//! The generator is SplitMix64 exactly as published by Steele, Lea and
//! Flood: `state += 0x9E3779B97F4A7C15`, then the two xor-shift-multiply
//! rounds and a final xor-shift. Reals are `(next_u64() >> 11) * 2^-53`.
//! Points draw their coordinates in order, coordinate 0 first, so any
//! implementation of this contract reproduces the same point streams.

use crate::geometry::UnitPoint;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0,1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n` (`n > 0`), by rejection so there is no modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn unit_point(&mut self, d: usize) -> UnitPoint {
        let coords: Vec<f64> = (0..d).map(|_| self.next_f64()).collect();
        UnitPoint::from_f64(&coords).expect("generator stays in [0,1)")
    }
}

/// `n` uniform points of `[0,1)^d`.
pub fn uniform_points(seed: u64, n: usize, d: usize) -> Vec<UnitPoint> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.unit_point(d)).collect()
}

/// `n` equally spaced points on the segment from `a` to `b` (endpoints included
/// when `n > 1`); all coordinates must stay in `[0,1)`.
pub fn collinear_points(a: &[f64], b: &[f64], n: usize) -> Vec<UnitPoint> {
    (0..n)
        .map(|i| {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            let c: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
            UnitPoint::from_f64(&c).expect("segment inside the unit cube")
        })
        .collect()
}
