//! Hit-or-miss Monte Carlo volume estimation.
//!
//! Sample `i` of a run with seed `s` is a pure function of `(s, i)`, so the
//! estimate does not depend on how samples are sharded across threads.

use rayon::prelude::*;

use super::region::Point3;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const CHUNK: u64 = 1 << 16;

/// Counter-based generator: the SplitMix64 output function applied to
/// `seed + (counter + 1)·γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn u64_at(&self, counter: u64) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit_at(&self, counter: u64) -> f64 {
        (self.u64_at(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Three coordinates for sample `index`.
    pub fn point_at(&self, index: u64) -> [f64; 3] {
        let base = index.wrapping_mul(3);
        [
            self.unit_at(base),
            self.unit_at(base + 1),
            self.unit_at(base + 2),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point3,
    pub max: Point3,
}

impl BoundingBox {
    pub fn new(min: Point3, max: Point3) -> Self {
        Self { min, max }
    }

    pub fn unit_cube() -> Self {
        Self::new([0.0; 3], [1.0; 3])
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| (self.max[i] - self.min[i]).max(0.0)).product()
    }

    fn lerp(&self, u: [f64; 3]) -> Point3 {
        std::array::from_fn(|i| self.min[i] + u[i] * (self.max[i] - self.min[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub bounding_volume: f64,
}

/// Estimates the volume of `{p ∈ bbox : membership(p)}` from `n` uniform samples.
pub fn mc_volume<F>(membership: F, bbox: BoundingBox, n: u64, seed: u64) -> McEstimate
where
    F: Fn(Point3) -> bool + Sync,
{
    let rng = CounterRng::new(seed);
    let chunks = n.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            (start..end)
                .filter(|&i| membership(bbox.lerp(rng.point_at(i))))
                .count() as u64
        })
        .sum();

    let bounding_volume = bbox.volume();
    let (mean, std_error) = if n == 0 {
        (0.0, f64::INFINITY)
    } else {
        let p = hits as f64 / n as f64;
        (
            bounding_volume * p,
            bounding_volume * (p * (1.0 - p) / n as f64).sqrt(),
        )
    };
    McEstimate {
        mean,
        std_error,
        samples: n,
        seed,
        bounding_volume,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_predicates() {
        let all = mc_volume(|_| true, BoundingBox::unit_cube(), 1000, 1);
        assert_eq!(all.mean, 1.0);
        assert_eq!(all.std_error, 0.0);
        let none = mc_volume(|_| false, BoundingBox::unit_cube(), 1000, 1);
        assert_eq!(none.mean, 0.0);
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let ball = |p: Point3| p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= 1.0;
        let b = BoundingBox::new([-1.0; 3], [1.0; 3]);
        let a1 = mc_volume(ball, b, 200_000, 9);
        let a2 = mc_volume(ball, b, 200_000, 9);
        assert_eq!(a1, a2);
        assert_eq!(a1.mean.to_bits(), a2.mean.to_bits());
        let other = mc_volume(ball, b, 200_000, 10);
        assert_ne!(a1.mean, other.mean);
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        assert!((a1.mean - exact).abs() < 4.0 * a1.std_error);
    }

    #[test]
    fn std_error_formula() {
        let half = |p: Point3| p[0] < 0.5;
        let e = mc_volume(half, BoundingBox::new([0.0; 3], [2.0, 1.0, 1.0]), 10_000, 3);
        let p = e.mean / e.bounding_volume;
        let expected = e.bounding_volume * (p * (1.0 - p) / 10_000.0).sqrt();
        assert!((e.std_error - expected).abs() < 1e-15);
    }

    #[test]
    fn uniform_moments() {
        let rng = CounterRng::new(123);
        let n = 100_000u64;
        let mean = (0..n).map(|i| rng.unit_at(i)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005);
        assert!((0..n).all(|i| (0.0..1.0).contains(&rng.unit_at(i))));
    }
}
