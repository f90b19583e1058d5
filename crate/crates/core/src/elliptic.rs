//! Complete elliptic integrals of the first and second kind.
//!
//! All functions take the *modulus* `k` (not the parameter `m = k²`):
//!
//! ```text
//! K(k) = ∫₀^(π/2) (1 − k² sin²φ)^(−1/2) dφ
//! E(k) = ∫₀^(π/2) (1 − k² sin²φ)^(1/2)  dφ
//! ```
//!
//! `K` and `E` come from the arithmetic-geometric mean of `(1, √(1−k²))`,
//! with `E` recovered from the AGM difference sequence
//! `E = K · (1 − Σₙ 2ⁿ⁻¹ cₙ²)`, `c₀ = k`, `cₙ = (aₙ₋₁ − bₙ₋₁)/2`.
//! The truncated Maclaurin series in `k²` are provided alongside.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};

/// Below this modulus `e2` switches from the E/K identity to its own
/// Maclaurin series; the identity divides by `3k²`.
pub const E2_SERIES_THRESHOLD: f64 = 1e-3;

/// Elliptic modulus `k ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain(format!(
                "elliptic modulus must lie in [0, 1], got {value}"
            )));
        }
        Ok(Self(value))
    }

    /// Clamps into `[0, 1]`. For moduli produced by formulas that can
    /// overshoot the interval by a rounding error. NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Self(0.0)
        } else {
            Self(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary modulus `√(1−k²)`, computed without cancellation near 1.
    pub fn complement(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmConfig {
    /// Absolute threshold on `|aₙ − bₙ|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl AgmConfig {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self> {
        if !(tolerance > 0.0) || max_iterations < 1 {
            return Err(Error::Domain(format!(
                "AGM config needs tolerance > 0 and max_iterations >= 1, got {tolerance}, {max_iterations}"
            )));
        }
        Ok(Self {
            tolerance,
            max_iterations,
        })
    }
}

impl Default for AgmConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-15,
            max_iterations: 40,
        }
    }
}

/// Both complete integrals from one AGM run. Requires `k < 1`.
pub fn complete_ke(m: Modulus, cfg: &AgmConfig) -> Result<(f64, f64)> {
    let k = m.value();
    if k >= 1.0 {
        return Err(Error::Domain("K(k) diverges at k = 1".into()));
    }
    let mut a = 1.0_f64;
    let mut b = m.complement();
    let mut weight = 0.5;
    let mut sum = weight * k * k;

    for _ in 0..cfg.max_iterations {
        if (a - b).abs() <= cfg.tolerance {
            let big_k = FRAC_PI_2 / a;
            return Ok((big_k, big_k * (1.0 - sum)));
        }
        let c = 0.5 * (a - b);
        let next_b = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = next_b;
        weight *= 2.0;
        sum += weight * c * c;
    }

    if (a - b).abs() <= cfg.tolerance {
        let big_k = FRAC_PI_2 / a;
        return Ok((big_k, big_k * (1.0 - sum)));
    }
    Err(Error::Convergence {
        iterations: cfg.max_iterations,
        gap: (a - b).abs(),
    })
}

/// Complete elliptic integral of the first kind. `DomainError` at `k = 1`.
pub fn complete_k(m: Modulus, cfg: &AgmConfig) -> Result<f64> {
    complete_ke(m, cfg).map(|(k, _)| k)
}

/// Complete elliptic integral of the second kind, `E(1) = 1`.
pub fn complete_e(m: Modulus, cfg: &AgmConfig) -> Result<f64> {
    if m.value() == 1.0 {
        return Ok(1.0);
    }
    complete_ke(m, cfg).map(|(_, e)| e)
}

/// `E₂(k) = ∫₀^(π/2) sin²φ √(1 − k² sin²φ) dφ`.
///
/// For `k ≥ E2_SERIES_THRESHOLD`:
/// `E₂ = (2k²−1)/(3k²) · E(k) + (1−k²)/(3k²) · K(k)`,
/// with the `K` term dropped at `k = 1`. Below the threshold the integrand's
/// binomial expansion is integrated term by term.
pub fn e2(m: Modulus, cfg: &AgmConfig) -> Result<f64> {
    let k = m.value();
    if k == 0.0 {
        return Ok(FRAC_PI_4);
    }
    if k < E2_SERIES_THRESHOLD {
        return Ok(e2_small_modulus(k));
    }
    let k2 = k * k;
    if k == 1.0 {
        return Ok(1.0 / 3.0);
    }
    let (big_k, big_e) = complete_ke(m, cfg)?;
    Ok((2.0 * k2 - 1.0) / (3.0 * k2) * big_e + (1.0 - k2) / (3.0 * k2) * big_k)
}

/// `Σₙ C(1/2, n) (−k²)ⁿ ∫₀^(π/2) sin^(2n+2)φ dφ`, summed until terms stop
/// changing the result.
fn e2_small_modulus(k: f64) -> f64 {
    let k2 = k * k;
    // binom(1/2, n)·(−k²)ⁿ and the Wallis integral of sin^(2n+2)
    let mut coeff = 1.0;
    let mut wallis = FRAC_PI_4;
    let mut total = wallis;
    for n in 0..32u32 {
        let nf = f64::from(n);
        coeff *= (nf - 0.5) / (nf + 1.0) * k2;
        wallis *= (2.0 * nf + 3.0) / (2.0 * nf + 4.0);
        let term = coeff * wallis;
        total += term;
        if term.abs() <= f64::EPSILON * total.abs() {
            break;
        }
    }
    total
}

/// Squared central binomial ratio `cₙ = ((2n)! / (2²ⁿ (n!)²))²`, via
/// `c₀ = 1`, `cₙ₊₁ = cₙ ((2n+1)/(2n+2))²`.
pub fn series_coefficient(n: u32) -> f64 {
    let mut c = 1.0;
    for j in 0..n {
        let r = f64::from(2 * j + 1) / f64::from(2 * j + 2);
        c *= r * r;
    }
    c
}

/// Iterator over `c₀, c₁, …` without recomputing the product each time.
pub fn series_coefficients() -> impl Iterator<Item = f64> {
    (0u32..).scan(1.0_f64, |c, j| {
        let current = *c;
        let r = f64::from(2 * j + 1) / f64::from(2 * j + 2);
        *c *= r * r;
        Some(current)
    })
}

/// `n_terms`-term truncation of `E(k) = (π/2) Σ cₙ k²ⁿ / (1 − 2n)`.
pub fn series_e(m: Modulus, n_terms: usize) -> Result<f64> {
    truncated_series(m, n_terms, |n, c| c / (1.0 - 2.0 * n as f64))
}

/// `n_terms`-term truncation of `K(k) = (π/2) Σ cₙ k²ⁿ`.
pub fn series_k(m: Modulus, n_terms: usize) -> Result<f64> {
    truncated_series(m, n_terms, |_, c| c)
}

fn truncated_series(m: Modulus, n_terms: usize, weight: impl Fn(usize, f64) -> f64) -> Result<f64> {
    if m.value() >= 1.0 {
        return Err(Error::Domain("Maclaurin series need k < 1".into()));
    }
    if n_terms == 0 {
        return Err(Error::Domain("series truncation needs at least one term".into()));
    }
    let k2 = m.value() * m.value();
    let mut power = 1.0;
    let mut total = 0.0;
    for (n, c) in series_coefficients().take(n_terms).enumerate() {
        total += weight(n, c) * power;
        power *= k2;
    }
    Ok(FRAC_PI_2 * total)
}
