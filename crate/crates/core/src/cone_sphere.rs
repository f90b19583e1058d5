//! Volume of the part of the offset unit ball `(x + k)² + y² + z² ≤ 1` that
//! lies inside the upright cone `z ≥ cot α · √(x² + y²)`, for `0 ≤ k ≤ 1`.
//!
//! In spherical coordinates about the origin (polar angle `φ` from the z-axis,
//! azimuth `θ`) the region is `φ ≤ α`, `ρ ≤ ρ_max(θ, φ)`. Integrating out `ρ`
//! and using the θ-symmetry gives the 2D form
//!
//! ```text
//! V = ∫₀^α ∫₀^(π/2) ((16/3) k² cos²θ sin³φ + (4/3)(1 − k²) sin φ)
//!                    · √(1 − k² + k² cos²θ sin²φ) dθ dφ
//! ```
//!
//! With `D(φ) = 1 − k² cos²φ` and the composite modulus
//! `κ(φ) = k sin φ / √D`, the θ-integral collapses into complete elliptic
//! integrals:
//!
//! ```text
//! V = (4/9) ∫₀^α (8k² sin³φ + 7(1 − k²) sin φ) √D E(κ) dφ
//!   − (16/9)(1 − k²) ∫₀^α sin φ √D K(κ) dφ
//! ```
//!
//! Expanding `E` and `K` in their Maclaurin series yields
//!
//! ```text
//! V = (2π/9) Σₙ cₙ k²ⁿ / (1 − 2n)
//!         ∫₀^α [8k² sin^(2n+3)φ + (1 − k²)(3 + 8n) sin^(2n+1)φ] D^(1/2 − n) dφ
//! ```
//!
//! whose `n = 0` term has a closed form, exact as `k → 0`.

use std::cell::{Cell, RefCell};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::elliptic::{self, AgmConfig, Modulus};
use crate::error::{Error, Result};
use crate::oracle::{integrate_adaptive, QuadratureResult};
use crate::volume::{validate_offset_and_angle, validate_tol, Method, VolumeResult, DEFAULT_BUDGET};

/// Below this offset the arcsine ratio in the zeroth-order term is replaced by
/// its limit `1 − cos α`.
pub const ZEROTH_SMALL_K: f64 = 1e-8;

/// Default cap on the number of series terms.
pub const DEFAULT_SERIES_TERMS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSphereParams {
    k: f64,
    alpha: f64,
}

impl ConeSphereParams {
    /// `k ∈ [0, 1]` shifts the sphere centre to `(−k, 0, 0)`; `alpha ∈ (1e-6, π/2]`.
    pub fn new(k: f64, alpha: f64) -> Result<Self> {
        validate_offset_and_angle(k, alpha)?;
        Ok(Self { k, alpha })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Per-term record of a series evaluation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesBreakdown {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Magnitude of the last included term, used as the truncation estimate.
    pub truncation_estimate: f64,
    pub n_used: usize,
    /// `n_max` was reached before a term fell below the requested tolerance.
    pub truncated: bool,
}

/// `1 − k² cos²φ`, written as `(1 − k²) + k² sin²φ`.
fn d_factor(k: f64, sin_phi: f64) -> f64 {
    (1.0 - k) * (1.0 + k) + k * k * sin_phi * sin_phi
}

/// `κ(φ) = k sin φ / √(1 − k² cos²φ)`. At `k = 1` the profile is identically 1
/// (its limit at `φ = 0` included).
pub fn modulus_profile(params: &ConeSphereParams, phi: f64) -> Modulus {
    let k = params.k;
    let s = phi.sin();
    let d = d_factor(k, s);
    if d == 0.0 {
        return Modulus::saturating(k);
    }
    Modulus::saturating(k * s / d.sqrt())
}

/// Positive root of `ρ² + 2kρ cos θ sin φ + k² − 1 = 0`: distance from the
/// origin to the sphere along direction `(θ, φ)`.
pub fn rho_max(params: &ConeSphereParams, theta: f64, phi: f64) -> f64 {
    let k = params.k;
    let b = k * theta.cos() * phi.sin();
    let root = ((1.0 - k) * (1.0 + k) + b * b).sqrt();
    if b > 0.0 {
        let denom = root + b;
        if denom == 0.0 {
            0.0
        } else {
            (1.0 - k) * (1.0 + k) / denom
        }
    } else {
        root - b
    }
}

fn quadrature_outcome(
    volume: f64,
    error_estimate: f64,
    evaluations: u64,
    converged: bool,
    tol: f64,
    method: Method,
) -> Result<VolumeResult> {
    if !converged {
        return Err(Error::Quadrature {
            value: volume,
            error_estimate,
            tolerance: tol,
            evaluations,
        });
    }
    Ok(VolumeResult {
        volume,
        method,
        error_estimate,
        evaluations,
    })
}

pub fn volume_semi_analytic(params: &ConeSphereParams, tol: f64) -> Result<VolumeResult> {
    volume_semi_analytic_with(params, tol, &AgmConfig::default())
}

/// 1D quadrature over `φ` with `E(κ(φ))` and `K(κ(φ))` from the AGM kernel.
pub fn volume_semi_analytic_with(
    params: &ConeSphereParams,
    tol: f64,
    cfg: &AgmConfig,
) -> Result<VolumeResult> {
    validate_tol(tol)?;
    let k = params.k;
    let k2 = k * k;
    let one_minus_k2 = (1.0 - k) * (1.0 + k);
    let kernel_error: RefCell<Option<Error>> = RefCell::new(None);

    let integrand = |phi: f64| -> f64 {
        let s = phi.sin();
        let d = d_factor(k, s);
        let root_d = d.sqrt();
        let kappa = modulus_profile(params, phi);
        let e_weight = 4.0 / 9.0 * (8.0 * k2 * s * s * s + 7.0 * one_minus_k2 * s) * root_d;
        if one_minus_k2 == 0.0 {
            // the K(κ) term carries a factor 1 − k²; κ ≡ 1 here and E(1) = 1
            return e_weight;
        }
        match elliptic::complete_ke(kappa, cfg) {
            Ok((big_k, big_e)) => e_weight * big_e - 16.0 / 9.0 * one_minus_k2 * s * root_d * big_k,
            Err(e) => {
                kernel_error.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let raw = integrate_adaptive(integrand, 0.0, params.alpha, tol, DEFAULT_BUDGET);
    if let Some(e) = kernel_error.into_inner() {
        return Err(e);
    }
    // AGM error propagated through weights bounded by 5 on [0, π/2]
    let kernel_part = 5.0 * params.alpha * cfg.tolerance;
    quadrature_outcome(
        raw.value,
        raw.error_estimate + kernel_part,
        raw.evaluations,
        raw.converged,
        tol,
        Method::SemiAnalytic,
    )
}

/// Nested adaptive quadrature of the symmetry-reduced 2D integrand, θ inner.
pub fn volume_quad_2d(params: &ConeSphereParams, tol: f64) -> Result<VolumeResult> {
    validate_tol(tol)?;
    let k = params.k;
    let k2 = k * k;
    let one_minus_k2 = (1.0 - k) * (1.0 + k);
    let alpha = params.alpha;
    let inner_tol = 0.5 * tol / alpha;

    let inner_evals = Cell::new(0u64);
    let inner_err = Cell::new(0.0f64);
    let inner_ok = Cell::new(true);

    let outer = |phi: f64| -> f64 {
        let s = phi.sin();
        let s2 = s * s;
        let r = integrate_adaptive(
            |theta: f64| {
                let c = theta.cos();
                let c2 = c * c;
                (16.0 / 3.0 * k2 * c2 * s2 * s + 4.0 / 3.0 * one_minus_k2 * s)
                    * (one_minus_k2 + k2 * c2 * s2).sqrt()
            },
            0.0,
            FRAC_PI_2,
            inner_tol,
            DEFAULT_BUDGET,
        );
        inner_evals.set(inner_evals.get() + r.evaluations);
        inner_err.set(inner_err.get().max(r.error_estimate));
        if !r.converged {
            inner_ok.set(false);
        }
        r.value
    };

    let raw: QuadratureResult = integrate_adaptive(outer, 0.0, alpha, 0.5 * tol, DEFAULT_BUDGET);
    let error_estimate = raw.error_estimate + alpha * inner_err.get();
    quadrature_outcome(
        raw.value,
        error_estimate,
        inner_evals.get(),
        raw.converged && inner_ok.get() && error_estimate <= tol,
        tol,
        Method::Quad2d,
    )
}

struct TermEval {
    value: f64,
    error_estimate: f64,
    evaluations: u64,
}

fn series_term_detail(params: &ConeSphereParams, n: usize, tol: f64) -> Result<TermEval> {
    validate_tol(tol)?;
    let k = params.k;
    let k2 = k * k;
    let one_minus_k2 = (1.0 - k) * (1.0 + k);
    let c_n = elliptic::series_coefficient(n as u32);
    let prefactor = 2.0 * PI / 9.0 * c_n * k2.powi(n as i32) / (1.0 - 2.0 * n as f64);
    if prefactor == 0.0 {
        return Ok(TermEval {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let linear = one_minus_k2 * (3.0 + 8.0 * n as f64);
    let exponent = n as i32;

    // sin^(2n+1)φ · D^(1/2 − n) evaluated as sin φ · √D · (sin²φ / D)ⁿ
    let integrand = |phi: f64| -> f64 {
        let s = phi.sin();
        let d = d_factor(k, s);
        if d == 0.0 {
            return 0.0;
        }
        let s2 = s * s;
        (8.0 * k2 * s2 + linear) * s * d.sqrt() * (s2 / d).powi(exponent)
    };

    let scale = prefactor.abs();
    let raw = integrate_adaptive(integrand, 0.0, params.alpha, tol / scale, DEFAULT_BUDGET);
    let value = prefactor * raw.value;
    let error_estimate = scale * raw.error_estimate;
    if !raw.converged {
        return Err(Error::Quadrature {
            value,
            error_estimate,
            tolerance: tol,
            evaluations: raw.evaluations,
        });
    }
    Ok(TermEval {
        value,
        error_estimate,
        evaluations: raw.evaluations,
    })
}

/// The `n`-th term of the series, its φ-integral computed to absolute
/// accuracy `tol` (after scaling by the term's prefactor).
pub fn series_term(params: &ConeSphereParams, n: usize, tol: f64) -> Result<f64> {
    series_term_detail(params, n, tol).map(|t| t.value)
}

/// Sums series terms in ascending `n` until `|Tₙ| < term_tol` or `n_max`
/// terms have been used. Hitting `n_max` is flagged in
/// [`SeriesBreakdown::truncated`], not treated as an error.
pub fn volume_series(
    params: &ConeSphereParams,
    term_tol: f64,
    n_max: usize,
) -> Result<(VolumeResult, SeriesBreakdown)> {
    validate_tol(term_tol)?;
    if n_max == 0 {
        return Err(Error::Domain("series needs n_max >= 1".into()));
    }

    let mut breakdown = SeriesBreakdown::default();
    let mut total = 0.0;
    let mut quad_error = 0.0;
    let mut evaluations = 0;
    let mut settled = false;

    for n in 0..n_max {
        let term = series_term_detail(params, n, term_tol)?;
        total += term.value;
        quad_error += term.error_estimate;
        evaluations += term.evaluations;
        breakdown.terms.push(term.value);
        breakdown.partial_sums.push(total);
        // every term past n = 0 carries k²ⁿ
        if term.value.abs() < term_tol || params.k == 0.0 {
            settled = true;
            break;
        }
    }

    let last = breakdown.terms.last().copied().unwrap_or(0.0).abs();
    breakdown.n_used = breakdown.terms.len();
    breakdown.truncation_estimate = last;
    breakdown.truncated = !settled;

    let result = VolumeResult {
        volume: total,
        method: Method::Series,
        error_estimate: if params.k == 0.0 { quad_error } else { last + quad_error },
        evaluations,
    };
    Ok((result, breakdown))
}

/// Closed form of the `n = 0` series term:
///
/// ```text
/// (π/9) [ (5 + k²) √(1 − k²)
///       − (5 + 5k² − 4k² cos²α) cos α √(1 − k² cos²α)
///       + (1 + 5k²) (arcsin k − arcsin(k cos α)) / k ]
/// ```
///
/// Exact for `k → 0`, where it tends to `(2π/3)(1 − cos α)`.
pub fn zeroth_order_approx(params: &ConeSphereParams) -> f64 {
    let k = params.k;
    let k2 = k * k;
    let c = params.alpha.cos();
    let one_minus_cos = 2.0 * (0.5 * params.alpha).sin().powi(2);
    let arcsine_ratio = if k < ZEROTH_SMALL_K {
        one_minus_cos
    } else {
        (k.asin() - (k * c).asin()) / k
    };
    let near = (5.0 + k2) * ((1.0 - k) * (1.0 + k)).sqrt();
    let far = (5.0 + 5.0 * k2 - 4.0 * k2 * c * c) * c * (1.0 - k2 * c * c).sqrt();
    PI / 9.0 * (near - far + (1.0 + 5.0 * k2) * arcsine_ratio)
}

/// Integral over `θ ∈ [0, 2π]` of the θ-odd part of the `ρ`-integrated
/// integrand at fixed `phi`:
/// `k³ cos θ sin²φ − k cos θ sin²φ − (4/3) k³ cos³θ sin⁴φ`. Should vanish.
pub fn odd_theta_terms_vanish_check(params: &ConeSphereParams, phi: f64, tol: f64) -> f64 {
    let k = params.k;
    if k == 0.0 {
        return 0.0;
    }
    let k3 = k * k * k;
    let s2 = phi.sin().powi(2);
    integrate_adaptive(
        |theta: f64| {
            let c = theta.cos();
            k3 * c * s2 - k * c * s2 - 4.0 / 3.0 * k3 * c * c * c * s2 * s2
        },
        0.0,
        2.0 * PI,
        tol,
        DEFAULT_BUDGET,
    )
    .value
}
