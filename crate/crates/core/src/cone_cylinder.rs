//! Volume inside the unit cylinder `x² + y² = 1`, above `z = 0` and below the
//! offset cone `z = cot α · √((x − k)² + y²)`, for `0 ≤ k ≤ 1`.
//!
//! Measuring the polar angle `φ` from the cone vertex's foot `T = (k, 0, 0)`,
//! the disk boundary sits at distance `R(φ) = √(1 − k² sin²φ) − k cos φ`, and
//!
//! ```text
//! V = (2 cot α / 3) ∫₀^π R³ dφ
//!   = (4 cot α / 3) ∫₀^(π/2) (3k² + 1 − 4k² sin²φ) √(1 − k² sin²φ) dφ
//!   = (4/9) cot α [(k² + 7) E(k) + 4(k² − 1) K(k)]
//! ```
//!
//! Each line is exposed as an independent evaluation route.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::elliptic::{self, AgmConfig, Modulus};
use crate::error::{Error, Result};
use crate::oracle::integrate_adaptive;
use crate::volume::{cot, validate_offset_and_angle, validate_tol, Method, VolumeResult, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCylinderParams {
    k: f64,
    alpha: f64,
}

impl ConeCylinderParams {
    /// `k ∈ [0, 1]` is the vertex offset along x, `alpha ∈ (1e-6, π/2]` the
    /// half-angle in radians.
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

/// Distance from `T = (k, 0, 0)` to the unit circle along direction `phi`.
pub fn radial_extent(params: &ConeCylinderParams, phi: f64) -> f64 {
    let k = params.k;
    let c = phi.cos();
    let root = ((1.0 - k * k) + k * k * c * c).sqrt();
    if c > 0.0 {
        // conjugate form, avoids cancelling √(…) against k cos φ
        let denom = root + k * c;
        if denom == 0.0 {
            0.0
        } else {
            (1.0 - k) * (1.0 + k) / denom
        }
    } else {
        root - k * c
    }
}

/// `√(1 − k² sin²φ)` written as `√((1 − k²) + k² cos²φ)`.
fn delta(k: f64, phi: f64) -> f64 {
    let c = phi.cos();
    ((1.0 - k) * (1.0 + k) + k * k * c * c).sqrt()
}

pub fn volume_closed(params: &ConeCylinderParams) -> Result<VolumeResult> {
    volume_closed_with(params, &AgmConfig::default())
}

pub fn volume_closed_with(params: &ConeCylinderParams, cfg: &AgmConfig) -> Result<VolumeResult> {
    let k = params.k;
    let k2 = k * k;
    let cot_a = cot(params.alpha);
    let m = Modulus::new(k)?;

    let (bracket, sensitivity) = if k == 1.0 {
        // (k² − 1) K(k) → 0 as k → 1, E(1) = 1
        (8.0, 8.0)
    } else {
        let (big_k, big_e) = elliptic::complete_ke(m, cfg)?;
        (
            (k2 + 7.0) * big_e + 4.0 * (k2 - 1.0) * big_k,
            (k2 + 7.0) + 4.0 * (1.0 - k2),
        )
    };
    let scale = 4.0 / 9.0 * cot_a;
    Ok(VolumeResult {
        volume: scale * bracket,
        method: Method::ClosedForm,
        error_estimate: scale * sensitivity * cfg.tolerance,
        evaluations: 0,
    })
}

fn finish(
    raw: crate::oracle::QuadratureResult,
    scale: f64,
    tol: f64,
    method: Method,
) -> Result<VolumeResult> {
    let volume = scale * raw.value;
    let error_estimate = scale.abs() * raw.error_estimate;
    if !raw.converged {
        return Err(Error::Quadrature {
            value: volume,
            error_estimate,
            tolerance: tol,
            evaluations: raw.evaluations,
        });
    }
    Ok(VolumeResult {
        volume,
        method,
        error_estimate,
        evaluations: raw.evaluations,
    })
}

/// `(2 cot α / 3) ∫₀^π R³ dφ` by adaptive quadrature.
pub fn volume_quad_r3(params: &ConeCylinderParams, tol: f64) -> Result<VolumeResult> {
    validate_tol(tol)?;
    let scale = 2.0 * cot(params.alpha) / 3.0;
    if scale == 0.0 {
        return Ok(VolumeResult {
            volume: 0.0,
            method: Method::QuadR3,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let raw = integrate_adaptive(
        |phi| radial_extent(params, phi).powi(3),
        0.0,
        PI,
        tol / scale,
        DEFAULT_BUDGET,
    );
    finish(raw, scale, tol, Method::QuadR3)
}

/// `(4 cot α / 3) ∫₀^(π/2) (3k² + 1 − 4k² sin²φ) √(1 − k² sin²φ) dφ`.
pub fn volume_quad_reduced(params: &ConeCylinderParams, tol: f64) -> Result<VolumeResult> {
    validate_tol(tol)?;
    let k2 = params.k * params.k;
    let scale = 4.0 * cot(params.alpha) / 3.0;
    if scale == 0.0 {
        return Ok(VolumeResult {
            volume: 0.0,
            method: Method::QuadReduced,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let raw = integrate_adaptive(
        |phi| {
            let s = phi.sin();
            (3.0 * k2 + 1.0 - 4.0 * k2 * s * s) * delta(params.k, phi)
        },
        0.0,
        FRAC_PI_2,
        tol / scale,
        DEFAULT_BUDGET,
    );
    finish(raw, scale, tol, Method::QuadReduced)
}

/// Integral over `[0, π]` of the part of `R³` that is odd about `φ = π/2`:
/// `−k³cos³φ − 3k cos φ + 3k³ cos φ sin²φ`. Should vanish.
pub fn odd_terms_vanish_check(params: &ConeCylinderParams, tol: f64) -> f64 {
    let k = params.k;
    if k == 0.0 {
        return 0.0;
    }
    let k3 = k * k * k;
    integrate_adaptive(
        |phi| {
            let (s, c) = phi.sin_cos();
            -k3 * c * c * c - 3.0 * k * c + 3.0 * k3 * c * s * s
        },
        0.0,
        PI,
        tol,
        DEFAULT_BUDGET,
    )
    .value
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn p(k: f64, alpha: f64) -> ConeCylinderParams {
        ConeCylinderParams::new(k, alpha).unwrap()
    }

    #[test]
    fn radial_extent_examples() {
        let q = p(0.5, 1.0);
        assert!((radial_extent(&q, 0.0) - 0.5).abs() < 1e-15);
        assert!((radial_extent(&q, PI) - 1.5).abs() < 1e-15);
        assert!((radial_extent(&q, FRAC_PI_2) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn radial_extent_at_unit_offset() {
        // vertex on the cylinder wall: no chord for directions pointing outward
        let q = p(1.0, 1.0);
        for i in 0..=50 {
            let phi = FRAC_PI_2 * f64::from(i) / 50.0;
            assert!(radial_extent(&q, phi).abs() < 1e-15);
        }
        assert!((radial_extent(&q, PI) - 2.0).abs() < 1e-15);
        assert!(radial_extent(&q, 2.0).abs() > 0.0);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ConeCylinderParams::new(1.5, 0.5).is_err());
        assert!(ConeCylinderParams::new(0.5, 0.0).is_err());
        assert!(volume_quad_r3(&p(0.5, 0.5), 0.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let v = volume_closed(&p(0.0, FRAC_PI_4)).unwrap();
        assert!((v.volume - 2.0 * PI / 3.0).abs() < 1e-14);
        let v = volume_closed(&p(1.0, FRAC_PI_4)).unwrap();
        assert!((v.volume - 32.0 / 9.0).abs() < 1e-14);
        assert_eq!(v.method, Method::ClosedForm);
    }

    #[test]
    fn quadrature_examples() {
        let v = volume_quad_r3(&p(0.0, FRAC_PI_4), 1e-10).unwrap();
        assert!((v.volume - 2.0 * PI / 3.0).abs() < 1e-10);
        let v = volume_quad_r3(&p(1.0, FRAC_PI_4), 1e-10).unwrap();
        assert!((v.volume - 32.0 / 9.0).abs() < 1e-9);
        let v = volume_quad_reduced(&p(0.0, FRAC_PI_4), 1e-10).unwrap();
        assert!((v.volume - 2.0 * PI / 3.0).abs() < 1e-10);
        let v = volume_quad_reduced(&p(1.0, FRAC_PI_3), 1e-10).unwrap();
        assert!((v.volume - 32.0 / 9.0 * cot(FRAC_PI_3)).abs() < 1e-9);
        assert!(v.evaluations >= 15);
    }

    #[test]
    fn routes_agree() {
        let q = p(0.5, FRAC_PI_3);
        let closed = volume_closed(&q).unwrap().volume;
        assert!((closed - volume_quad_r3(&q, 1e-10).unwrap().volume).abs() < 1e-9);
        let q = p(0.3, FRAC_PI_6);
        let closed = volume_closed(&q).unwrap().volume;
        assert!((closed - volume_quad_r3(&q, 1e-10).unwrap().volume).abs() < 1e-9);
        let q = p(0.7, FRAC_PI_4);
        let r3 = volume_quad_r3(&q, 1e-10).unwrap().volume;
        assert!((r3 - volume_quad_reduced(&q, 1e-10).unwrap().volume).abs() < 1e-9);
    }

    #[test]
    fn flat_cone_has_no_volume() {
        for k in [0.0, 0.4, 1.0] {
            let q = p(k, FRAC_PI_2);
            assert_eq!(volume_closed(&q).unwrap().volume, 0.0);
            assert_eq!(volume_quad_r3(&q, 1e-10).unwrap().volume, 0.0);
            assert_eq!(volume_quad_reduced(&q, 1e-10).unwrap().volume, 0.0);
        }
    }

    #[test]
    fn odd_part_vanishes() {
        assert_eq!(odd_terms_vanish_check(&p(0.0, 1.0), 1e-12), 0.0);
        assert!(odd_terms_vanish_check(&p(0.5, 1.0), 1e-12).abs() <= 1e-12);
        assert!(odd_terms_vanish_check(&p(1.0, 1.0), 1e-12).abs() <= 1e-12);
    }
}
