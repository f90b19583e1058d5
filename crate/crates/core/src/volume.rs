use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted cone half-angle. Volumes grow like `cot α` below it.
pub const MIN_ALPHA: f64 = 1e-6;

/// Default absolute tolerance for the quadrature-based methods.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default per-call integrand evaluation budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// How a volume was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    QuadR3,
    QuadReduced,
    Series,
    SemiAnalytic,
    #[serde(rename = "quad_2d")]
    Quad2d,
    MonteCarlo,
    ZerothApprox,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::ClosedForm,
        Method::QuadR3,
        Method::QuadReduced,
        Method::Series,
        Method::SemiAnalytic,
        Method::Quad2d,
        Method::MonteCarlo,
        Method::ZerothApprox,
    ];

    /// Tag used in emitted records.
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::QuadR3 => "quad_r3",
            Method::QuadReduced => "quad_reduced",
            Method::Series => "series",
            Method::SemiAnalytic => "semi_analytic",
            Method::Quad2d => "quad_2d",
            Method::MonteCarlo => "monte_carlo",
            Method::ZerothApprox => "zeroth_approx",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method tag {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeResult {
    pub volume: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Integrand calls, or samples for Monte Carlo.
    pub evaluations: u64,
}

/// `cot α`, exactly zero at `α = π/2`.
pub fn cot(alpha: f64) -> f64 {
    if alpha == FRAC_PI_2 {
        0.0
    } else {
        alpha.cos() / alpha.sin()
    }
}

pub(crate) fn validate_offset_and_angle(k: f64, alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("offset k must lie in [0, 1], got {k}")));
    }
    if !(alpha > MIN_ALPHA && alpha <= FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "cone half-angle must lie in ({MIN_ALPHA}, π/2], got {alpha}"
        )));
    }
    Ok(())
}

pub(crate) fn validate_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be positive, got {tol}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.tag()));
        }
        assert!("closed".parse::<Method>().is_err());
    }

    #[test]
    fn cot_vanishes_at_right_angle() {
        assert_eq!(cot(FRAC_PI_2), 0.0);
        assert_eq!(cot(90f64.to_radians()), 0.0);
        assert!((cot(std::f64::consts::FRAC_PI_4) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(validate_offset_and_angle(0.5, 0.3).is_ok());
        assert!(validate_offset_and_angle(1.0, FRAC_PI_2).is_ok());
        assert!(validate_offset_and_angle(-0.1, 0.3).is_err());
        assert!(validate_offset_and_angle(1.1, 0.3).is_err());
        assert!(validate_offset_and_angle(0.5, 0.0).is_err());
        assert!(validate_offset_and_angle(0.5, 1e-7).is_err());
        assert!(validate_offset_and_angle(0.5, 1.6).is_err());
        assert!(validate_offset_and_angle(f64::NAN, 0.3).is_err());
        assert!(validate_tol(0.0).is_err());
    }
}
