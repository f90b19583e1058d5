//! Uniform entry point: one (problem, method, k, α) evaluation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cone_cylinder::{self, ConeCylinderParams};
use crate::cone_sphere::{self, ConeSphereParams, SeriesBreakdown};
use crate::error::{Error, Result};
use crate::oracle::{self, mc_volume};
use crate::volume::{Method, VolumeResult, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    ConeCylinder,
    ConeSphere,
}

impl Problem {
    pub fn tag(self) -> &'static str {
        match self {
            Problem::ConeCylinder => "cone_cylinder",
            Problem::ConeSphere => "cone_sphere",
        }
    }

    pub fn supports(self, method: Method) -> bool {
        use Method::*;
        match self {
            Problem::ConeCylinder => matches!(method, ClosedForm | QuadR3 | QuadReduced | MonteCarlo),
            Problem::ConeSphere => {
                matches!(method, Series | SemiAnalytic | Quad2d | MonteCarlo | ZerothApprox)
            }
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cone_cylinder" => Ok(Problem::ConeCylinder),
            "cone_sphere" => Ok(Problem::ConeSphere),
            _ => Err(Error::Domain(format!("unknown problem tag {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub tol: f64,
    pub terms: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            terms: cone_sphere::DEFAULT_SERIES_TERMS,
            samples: 10_000_000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub result: VolumeResult,
    /// Set for Monte Carlo runs.
    pub seed: Option<u64>,
    /// Terms summed, for series runs.
    pub n_terms: Option<usize>,
    pub breakdown: Option<SeriesBreakdown>,
}

impl Evaluation {
    fn plain(result: VolumeResult) -> Self {
        Self {
            result,
            seed: None,
            n_terms: None,
            breakdown: None,
        }
    }

    /// Series stopped at its term cap without meeting the tolerance.
    pub fn truncated(&self) -> bool {
        self.breakdown.as_ref().is_some_and(|b| b.truncated)
    }
}

fn monte_carlo(est: oracle::McEstimate) -> Evaluation {
    Evaluation {
        result: VolumeResult {
            volume: est.mean,
            method: Method::MonteCarlo,
            error_estimate: est.std_error,
            evaluations: est.samples,
        },
        seed: Some(est.seed),
        n_terms: None,
        breakdown: None,
    }
}

pub fn evaluate(problem: Problem, method: Method, k: f64, alpha: f64, opts: &EvalOptions) -> Result<Evaluation> {
    if !problem.supports(method) {
        return Err(Error::Domain(format!("method {method} is not available for {problem}")));
    }
    match problem {
        Problem::ConeCylinder => {
            let params = ConeCylinderParams::new(k, alpha)?;
            match method {
                Method::ClosedForm => cone_cylinder::volume_closed(&params).map(Evaluation::plain),
                Method::QuadR3 => cone_cylinder::volume_quad_r3(&params, opts.tol).map(Evaluation::plain),
                Method::QuadReduced => {
                    cone_cylinder::volume_quad_reduced(&params, opts.tol).map(Evaluation::plain)
                }
                Method::MonteCarlo => Ok(monte_carlo(mc_volume(
                    |p| oracle::in_cone_cylinder_region(p, &params),
                    oracle::cone_cylinder_box(&params),
                    opts.samples,
                    opts.seed,
                ))),
                _ => unreachable!("filtered by Problem::supports"),
            }
        }
        Problem::ConeSphere => {
            let params = ConeSphereParams::new(k, alpha)?;
            match method {
                Method::Series => {
                    let (result, breakdown) = cone_sphere::volume_series(&params, opts.tol, opts.terms)?;
                    Ok(Evaluation {
                        result,
                        seed: None,
                        n_terms: Some(breakdown.n_used),
                        breakdown: Some(breakdown),
                    })
                }
                Method::SemiAnalytic => {
                    cone_sphere::volume_semi_analytic(&params, opts.tol).map(Evaluation::plain)
                }
                Method::Quad2d => cone_sphere::volume_quad_2d(&params, opts.tol).map(Evaluation::plain),
                Method::ZerothApprox => {
                    // first omitted term as the error indicator
                    let next = cone_sphere::series_term(&params, 1, opts.tol)?;
                    Ok(Evaluation::plain(VolumeResult {
                        volume: cone_sphere::zeroth_order_approx(&params),
                        method: Method::ZerothApprox,
                        error_estimate: next.abs(),
                        evaluations: 0,
                    }))
                }
                Method::MonteCarlo => Ok(monte_carlo(mc_volume(
                    |p| oracle::in_cone_sphere_region(p, &params),
                    oracle::cone_sphere_box(&params),
                    opts.samples,
                    opts.seed,
                ))),
                _ => unreachable!("filtered by Problem::supports"),
            }
        }
    }
}
