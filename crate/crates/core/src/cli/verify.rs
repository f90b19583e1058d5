//! Cross-method consistency checks run by `conevol verify`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::cone_cylinder::{self, ConeCylinderParams};
use crate::cone_sphere::{self, ConeSphereParams};
use crate::elliptic::{self, AgmConfig, Modulus};
use crate::error::Result;
use crate::oracle::{self, integrate_adaptive, mc_volume};
use crate::volume::cot;

use super::linspace;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_deviation(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
            detail: String::new(),
        }
    }

    fn failed(name: &'static str, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            max_deviation: f64::INFINITY,
            tolerance,
            passed: false,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub fast: bool,
    pub seed: u64,
}

impl VerifyConfig {
    fn mc_samples(&self) -> u64 {
        if self.fast {
            200_000
        } else {
            10_000_000
        }
    }
}

const ALPHAS_CYL: [f64; 6] = [
    PI / 12.0,
    PI / 6.0,
    PI / 4.0,
    PI / 3.0,
    5.0 * PI / 12.0,
    FRAC_PI_2,
];
const ALPHAS_SPH: [f64; 5] = [PI / 12.0, PI / 6.0, PI / 4.0, PI / 3.0, FRAC_PI_2];

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Largest deviation of `closed` from both quadrature routes over the grid.
/// `closed` is a parameter so that a faulty formula can be fed through.
pub fn cone_cylinder_ladder<F>(ks: &[f64], alphas: &[f64], closed: F) -> Result<f64>
where
    F: Fn(&ConeCylinderParams) -> Result<f64> + Sync,
{
    let points: Vec<(f64, f64)> = ks.iter().flat_map(|&k| alphas.iter().map(move |&a| (k, a))).collect();
    let devs: Result<Vec<f64>> = points
        .par_iter()
        .map(|&(k, a)| {
            let p = ConeCylinderParams::new(k, a)?;
            let c = closed(&p)?;
            let r3 = cone_cylinder::volume_quad_r3(&p, 1e-12)?.volume;
            let red = cone_cylinder::volume_quad_reduced(&p, 1e-12)?.volume;
            Ok((c - r3).abs().max((c - red).abs()).max((r3 - red).abs()))
        })
        .collect();
    Ok(max_of(devs?))
}

pub fn cone_sphere_ladder(ks: &[f64], alphas: &[f64]) -> Result<f64> {
    let points: Vec<(f64, f64)> = ks.iter().flat_map(|&k| alphas.iter().map(move |&a| (k, a))).collect();
    let devs: Result<Vec<f64>> = points
        .par_iter()
        .map(|&(k, a)| {
            let p = ConeSphereParams::new(k, a)?;
            let semi = cone_sphere::volume_semi_analytic(&p, 1e-11)?.volume;
            let quad = cone_sphere::volume_quad_2d(&p, 1e-10)?.volume;
            let (series, _) = cone_sphere::volume_series(&p, 1e-12, 64)?;
            Ok((series.volume - semi).abs().max((semi - quad).abs()))
        })
        .collect();
    Ok(max_of(devs?))
}

fn check<F>(name: &'static str, tolerance: f64, run: F) -> CheckOutcome
where
    F: FnOnce() -> Result<f64>,
{
    match run() {
        Ok(dev) => CheckOutcome::from_deviation(name, dev, tolerance),
        Err(e) => CheckOutcome::failed(name, tolerance, e.to_string()),
    }
}

pub fn run_checks(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let agm = AgmConfig::default();
    let cyl_ks: Vec<f64> = if cfg.fast {
        vec![0.0, 0.3, 0.7, 1.0]
    } else {
        (0..=10).map(|i| f64::from(i) / 10.0).collect()
    };
    let sph_ks: &[f64] = if cfg.fast { &[0.0, 0.4, 0.8] } else { &[0.0, 0.2, 0.4, 0.6, 0.8] };
    let sph_alphas: &[f64] = if cfg.fast { &[PI / 6.0, FRAC_PI_2] } else { &ALPHAS_SPH };

    let mut out = vec![
        check("cone-cylinder ladder", 1e-8, || {
            cone_cylinder_ladder(&cyl_ks, &ALPHAS_CYL, |p| cone_cylinder::volume_closed(p).map(|v| v.volume))
        }),
        check("cone-cylinder k=0 limit", 1e-12, || {
            let devs: Result<Vec<f64>> = ALPHAS_CYL
                .iter()
                .map(|&a| {
                    let v = cone_cylinder::volume_closed(&ConeCylinderParams::new(0.0, a)?)?.volume;
                    Ok((v - 2.0 * PI / 3.0 * cot(a)).abs())
                })
                .collect();
            Ok(max_of(devs?))
        }),
        check("cone-cylinder k=1 limit", 1e-9, || {
            let devs: Result<Vec<f64>> = ALPHAS_CYL
                .iter()
                .map(|&a| {
                    let p = ConeCylinderParams::new(1.0, a)?;
                    let closed = cone_cylinder::volume_closed(&p)?.volume;
                    let quad = cone_cylinder::volume_quad_r3(&p, 1e-12)?.volume;
                    Ok((closed - 32.0 / 9.0 * cot(a)).abs().max((closed - quad).abs()))
                })
                .collect();
            Ok(max_of(devs?))
        }),
        check("E2 identity vs quadrature", 1e-11, || {
            let devs: Result<Vec<f64>> = [0.0, 0.01, 0.1, 0.5, 0.9, 0.999, 1.0]
                .iter()
                .map(|&m| {
                    let e2 = elliptic::e2(Modulus::new(m)?, &agm)?;
                    let q = integrate_adaptive(
                        |x: f64| {
                            let s = x.sin();
                            s * s * ((1.0 - m) * (1.0 + m) + m * m * x.cos().powi(2)).sqrt()
                        },
                        0.0,
                        FRAC_PI_2,
                        1e-14,
                        1_000_000,
                    );
                    Ok((e2 - q.value).abs())
                })
                .collect();
            Ok(max_of(devs?))
        }),
        check("odd-part integrals vanish", 1e-12, || {
            let mut worst: f64 = 0.0;
            for &k in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                let p = ConeCylinderParams::new(k, 1.0)?;
                worst = worst.max(cone_cylinder::odd_terms_vanish_check(&p, 1e-12).abs());
                let q = ConeSphereParams::new(k, FRAC_PI_2)?;
                for &phi in &[0.3, 0.9, FRAC_PI_2] {
                    worst = worst.max(cone_sphere::odd_theta_terms_vanish_check(&q, phi, 1e-12).abs());
                }
            }
            Ok(worst)
        }),
        check("cone-sphere ladder", 1e-7, || cone_sphere_ladder(sph_ks, sph_alphas)),
        check("cone-sphere k->0 series limit", 1e-9, || {
            let devs: Result<Vec<f64>> = ALPHAS_SPH
                .iter()
                .map(|&a| {
                    let (v, _) = cone_sphere::volume_series(&ConeSphereParams::new(1e-8, a)?, 1e-12, 64)?;
                    Ok((v.volume - 2.0 * PI / 3.0 * (1.0 - a.cos())).abs())
                })
                .collect();
            Ok(max_of(devs?))
        }),
        check("zeroth term closed form", 1e-10, || {
            let mut worst: f64 = 0.0;
            for &k in &[0.05, 0.3, 0.6, 0.95] {
                for &a in &[0.2, 0.8, 1.4] {
                    let p = ConeSphereParams::new(k, a)?;
                    let t0 = cone_sphere::series_term(&p, 0, 1e-12)?;
                    worst = worst.max((t0 - cone_sphere::zeroth_order_approx(&p)).abs());
                }
            }
            Ok(worst)
        }),
        check("half-ball invariance", 1e-7, || {
            let devs: Result<Vec<f64>> = [0.0, 0.25, 0.5, 0.75]
                .iter()
                .map(|&k| {
                    let v = cone_sphere::volume_semi_analytic(&ConeSphereParams::new(k, FRAC_PI_2)?, 1e-11)?;
                    Ok((v.volume - 2.0 * PI / 3.0).abs())
                })
                .collect();
            Ok(max_of(devs?))
        }),
        check("half-ball invariance k=1", 1e-6, || {
            let v = cone_sphere::volume_semi_analytic(&ConeSphereParams::new(1.0, FRAC_PI_2)?, 1e-11)?;
            Ok((v.volume - 2.0 * PI / 3.0).abs())
        }),
        check("elliptic kernel vs quadrature", 1e-11, || {
            let n = if cfg.fast { 40 } else { 200 };
            let devs: Result<Vec<f64>> = linspace(0.0, 0.999, n)
                .par_iter()
                .map(|&m| {
                    let (k, e) = elliptic::complete_ke(Modulus::new(m)?, &agm)?;
                    let kp2 = (1.0 - m) * (1.0 + m);
                    let d = |x: f64| (kp2 + m * m * x.cos().powi(2)).sqrt();
                    let qk = integrate_adaptive(|x| 1.0 / d(x), 0.0, FRAC_PI_2, 1e-14, 1_000_000);
                    let qe = integrate_adaptive(d, 0.0, FRAC_PI_2, 1e-14, 1_000_000);
                    Ok((k - qk.value).abs().max((e - qe.value).abs()))
                })
                .collect();
            Ok(max_of(devs?))
        }),
    ];

    // Monte Carlo: deviation measured in standard errors
    out.push(check("Monte Carlo concordance (sigmas)", 3.0, || {
        let n = cfg.mc_samples();
        let mut worst: f64 = 0.0;
        for (i, &(k, a)) in [(0.3, PI / 4.0), (0.8, PI / 3.0)].iter().enumerate() {
            let seed = cfg.seed.wrapping_add(i as u64);
            let p = ConeCylinderParams::new(k, a)?;
            let mc = mc_volume(|x| oracle::in_cone_cylinder_region(x, &p), oracle::cone_cylinder_box(&p), n, seed);
            let exact = cone_cylinder::volume_closed(&p)?.volume;
            worst = worst.max((mc.mean - exact).abs() / mc.std_error);
            let q = ConeSphereParams::new(k, a)?;
            let mc = mc_volume(|x| oracle::in_cone_sphere_region(x, &q), oracle::cone_sphere_box(&q), n, seed);
            let semi = cone_sphere::volume_semi_analytic(&q, 1e-10)?.volume;
            worst = worst.max((mc.mean - semi).abs() / mc.std_error);
        }
        Ok(worst)
    }));
    out
}

pub fn print_table<W: Write>(mut out: W, outcomes: &[CheckOutcome]) -> io::Result<()> {
    writeln!(out, "{:<34} {:>12} {:>10}  status", "check", "max dev", "tolerance")?;
    for c in outcomes {
        writeln!(
            out,
            "{:<34} {:>12.3e} {:>10.1e}  {}{}",
            c.name,
            c.max_deviation,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" },
            if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
        )?;
    }
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {} failed", outcomes.len(), failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form rebuilt from E and E₂ with the sign of the K-term in the
    /// E₂ reduction flipped.
    fn flipped_e2_closed(p: &ConeCylinderParams) -> Result<f64> {
        let k = p.k();
        let k2 = k * k;
        if k == 0.0 {
            return Ok(2.0 * PI / 3.0 * cot(p.alpha()));
        }
        let cfg = AgmConfig::default();
        let (big_k, big_e) = if k == 1.0 {
            (0.0, 1.0)
        } else {
            elliptic::complete_ke(Modulus::new(k)?, &cfg)?
        };
        let bad_e2 = (2.0 * k2 - 1.0) / (3.0 * k2) * big_e - (1.0 - k2) / (3.0 * k2) * big_k;
        Ok(4.0 * cot(p.alpha()) / 3.0 * ((3.0 * k2 + 1.0) * big_e - 4.0 * k2 * bad_e2))
    }

    #[test]
    fn ladder_detects_flipped_identity() {
        let ks = [0.0, 0.3, 0.7];
        let dev = cone_cylinder_ladder(&ks, &ALPHAS_CYL, flipped_e2_closed).unwrap();
        assert!(dev > 1e-3, "fault went unnoticed: {dev}");
        let good = cone_cylinder_ladder(&ks, &ALPHAS_CYL, |p| {
            cone_cylinder::volume_closed(p).map(|v| v.volume)
        })
        .unwrap();
        assert!(good <= 1e-8);
    }
}
