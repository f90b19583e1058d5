//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance or the evaluation budget runs
//! out. Endpoints are never evaluated, so integrable endpoint singularities
//! are fine as long as the function is finite in the interior.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1], descending; odd indices are the 7 Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Evaluations spent per rule application.
pub const RULE_POINTS: u64 = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod estimate on [a, b] with the QUADPACK error heuristic.
fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut res_abs = kronrod.abs();
    let mut lower = [0.0; 7];
    let mut upper = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        lower[j] = f1;
        upper[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((lower[j] - mean).abs() + (upper[j] - mean).abs());
    }

    let width = half.abs();
    let value = kronrod * half;
    res_abs *= width;
    res_asc *= width;

    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }

    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` using at most
/// `budget` function evaluations.
///
/// Running out of budget is reported through `converged = false`; the best
/// estimate found so far is still returned.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, tol: f64, budget: u64) -> QuadratureResult
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(a <= b, "integration bounds out of order");
    if a == b {
        return QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if budget < RULE_POINTS {
        return QuadratureResult {
            value: 0.0,
            error_estimate: f64::INFINITY,
            evaluations: 0,
            converged: false,
        };
    }

    let first = gauss_kronrod(&mut f, a, b);
    let mut evaluations = RULE_POINTS;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    // segments too narrow to split further; they keep their error
    let mut frozen: Vec<Segment> = Vec::new();

    while total_error > tol && evaluations + 2 * RULE_POINTS <= budget {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid);
        let right = gauss_kronrod(&mut f, mid, worst.b);
        evaluations += 2 * RULE_POINTS;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // resum from scratch to avoid drift from the running updates
    let (value, error_estimate) = heap
        .iter()
        .chain(frozen.iter())
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));

    QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged: error_estimate <= tol,
    }
}
