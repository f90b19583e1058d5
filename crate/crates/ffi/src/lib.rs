//! C ABI over `conevol`.
//!
//! Every fallible entry point returns a [`ConevolStatus`] and writes its result
//! through an out-pointer. Series evaluations are returned as an opaque
//! [`ConevolSeries`] handle that must be released with
//! [`conevol_series_free`]. The message for the most recent failure on the
//! calling thread is available from [`conevol_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conevol::cone_sphere::{self, ConeSphereParams, SeriesBreakdown};
use conevol::elliptic::{self, AgmConfig, Modulus};
use conevol::oracle::{self, mc_volume};
use conevol::{ConeCylinderParams, Error, EvalOptions, Method, Problem, VolumeResult};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConevolStatus {
    Ok = 0,
    NullPointer = 1,
    DomainError = 2,
    ConvergenceError = 3,
    /// The result was filled with the best available estimate.
    QuadratureError = 4,
    /// Series hit its term cap; the result is still filled.
    TruncationWarning = 5,
    IndexOutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConevolProblem {
    ConeCylinder = 0,
    ConeSphere = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConevolMethod {
    ClosedForm = 0,
    QuadR3 = 1,
    QuadReduced = 2,
    Series = 3,
    SemiAnalytic = 4,
    Quad2d = 5,
    MonteCarlo = 6,
    ZerothApprox = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConevolVolume {
    pub volume: f64,
    pub error_estimate: f64,
    /// Integrand evaluations, or samples for Monte Carlo.
    pub evaluations: u64,
    pub method: ConevolMethod,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConevolOptions {
    pub tol: f64,
    pub terms: usize,
    pub samples: u64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConevolMcEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub bounding_volume: f64,
}

/// Opaque series evaluation.
pub struct ConevolSeries {
    result: VolumeResult,
    breakdown: SeriesBreakdown,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> ConevolStatus {
    match err {
        Error::Domain(_) => ConevolStatus::DomainError,
        Error::Convergence { .. } => ConevolStatus::ConvergenceError,
        Error::Quadrature { .. } => ConevolStatus::QuadratureError,
    }
}

fn fail(err: &Error) -> ConevolStatus {
    set_last_error(err.to_string());
    status_of(err)
}

/// Runs `f`, converting a panic into `ConevolStatus::Panic`.
fn guarded<F: FnOnce() -> ConevolStatus>(f: F) -> ConevolStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic inside conevol".into());
            ConevolStatus::Panic
        }
    }
}

impl From<Method> for ConevolMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::ClosedForm => ConevolMethod::ClosedForm,
            Method::QuadR3 => ConevolMethod::QuadR3,
            Method::QuadReduced => ConevolMethod::QuadReduced,
            Method::Series => ConevolMethod::Series,
            Method::SemiAnalytic => ConevolMethod::SemiAnalytic,
            Method::Quad2d => ConevolMethod::Quad2d,
            Method::MonteCarlo => ConevolMethod::MonteCarlo,
            Method::ZerothApprox => ConevolMethod::ZerothApprox,
        }
    }
}

impl From<ConevolMethod> for Method {
    fn from(m: ConevolMethod) -> Self {
        match m {
            ConevolMethod::ClosedForm => Method::ClosedForm,
            ConevolMethod::QuadR3 => Method::QuadR3,
            ConevolMethod::QuadReduced => Method::QuadReduced,
            ConevolMethod::Series => Method::Series,
            ConevolMethod::SemiAnalytic => Method::SemiAnalytic,
            ConevolMethod::Quad2d => Method::Quad2d,
            ConevolMethod::MonteCarlo => Method::MonteCarlo,
            ConevolMethod::ZerothApprox => Method::ZerothApprox,
        }
    }
}

impl From<ConevolProblem> for Problem {
    fn from(p: ConevolProblem) -> Self {
        match p {
            ConevolProblem::ConeCylinder => Problem::ConeCylinder,
            ConevolProblem::ConeSphere => Problem::ConeSphere,
        }
    }
}

impl From<VolumeResult> for ConevolVolume {
    fn from(v: VolumeResult) -> Self {
        Self {
            volume: v.volume,
            error_estimate: v.error_estimate,
            evaluations: v.evaluations,
            method: v.method.into(),
        }
    }
}

impl From<EvalOptions> for ConevolOptions {
    fn from(o: EvalOptions) -> Self {
        Self {
            tol: o.tol,
            terms: o.terms,
            samples: o.samples,
            seed: o.seed,
        }
    }
}

impl From<ConevolOptions> for EvalOptions {
    fn from(o: ConevolOptions) -> Self {
        Self {
            tol: o.tol,
            terms: o.terms,
            samples: o.samples,
            seed: o.seed,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn conevol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn conevol_status_message(status: ConevolStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        ConevolStatus::Ok => c"ok",
        ConevolStatus::NullPointer => c"null pointer argument",
        ConevolStatus::DomainError => c"argument outside the valid domain",
        ConevolStatus::ConvergenceError => c"AGM iteration did not converge",
        ConevolStatus::QuadratureError => c"quadrature did not reach the requested tolerance",
        ConevolStatus::TruncationWarning => c"series truncated before reaching the requested tolerance",
        ConevolStatus::IndexOutOfRange => c"index out of range",
        ConevolStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Detailed message for the last failing call on this thread, or NULL.
/// The pointer stays valid until the next `conevol_*` call on the same thread.
#[no_mangle]
pub extern "C" fn conevol_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn conevol_default_options() -> ConevolOptions {
    EvalOptions::default().into()
}

fn elliptic_call(k: f64, out: *mut f64, f: fn(Modulus, &AgmConfig) -> conevol::Result<f64>) -> ConevolStatus {
    guarded(|| {
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        match Modulus::new(k).and_then(|m| f(m, &AgmConfig::default())) {
            Ok(v) => {
                // SAFETY: checked non-null; caller guarantees it points to a writable f64.
                unsafe { *out = v };
                ConevolStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Complete elliptic integral of the first kind at modulus `k ∈ [0, 1)`.
///
/// # Safety
/// `out` must be NULL or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn conevol_complete_k(k: f64, out: *mut f64) -> ConevolStatus {
    elliptic_call(k, out, elliptic::complete_k)
}

/// Complete elliptic integral of the second kind at modulus `k ∈ [0, 1]`.
///
/// # Safety
/// `out` must be NULL or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn conevol_complete_e(k: f64, out: *mut f64) -> ConevolStatus {
    elliptic_call(k, out, elliptic::complete_e)
}

/// `∫₀^(π/2) sin²φ √(1 − k² sin²φ) dφ`.
///
/// # Safety
/// `out` must be NULL or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn conevol_e2(k: f64, out: *mut f64) -> ConevolStatus {
    elliptic_call(k, out, elliptic::e2)
}

/// Evaluates one volume. `options` may be NULL for defaults.
///
/// On `QUADRATURE_ERROR` and `TRUNCATION_WARNING` the output still holds the
/// best available estimate.
///
/// # Safety
/// `options` must be NULL or point to a valid `ConevolOptions`; `out` must be
/// NULL or point to a writable `ConevolVolume`.
#[no_mangle]
pub unsafe extern "C" fn conevol_volume(
    problem: ConevolProblem,
    method: ConevolMethod,
    k: f64,
    alpha: f64,
    options: *const ConevolOptions,
    out: *mut ConevolVolume,
) -> ConevolStatus {
    guarded(|| {
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        // SAFETY: caller contract, NULL selects defaults.
        let opts: EvalOptions = unsafe { options.as_ref() }
            .map(|o| (*o).into())
            .unwrap_or_default();
        let method_rs: Method = method.into();
        let (status, value) = match conevol::evaluate(problem.into(), method_rs, k, alpha, &opts) {
            Ok(ev) if ev.truncated() => {
                set_last_error("series truncated at term cap".into());
                (ConevolStatus::TruncationWarning, Some(ev.result))
            }
            Ok(ev) => (ConevolStatus::Ok, Some(ev.result)),
            Err(
                ref e @ Error::Quadrature {
                    value,
                    error_estimate,
                    evaluations,
                    ..
                },
            ) => (
                fail(e),
                Some(VolumeResult {
                    volume: value,
                    method: method_rs,
                    error_estimate,
                    evaluations,
                }),
            ),
            Err(e) => (fail(&e), None),
        };
        if let Some(v) = value {
            // SAFETY: checked non-null above.
            unsafe { *out = v.into() };
        }
        status
    })
}

/// Hit-or-miss Monte Carlo over the problem's canonical bounding box.
///
/// # Safety
/// `out` must be NULL or point to a writable `ConevolMcEstimate`.
#[no_mangle]
pub unsafe extern "C" fn conevol_mc_volume(
    problem: ConevolProblem,
    k: f64,
    alpha: f64,
    samples: u64,
    seed: u64,
    out: *mut ConevolMcEstimate,
) -> ConevolStatus {
    guarded(|| {
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        let est = match problem {
            ConevolProblem::ConeCylinder => ConeCylinderParams::new(k, alpha).map(|p| {
                mc_volume(|x| oracle::in_cone_cylinder_region(x, &p), oracle::cone_cylinder_box(&p), samples, seed)
            }),
            ConevolProblem::ConeSphere => ConeSphereParams::new(k, alpha).map(|p| {
                mc_volume(|x| oracle::in_cone_sphere_region(x, &p), oracle::cone_sphere_box(&p), samples, seed)
            }),
        };
        match est {
            Ok(e) => {
                // SAFETY: checked non-null above.
                unsafe {
                    *out = ConevolMcEstimate {
                        mean: e.mean,
                        std_error: e.std_error,
                        samples: e.samples,
                        seed: e.seed,
                        bounding_volume: e.bounding_volume,
                    }
                };
                ConevolStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Sums the cone/sphere series and returns a handle to the per-term record.
/// `*out` receives the handle even on `TRUNCATION_WARNING`; on any other
/// failure it is set to NULL.
///
/// # Safety
/// `out` must be NULL or point to a writable `ConevolSeries*`.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_new(
    k: f64,
    alpha: f64,
    term_tol: f64,
    n_max: usize,
    out: *mut *mut ConevolSeries,
) -> ConevolStatus {
    guarded(|| {
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        // SAFETY: checked non-null.
        unsafe { *out = ptr::null_mut() };
        let evaluated = ConeSphereParams::new(k, alpha)
            .and_then(|p| cone_sphere::volume_series(&p, term_tol, n_max));
        match evaluated {
            Ok((result, breakdown)) => {
                let truncated = breakdown.truncated;
                let handle = Box::into_raw(Box::new(ConevolSeries { result, breakdown }));
                // SAFETY: checked non-null.
                unsafe { *out = handle };
                if truncated {
                    set_last_error("series truncated at term cap".into());
                    ConevolStatus::TruncationWarning
                } else {
                    ConevolStatus::Ok
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a handle from [`conevol_series_new`]. NULL is ignored.
///
/// # Safety
/// `series` must be NULL or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_free(series: *mut ConevolSeries) {
    if series.is_null() {
        return;
    }
    // SAFETY: caller guarantees the handle came from conevol_series_new.
    drop(unsafe { Box::from_raw(series) });
}

/// Number of terms summed; 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_len(series: *const ConevolSeries) -> usize {
    // SAFETY: caller contract.
    unsafe { series.as_ref() }.map_or(0, |s| s.breakdown.n_used)
}

/// Whether the term cap was reached before the tolerance; false for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_truncated(series: *const ConevolSeries) -> bool {
    // SAFETY: caller contract.
    unsafe { series.as_ref() }.is_some_and(|s| s.breakdown.truncated)
}

unsafe fn series_index(
    series: *const ConevolSeries,
    index: usize,
    out: *mut f64,
    pick: fn(&SeriesBreakdown) -> &[f64],
) -> ConevolStatus {
    guarded(|| {
        // SAFETY: caller contract.
        let Some(s) = (unsafe { series.as_ref() }) else {
            return ConevolStatus::NullPointer;
        };
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        match pick(&s.breakdown).get(index) {
            Some(v) => {
                // SAFETY: checked non-null.
                unsafe { *out = *v };
                ConevolStatus::Ok
            }
            None => {
                set_last_error(format!("index {index} out of range"));
                ConevolStatus::IndexOutOfRange
            }
        }
    })
}

/// Value of term `index`.
///
/// # Safety
/// `series` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_term(
    series: *const ConevolSeries,
    index: usize,
    out: *mut f64,
) -> ConevolStatus {
    unsafe { series_index(series, index, out, |b| &b.terms) }
}

/// Sum of terms `0..=index`.
///
/// # Safety
/// `series` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_partial_sum(
    series: *const ConevolSeries,
    index: usize,
    out: *mut f64,
) -> ConevolStatus {
    unsafe { series_index(series, index, out, |b| &b.partial_sums) }
}

/// Summed volume with its error estimate.
///
/// # Safety
/// `series` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn conevol_series_volume(
    series: *const ConevolSeries,
    out: *mut ConevolVolume,
) -> ConevolStatus {
    guarded(|| {
        // SAFETY: caller contract.
        let Some(s) = (unsafe { series.as_ref() }) else {
            return ConevolStatus::NullPointer;
        };
        if out.is_null() {
            return ConevolStatus::NullPointer;
        }
        // SAFETY: checked non-null.
        unsafe { *out = s.result.into() };
        ConevolStatus::Ok
    })
}
