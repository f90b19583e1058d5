use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// AGM iteration did not settle within the configured iteration cap.
    #[error("AGM did not converge after {iterations} iterations (last gap {gap:e})")]
    Convergence { iterations: usize, gap: f64 },

    /// Adaptive quadrature ran out of budget before reaching the tolerance.
    /// The best available estimate is carried along so callers can still report it.
    #[error(
        "quadrature did not reach tolerance {tolerance:e} within budget \
         (estimate {value}, error {error_estimate:e}, {evaluations} evaluations)"
    )]
    Quadrature {
        value: f64,
        error_estimate: f64,
        tolerance: f64,
        evaluations: u64,
    },
}
