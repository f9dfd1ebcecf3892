use thiserror::Error;

use crate::detection::DetectionReport;

pub type Result<T, E = CovertError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CovertError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The source-relay link cannot carry `r_sd` at any relay power.
    #[error("source-relay link cannot support R_sd = {r_sd} (denominator {denominator:.6e} <= 0)")]
    InfeasibleRate { r_sd: f64, denominator: f64 },

    #[error("covert power budget exceeded: (mu + 1) * p_delta = {required:.6e} >= p_r_max = {p_r_max:.6e}")]
    PowerBudgetExceeded { required: f64, p_r_max: f64 },

    #[error("h_rd_sq = {h_rd_sq:.6e} is below the forwarding threshold {threshold:.6e}")]
    ConditionBViolated { h_rd_sq: f64, threshold: f64 },

    /// Covert power above the certain-detection bound. The attached report
    /// carries the zero-error threshold the warden would use.
    #[error("p_delta = {p_delta:.6e} exceeds the detectability bound {bound:.6e}; the warden detects with certainty")]
    DetectableWithCertainty {
        p_delta: f64,
        bound: f64,
        report: DetectionReport,
    },

    #[error("{function}: argument {x} outside the supported domain")]
    DomainError { function: &'static str, x: f64 },

    #[error("no probed point satisfies the covert constraint")]
    NoFeasiblePoint,

    #[error("only {events} of {trials} trials satisfied the forwarding condition (need at least {required})")]
    DegenerateSample {
        events: u64,
        trials: u64,
        required: u64,
    },

    #[error("adaptive quadrature exceeded {budget} subintervals (error estimate {error:.3e})")]
    ConvergenceFailure { budget: usize, error: f64 },
}
