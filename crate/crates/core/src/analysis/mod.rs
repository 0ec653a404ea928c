//! Error norms, interpolation estimates, rate fits and the discrete
//! inf-sup constant.

pub mod infsup;
pub mod interp;
pub mod norms;
pub mod problems;
pub mod rate;

pub use infsup::{infsup_constant, witness_bound, witness_direction, InfSupOperator, InfSupReport};
pub use interp::{interp_p0, interp_p1, p0_error_l2, p1_derivative_l2, p1_error, P1Error};
pub use norms::{
    composite_l2, discrete_norm_q, error_norms, inverse_weighted_sum_sq, source_norms, weighted_sum_sq,
    ErrorReport, DEFAULT_ERROR_ORDER,
};
pub use problems::{ManufacturedProblem, Regularity};
pub use rate::{
    convergence_study, convergence_study_with_order, infsup_sweep, loglog_slope, ConvergenceTable,
    SchemeChoice, Slopes,
};
