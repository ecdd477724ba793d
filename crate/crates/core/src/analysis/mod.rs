//! Closed-form results, quadrature cross-checks, detector feasibility and
//! arrival-time density curves.

mod closed_form;
mod papd;
pub mod quadrature;

pub use closed_form::{
    dark_count_threshold, max_success_probability, optimal_time, p_tot_coefficient,
    success_probability, total_probability, total_probability_check, FeasibilityReport,
    TotalProbabilityCheck, DECAY_HORIZON, QUADRATURE_ABS_TOL,
};
pub use papd::{
    papd, papd_curve, papd_integral, papd_sweep, t_p_grid, write_curves_csv, PapdCurve,
    PapdPoint, CSV_HEADER,
};
