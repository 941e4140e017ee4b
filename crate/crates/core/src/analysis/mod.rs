//! Estimators and theorem checkers over simulated datasets.

pub mod convergence;
pub mod estimators;
pub mod regularity;

pub use convergence::{check_tree_claims, end_convergence_stats, EndConvergenceReport, TreeClaimsReport};
pub use estimators::{
    check_orbit_relation, empirical_busemann_drift, empirical_speed, mean_and_se, theoretical_drift, Estimate,
    OrbitCheck, SE_MULTIPLIER, TOLERANCE_FLOOR,
};
pub use regularity::{
    clt_variance_ratio, format_vector, regularity_report, regularity_residuals, step_bound, step_probe,
    theory_from_meta, ConditionCheck, RegularityReport, Residual, StepProbe, REPORT_SCHEMA,
};
