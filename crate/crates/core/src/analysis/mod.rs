//! Stochastic-order verifiers, bound checkers and the Monte Carlo engine for
//! the plug-in estimator.

mod bounds;
mod orders;
mod simulation;

pub use bounds::{
    bound_suite, counterexample_scan, prh_bound, sum_bound, sum_wfgcpe, BoundEntry, BoundId,
    BoundOutcome, BoundReport, Counterexample, CounterexampleScan,
};
pub use orders::{
    check_order, dispersive_implies_wfgcpe_order, hr_dfr_implies_wfgcpe_order, is_dfr,
    is_log_concave, mean_value_identity, ImplicationCheck, MeanValueReport, OrderRelation,
    OrderVerdict, Verdict, Witness,
};
pub use simulation::{
    clt_diagnostic, consistency_check, ks_distance_to_normal, simulate_estimator, CltReport,
    ConsistencyReport, SimulationConfig, SimulationSummary,
};
