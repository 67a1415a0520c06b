//! Configuration, seeded initial data, experiment drivers and the
//! verification suite behind the `hartree` command.

mod config;
mod experiments;
mod initial;
mod suite;

pub use config::{load_config, parse_config, AuditOptions, ExperimentConfig, InitialSpec};
pub use experiments::{
    loglog_slope, nonincreasing_with_slack, run_equivalence_sweep, run_growth_experiment,
    run_nsweep, Equivalence, EquivalenceRow, GrowthRun, Nsweep, NsweepRow, RunStatus,
    EQUIVALENCE_HEADER, GROWTH_HEADER, INCREMENT_FLOOR, NSWEEP_HEADER,
};
pub use initial::initial_data;
pub use suite::{
    cancellation_check, de1_fd_check, run_verification_suite, AuditEntry, SuiteReport, DE1_CUTOFF,
    DE1_FD_TOLERANCE, DE1_GRIDS, DE2_BETA0, DE2_FD_TOLERANCE, DE2_GRIDS, DMVT_CUTOFFS,
    DMVT_SAMPLES, DMVT_SPREAD, FD_STEP, HS_BOUND_FIELDS, M4_BOUND_CUTOFFS, M4_BOUND_SPREAD,
};
