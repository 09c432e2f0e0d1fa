//! Random contraction solvers, the exponential clock process, and the
//! analytic bounds the clock experiments are compared against.

mod bounds;
mod clock;
mod karger_stein;

pub use bounds::{freedman_tail_bound, lemma_expect_bound, BoundParams};
pub use clock::{
    clock_trajectory, cut_survival_counts, exp_clock_run, staged_survival_experiment, ClockConfig, ClockRun,
    EdgeClocks, StageStats, StagedConfig, StagedReport, TrajectoryConfig, TrajectoryPoint,
    TrajectoryStats,
};
pub use karger_stein::{
    contract_to, random_contraction, recursive_karger_stein, shrink_target, solve_min_kcut,
    EdgeSampler, SolveOptions, SolveReport,
};
