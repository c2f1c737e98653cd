//! Round-robin scheduling analysis and changeable-time-quantum (CTQ)
//! scheduling on a discrete, zero-switch-cost timeline.
//!
//! - [`model`]: tasks, Gantt-chart schedules and their metrics.
//! - [`analytic`]: closed-form fixed-quantum waiting times and the
//!   exhaustive quantum search.
//! - [`simulator`]: slice-by-slice fixed RR, FCFS and weighted RR.
//! - [`ctq`]: per-round quantum re-optimization.
//! - [`workload`]: seeded task-set generation and task files.
//! - [`experiment`]: RR/CTQ/FCFS comparison sweeps.

pub mod analytic;
pub mod ctq;
pub mod error;
pub mod experiment;
pub mod model;
pub mod simulator;
pub mod workload;

pub use analytic::{
    best_tq, ntq, sltq, total_waiting, waiting_profile, AnalyticProfile, QuantumChoice,
};
pub use ctq::{residual_times, run_ctq, run_round, CtqTrace, QuantumSource, Residual, RoundRecord};
pub use error::{Result, SchedError};
pub use model::{
    metrics_from_schedule, render_exact, render_ratio, Exact, MetricsReport, Schedule, Slice, Task,
    TaskId, TaskMetrics, TaskSet, Tu,
};
pub use simulator::{
    simulate, simulate_fcfs, simulate_fixed_rr, simulate_wrr, Algorithm, SimConfig,
};
pub use workload::{generate, load_tasks, save_tasks, WorkloadSpec};
