//! RR vs CTQ vs FCFS comparison over seeded workloads.
//!
//! For every generated workload the fixed-RR baseline uses the quantum that
//! minimizes its own average waiting time on the initial set, CTQ starts
//! from that same optimized quantum, and FCFS is included as the
//! large-quantum limit. Rows come out ordered by workload index, then
//! `rr`, `ctq`, `fcfs`.

use num_rational::Ratio;
use num_traits::CheckedAdd;
use serde::Serialize;

use crate::analytic::best_tq;
use crate::ctq::{run_ctq, CtqTrace};
use crate::error::{Result, SchedError};
use crate::model::{metrics_from_schedule, MetricsReport, Schedule, TaskSet, Tu};
use crate::simulator::{simulate_fcfs, simulate_fixed_rr};
use crate::workload::{generate, WorkloadSpec};

/// Wide rational for means taken across workloads of different sizes.
pub type Mean = Ratio<u128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Rr,
    Ctq,
    Fcfs,
}

impl Arm {
    pub const ORDER: [Arm; 3] = [Arm::Rr, Arm::Ctq, Arm::Fcfs];

    pub fn as_str(self) -> &'static str {
        match self {
            Arm::Rr => "rr",
            Arm::Ctq => "ctq",
            Arm::Fcfs => "fcfs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TqPolicy {
    Fixed(Tu),
    Optimized,
    None,
}

impl TqPolicy {
    pub fn render(&self) -> String {
        match self {
            TqPolicy::Fixed(tq) => tq.to_string(),
            TqPolicy::Optimized => "optimized".into(),
            TqPolicy::None => "none".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub workload_id: usize,
    pub n: usize,
    pub algorithm: Arm,
    pub tq_policy: TqPolicy,
    pub metrics: MetricsReport,
    /// CTQ only.
    pub tq_sequence: Option<Vec<Tu>>,
}

impl ExperimentRow {
    pub fn rounds(&self) -> Option<usize> {
        self.tq_sequence.as_ref().map(Vec::len)
    }
}

/// One workload run through every arm, keeping the schedules so that row
/// metrics can be re-derived.
#[derive(Debug, Clone)]
pub struct WorkloadComparison {
    pub workload_id: usize,
    pub tasks: TaskSet,
    pub baseline_tq: Tu,
    pub rr_schedule: Schedule,
    pub ctq: CtqTrace,
    pub fcfs_schedule: Schedule,
    pub rows: [ExperimentRow; 3],
}

pub fn compare_workload(workload_id: usize, tasks: &TaskSet) -> Result<WorkloadComparison> {
    let n = tasks.len();
    let baseline_tq = best_tq(tasks)?.tq;

    let rr_schedule = simulate_fixed_rr(tasks, baseline_tq)?;
    let rr_metrics = metrics_from_schedule(&rr_schedule, tasks)?;
    let ctq = run_ctq(tasks, None)?;
    let fcfs_schedule = simulate_fcfs(tasks)?;
    let fcfs_metrics = metrics_from_schedule(&fcfs_schedule, tasks)?;

    let rows = [
        ExperimentRow {
            workload_id,
            n,
            algorithm: Arm::Rr,
            tq_policy: TqPolicy::Fixed(baseline_tq),
            metrics: rr_metrics,
            tq_sequence: None,
        },
        ExperimentRow {
            workload_id,
            n,
            algorithm: Arm::Ctq,
            tq_policy: TqPolicy::Optimized,
            metrics: ctq.metrics.clone(),
            tq_sequence: Some(ctq.tq_sequence.clone()),
        },
        ExperimentRow {
            workload_id,
            n,
            algorithm: Arm::Fcfs,
            tq_policy: TqPolicy::None,
            metrics: fcfs_metrics,
            tq_sequence: None,
        },
    ];
    Ok(WorkloadComparison {
        workload_id,
        tasks: tasks.clone(),
        baseline_tq,
        rr_schedule,
        ctq,
        fcfs_schedule,
        rows,
    })
}

/// Sweep parameters. Run `r` draws its workload with seed `seed + r`
/// (wrapping). With `n_max` set, the task count steps linearly from `n`
/// (first run) to `n_max` (last run), rounding down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub n_max: Option<usize>,
    pub burst_min: Tu,
    pub burst_max: Tu,
    pub seed: u64,
    pub runs: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(SchedError::InvalidWorkload(
                "runs must be at least 1".into(),
            ));
        }
        if let Some(n_max) = self.n_max {
            if n_max < self.n {
                return Err(SchedError::InvalidWorkload(format!(
                    "n_max {n_max} is below n {}",
                    self.n
                )));
            }
        }
        self.workload(0).validate()
    }

    pub fn workload(&self, run: usize) -> WorkloadSpec {
        let n = match self.n_max {
            Some(n_max) if self.runs > 1 => self.n + (n_max - self.n) * run / (self.runs - 1),
            _ => self.n,
        };
        WorkloadSpec::uniform(
            n,
            self.burst_min,
            self.burst_max,
            self.seed.wrapping_add(run as u64),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRow {
    pub algorithm: Arm,
    pub runs: usize,
    pub n: Mean,
    pub avg_wt: Mean,
    pub avg_tat: Mean,
    pub context_switches: Mean,
    pub makespan: Mean,
    /// CTQ only.
    pub rounds: Option<Mean>,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub config: SweepConfig,
    pub comparisons: Vec<WorkloadComparison>,
    pub summary: Vec<SummaryRow>,
}

impl CompareReport {
    pub fn rows(&self) -> impl Iterator<Item = &ExperimentRow> + '_ {
        self.comparisons.iter().flat_map(|c| c.rows.iter())
    }

    pub fn summary_for(&self, arm: Arm) -> &SummaryRow {
        self.summary
            .iter()
            .find(|s| s.algorithm == arm)
            .expect("every arm has a summary row")
    }
}

pub fn run_compare(config: &SweepConfig) -> Result<CompareReport> {
    config.validate()?;
    let comparisons = (0..config.runs)
        .map(|run| {
            let tasks = generate(&config.workload(run))?;
            compare_workload(run, &tasks)
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = Arm::ORDER
        .iter()
        .map(|&arm| summarize(arm, &comparisons))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareReport {
        config: *config,
        comparisons,
        summary,
    })
}

fn summarize(arm: Arm, comparisons: &[WorkloadComparison]) -> Result<SummaryRow> {
    let rows: Vec<&ExperimentRow> = comparisons
        .iter()
        .flat_map(|c| c.rows.iter())
        .filter(|r| r.algorithm == arm)
        .collect();
    let widen = |r: Ratio<u64>| Mean::new(u128::from(*r.numer()), u128::from(*r.denom()));
    let int = |v: u64| Mean::from_integer(u128::from(v));
    let mean = |values: Vec<Mean>| -> Result<Mean> {
        let count = values.len() as u128;
        let total = values
            .into_iter()
            .try_fold(Mean::from_integer(0), |acc, v| acc.checked_add(&v))
            .ok_or_else(|| {
                SchedError::InvariantViolation("overflow while averaging across runs".into())
            })?;
        Ok(total / Mean::from_integer(count))
    };
    Ok(SummaryRow {
        algorithm: arm,
        runs: rows.len(),
        n: mean(rows.iter().map(|r| int(r.n as u64)).collect())?,
        avg_wt: mean(rows.iter().map(|r| widen(r.metrics.avg_waiting)).collect())?,
        avg_tat: mean(
            rows.iter()
                .map(|r| widen(r.metrics.avg_turnaround))
                .collect(),
        )?,
        context_switches: mean(
            rows.iter()
                .map(|r| int(r.metrics.total_context_switches))
                .collect(),
        )?,
        makespan: mean(rows.iter().map(|r| int(r.metrics.makespan)).collect())?,
        rounds: match arm {
            Arm::Ctq => Some(mean(
                rows.iter()
                    .map(|r| int(r.rounds().unwrap_or(0) as u64))
                    .collect(),
            )?),
            _ => None,
        },
    })
}
