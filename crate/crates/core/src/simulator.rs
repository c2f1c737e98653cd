//! Slice-by-slice executors for fixed-quantum round robin, FCFS and weighted
//! round robin. These are deliberately naive: they are the reference the
//! closed-form analysis is checked against.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Result, SchedError};
use crate::model::{Schedule, Slice, TaskSet, Tu};

pub const DEFAULT_WRR_REFERENCE_WEIGHT: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    FixedRr,
    Fcfs,
    Wrr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    /// Required by `FixedRr` and `Wrr`.
    pub tq: Option<Tu>,
    pub wrr_reference_weight: u32,
}

impl SimConfig {
    pub fn fixed_rr(tq: Tu) -> Self {
        Self {
            algorithm: Algorithm::FixedRr,
            tq: Some(tq),
            wrr_reference_weight: DEFAULT_WRR_REFERENCE_WEIGHT,
        }
    }

    pub fn fcfs() -> Self {
        Self {
            algorithm: Algorithm::Fcfs,
            tq: None,
            wrr_reference_weight: DEFAULT_WRR_REFERENCE_WEIGHT,
        }
    }

    pub fn wrr(tq: Tu, reference_weight: u32) -> Self {
        Self {
            algorithm: Algorithm::Wrr,
            tq: Some(tq),
            wrr_reference_weight: reference_weight,
        }
    }
}

pub fn simulate(tasks: &TaskSet, config: &SimConfig) -> Result<Schedule> {
    match config.algorithm {
        Algorithm::Fcfs => simulate_fcfs(tasks),
        Algorithm::FixedRr => simulate_fixed_rr(tasks, config.tq.ok_or(SchedError::ZeroQuantum)?),
        Algorithm::Wrr => simulate_wrr(
            tasks,
            config.tq.ok_or(SchedError::ZeroQuantum)?,
            config.wrr_reference_weight,
        ),
    }
}

/// Cyclic FIFO queue; each dispatch runs `min(tq, remaining)`. A slice's
/// round is how many times its task has been dispatched, counting itself.
pub fn simulate_fixed_rr(tasks: &TaskSet, tq: Tu) -> Result<Schedule> {
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    let quanta = vec![tq; tasks.len()];
    run_cyclic(tasks, &quanta)
}

pub fn simulate_fcfs(tasks: &TaskSet) -> Result<Schedule> {
    tasks.require_non_empty()?;
    let mut clock = 0;
    let slices = tasks
        .tasks()
        .iter()
        .map(|t| {
            let start = clock;
            clock += t.burst;
            Slice {
                task_id: t.id,
                start,
                end: clock,
                round: 1,
            }
        })
        .collect();
    Schedule::from_slices(slices)
}

/// Per-task quantum for weighted round robin:
/// `max(1, floor(tq * weight / reference_weight))`.
pub fn wrr_quantum(tq: Tu, weight: u32, reference_weight: u32) -> Tu {
    (tq * Tu::from(weight) / Tu::from(reference_weight)).max(1)
}

pub fn simulate_wrr(tasks: &TaskSet, tq: Tu, reference_weight: u32) -> Result<Schedule> {
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    if reference_weight == 0 {
        return Err(SchedError::ZeroReferenceWeight);
    }
    let quanta: Vec<Tu> = tasks
        .tasks()
        .iter()
        .map(|t| wrr_quantum(tq, t.weight, reference_weight))
        .collect();
    run_cyclic(tasks, &quanta)
}

fn run_cyclic(tasks: &TaskSet, quanta: &[Tu]) -> Result<Schedule> {
    tasks.require_non_empty()?;
    // (queue index, remaining, dispatches so far)
    let mut queue: VecDeque<(usize, Tu, u32)> = tasks
        .tasks()
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.burst, 0))
        .collect();
    let mut slices = Vec::new();
    let mut clock = 0;
    while let Some((i, remaining, runs)) = queue.pop_front() {
        let run = quanta[i].min(remaining);
        slices.push(Slice {
            task_id: tasks.tasks()[i].id,
            start: clock,
            end: clock + run,
            round: runs + 1,
        });
        clock += run;
        if remaining > run {
            queue.push_back((i, remaining - run, runs + 1));
        }
    }
    Schedule::from_slices(slices)
}
