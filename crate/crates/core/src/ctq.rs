//! Changeable-time-quantum scheduling.
//!
//! Tasks are served in FIFO rounds. Every survivor is dispatched once per
//! round for `min(TQ[q], residual)`. After each round the quantum for the
//! next one is re-chosen by [`best_tq`](crate::analytic::best_tq) over the
//! residual times of the tasks still waiting, treating them as a fresh
//! fixed-quantum run. Waiting already accrued is a constant offset within a
//! round and is not part of the score.

use serde::Serialize;

use crate::analytic::best_tq_for_bursts;
use crate::error::{Result, SchedError};
use crate::model::{metrics_from_schedule, MetricsReport, Schedule, Slice, TaskId, TaskSet, Tu};

/// A task still in the run queue and the work it has left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub task_id: TaskId,
    pub remaining: Tu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumSource {
    UserSupplied,
    Optimized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: u32,
    pub tq_used: Tu,
    pub survivors_before: Vec<Residual>,
    pub completed_this_round: Vec<TaskId>,
    pub chosen_by: QuantumSource,
    /// Candidates sharing the minimal score; 0 for a user-supplied quantum.
    pub tied_candidates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtqTrace {
    pub rounds: Vec<RoundRecord>,
    pub schedule: Schedule,
    pub metrics: MetricsReport,
    pub tq_sequence: Vec<Tu>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub slices: Vec<Slice>,
    pub survivors: Vec<Residual>,
    pub clock: Tu,
}

/// Remaining work of each task after the quanta in `tq_history`, dropping
/// tasks that have finished. A task that survived round `k` ran the whole
/// `TQ[k]`, so subtracting the full history is exact for survivors.
pub fn residual_times(tasks: &TaskSet, tq_history: &[Tu]) -> Vec<Residual> {
    let used: Tu = tq_history.iter().sum();
    tasks
        .tasks()
        .iter()
        .filter(|t| t.burst > used)
        .map(|t| Residual {
            task_id: t.id,
            remaining: t.burst - used,
        })
        .collect()
}

/// Dispatches each survivor once for `min(tq, remaining)` starting at `clock`.
pub fn run_round(survivors: &[Residual], tq: Tu, clock: Tu, round: u32) -> Result<RoundOutcome> {
    if survivors.is_empty() {
        return Err(SchedError::EmptyTaskSet);
    }
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    let mut clock = clock;
    let mut slices = Vec::with_capacity(survivors.len());
    let mut next = Vec::with_capacity(survivors.len());
    for r in survivors {
        let run = tq.min(r.remaining);
        slices.push(Slice {
            task_id: r.task_id,
            start: clock,
            end: clock + run,
            round,
        });
        clock += run;
        if r.remaining > tq {
            next.push(Residual {
                task_id: r.task_id,
                remaining: r.remaining - tq,
            });
        }
    }
    Ok(RoundOutcome {
        slices,
        survivors: next,
        clock,
    })
}

/// Runs CTQ to completion. Round 1 uses `first_tq` when given, otherwise the
/// optimal fixed quantum for the whole set; every later round re-optimizes
/// over the survivors' residual times.
pub fn run_ctq(tasks: &TaskSet, first_tq: Option<Tu>) -> Result<CtqTrace> {
    tasks.require_non_empty()?;
    if first_tq == Some(0) {
        return Err(SchedError::ZeroQuantum);
    }

    let mut survivors = residual_times(tasks, &[]);
    let mut rounds = Vec::new();
    let mut slices = Vec::with_capacity(tasks.len());
    let mut tq_sequence = Vec::new();
    let mut clock = 0;
    let mut round = 1u32;

    while !survivors.is_empty() {
        let (tq, chosen_by, tied) = match (round, first_tq) {
            (1, Some(tq)) => (tq, QuantumSource::UserSupplied, 0),
            _ => {
                let residuals: Vec<Tu> = survivors.iter().map(|r| r.remaining).collect();
                let choice = best_tq_for_bursts(&residuals)?;
                (choice.tq, QuantumSource::Optimized, choice.tied)
            }
        };
        let outcome = run_round(&survivors, tq, clock, round)?;
        let completed = survivors
            .iter()
            .filter(|r| r.remaining <= tq)
            .map(|r| r.task_id)
            .collect();
        rounds.push(RoundRecord {
            round,
            tq_used: tq,
            survivors_before: std::mem::replace(&mut survivors, outcome.survivors),
            completed_this_round: completed,
            chosen_by,
            tied_candidates: tied,
        });
        slices.extend(outcome.slices);
        tq_sequence.push(tq);
        clock = outcome.clock;
        round += 1;
    }

    let schedule = Schedule::from_slices(slices)?;
    let metrics = metrics_from_schedule(&schedule, tasks)?;
    Ok(CtqTrace {
        rounds,
        schedule,
        metrics,
        tq_sequence,
    })
}
