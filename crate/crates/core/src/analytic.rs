//! Closed-form waiting times for fixed-quantum round robin with all tasks
//! arriving at time 0, and the exhaustive quantum search built on them.
//!
//! Queue positions are 1-based in the public API to match the usual
//! `T1..Tn` naming; internally everything is 0-based.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Result, SchedError};
use crate::model::{serialize_exact, Exact, TaskId, TaskSet, Tu};

/// Number of full quanta a task uses before its final slice.
///
/// `floor(burst / tq)`, except that an exact multiple `l * tq` gives `l - 1`:
/// the last full quantum is also the final slice.
pub fn ntq(burst: Tu, tq: Tu) -> Result<u64> {
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    if burst == 0 {
        return Err(SchedError::NonPositiveBurst);
    }
    Ok(ntq_unchecked(burst, tq))
}

#[inline]
fn ntq_unchecked(burst: Tu, tq: Tu) -> u64 {
    if burst.is_multiple_of(tq) {
        burst / tq - 1
    } else {
        burst / tq
    }
}

/// Start time of the final slice of the task at 1-based queue position `i`.
pub fn sltq(tasks: &TaskSet, tq: Tu, i: usize) -> Result<Tu> {
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    if i == 0 || i > tasks.len() {
        return Err(SchedError::IndexOutOfRange {
            index: i,
            len: tasks.len(),
        });
    }
    let bursts = tasks.bursts();
    let counts: Vec<u64> = bursts.iter().map(|&b| ntq_unchecked(b, tq)).collect();
    Ok(sltq_at(&bursts, &counts, tq, i - 1))
}

fn sltq_at(bursts: &[Tu], counts: &[u64], tq: Tu, i: usize) -> Tu {
    let own = counts[i];
    if own == 0 {
        // Only tasks ahead in the queue have run, each for one slice.
        return bursts[..i]
            .iter()
            .zip(&counts[..i])
            .map(|(&b, &c)| if c > 0 { tq } else { b })
            .sum();
    }
    let mut start = own * tq;
    for (k, (&b, &c)) in bursts.iter().zip(counts).enumerate() {
        if k == i {
            continue;
        }
        start += if c < own || (c == own && k < i) {
            // k finished before i's last slice begins
            b
        } else if k > i {
            own * tq
        } else {
            (own + 1) * tq
        };
    }
    start
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskProfile {
    pub task_id: TaskId,
    pub ntq: u64,
    pub sltq: Tu,
    pub waiting: Tu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyticProfile {
    pub tq: Tu,
    pub per_task: Vec<TaskProfile>,
    pub twt: Tu,
    #[serde(serialize_with = "serialize_exact")]
    pub avgwt: Exact,
}

/// Per-task NTQ, SLTQ and waiting time plus totals for a fixed quantum.
pub fn waiting_profile(tasks: &TaskSet, tq: Tu) -> Result<AnalyticProfile> {
    tasks.require_non_empty()?;
    if tq == 0 {
        return Err(SchedError::ZeroQuantum);
    }
    let bursts = tasks.bursts();
    let counts: Vec<u64> = bursts.iter().map(|&b| ntq_unchecked(b, tq)).collect();
    let per_task: Vec<TaskProfile> = tasks
        .tasks()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let start = sltq_at(&bursts, &counts, tq, i);
            TaskProfile {
                task_id: t.id,
                ntq: counts[i],
                sltq: start,
                waiting: start - counts[i] * tq,
            }
        })
        .collect();
    let twt = per_task.iter().map(|p| p.waiting).sum();
    Ok(AnalyticProfile {
        tq,
        avgwt: Ratio::new(twt, tasks.len() as u64),
        per_task,
        twt,
    })
}

/// Total waiting time for a fixed quantum, summed pairwise.
///
/// Each unordered pair `(i, k)` with `i` ahead of `k` delays the two tasks by
/// `burst_i + ntq_i*tq` in total when `ntq_i <= ntq_k`, and by
/// `burst_k + (ntq_k + 1)*tq` otherwise. This is the same quantity as
/// `waiting_profile(..).twt`, regrouped so the quantum scan avoids building
/// per-task profiles.
pub fn total_waiting(bursts: &[Tu], tq: Tu) -> Tu {
    let counts: Vec<u64> = bursts.iter().map(|&b| ntq_unchecked(b, tq)).collect();
    let mut total = 0;
    for i in 0..bursts.len() {
        let (bi, ci) = (bursts[i], counts[i]);
        for k in i + 1..bursts.len() {
            let ck = counts[k];
            total += if ci <= ck {
                bi + ci * tq
            } else {
                bursts[k] + (ck + 1) * tq
            };
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumChoice {
    pub tq: Tu,
    #[serde(serialize_with = "serialize_exact")]
    pub avgwt: Exact,
    pub candidates_evaluated: u64,
    /// How many candidates share the minimal AVGWT (including `tq`).
    pub tied: u64,
}

/// Scans every integer quantum in `1..=LBT` and returns the one with the
/// smallest average waiting time, preferring the largest quantum on ties.
pub fn best_tq(tasks: &TaskSet) -> Result<QuantumChoice> {
    tasks.require_non_empty()?;
    best_tq_for_bursts(&tasks.bursts())
}

pub(crate) fn best_tq_for_bursts(bursts: &[Tu]) -> Result<QuantumChoice> {
    let largest = bursts
        .iter()
        .copied()
        .max()
        .ok_or(SchedError::EmptyTaskSet)?;
    // (tq, twt, ties)
    let mut best: Option<(Tu, Tu, u64)> = None;
    for tq in 1..=largest {
        let twt = total_waiting(bursts, tq);
        best = match best {
            Some((_, b, ties)) if twt == b => Some((tq, twt, ties + 1)),
            Some(cur) if twt > cur.1 => Some(cur),
            _ => Some((tq, twt, 1)),
        };
    }
    let (tq, twt, tied) = best.expect("largest burst is at least 1");
    Ok(QuantumChoice {
        tq,
        avgwt: Ratio::new(twt, bursts.len() as u64),
        candidates_evaluated: largest,
        tied,
    })
}
