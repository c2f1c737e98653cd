//! Domain types shared by every scheduler: tasks, Gantt-chart schedules and
//! the metrics derived from them.
//!
//! Time is an integer count of time units (tu). Context switches cost
//! nothing, so every schedule is a gapless timeline starting at 0.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Result, SchedError};

/// Integer time unit.
pub type Tu = u64;

/// Task identifier as it appears in task files and Gantt dumps.
pub type TaskId = u32;

/// Exact rational in tu, used for every average.
pub type Exact = Ratio<u64>;

/// A CPU-bound job that arrives at time 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Task {
    pub id: TaskId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub burst: Tu,
    /// Only consulted by weighted round robin.
    pub weight: u32,
}

impl Task {
    pub fn new(id: TaskId, burst: Tu) -> Result<Self> {
        Self::with_weight(id, burst, 1)
    }

    pub fn with_weight(id: TaskId, burst: Tu, weight: u32) -> Result<Self> {
        if burst == 0 {
            return Err(SchedError::ZeroBurst(id));
        }
        if weight == 0 {
            return Err(SchedError::ZeroWeight(id));
        }
        Ok(Self {
            id,
            label: None,
            burst,
            weight,
        })
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// FIFO-ordered run queue. Order is significant and never changed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TaskSet {
    tasks: Vec<Task>,
}

impl TaskSet {
    /// Validates id uniqueness and positive bursts/weights. An empty set is
    /// allowed here; operations that need tasks reject it themselves.
    pub fn new(tasks: Vec<Task>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(tasks.len());
        for task in &tasks {
            if task.burst == 0 {
                return Err(SchedError::ZeroBurst(task.id));
            }
            if task.weight == 0 {
                return Err(SchedError::ZeroWeight(task.id));
            }
            if !seen.insert(task.id) {
                return Err(SchedError::DuplicateId(task.id));
            }
        }
        Ok(Self { tasks })
    }

    /// Builds a set with ids `1..=n` from bursts, in the given order.
    pub fn from_bursts(bursts: &[Tu]) -> Result<Self> {
        let tasks = bursts
            .iter()
            .enumerate()
            .map(|(i, &b)| Task::new(i as TaskId + 1, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tasks)
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn bursts(&self) -> Vec<Tu> {
        self.tasks.iter().map(|t| t.burst).collect()
    }

    pub fn total_burst(&self) -> Tu {
        self.tasks.iter().map(|t| t.burst).sum()
    }

    /// Largest burst in the set (LBT); 0 for an empty set.
    pub fn largest_burst(&self) -> Tu {
        self.tasks.iter().map(|t| t.burst).max().unwrap_or(0)
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.tasks.is_empty() {
            Err(SchedError::EmptyTaskSet)
        } else {
            Ok(())
        }
    }
}

/// One contiguous run of a task on the CPU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub task_id: TaskId,
    pub start: Tu,
    pub end: Tu,
    /// 1-based round in which the slice was dispatched.
    pub round: u32,
}

impl Slice {
    pub fn len(&self) -> Tu {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// A Gantt chart: contiguous slices from time 0 to the makespan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    slices: Vec<Slice>,
    makespan: Tu,
}

impl Schedule {
    /// Checks that slices are non-empty, start at 0 and leave no gaps.
    pub fn from_slices(slices: Vec<Slice>) -> Result<Self> {
        let mut clock = 0;
        for (idx, s) in slices.iter().enumerate() {
            if s.end <= s.start {
                return Err(SchedError::InvariantViolation(format!(
                    "slice {idx} of task {} has non-positive length ({}..{})",
                    s.task_id, s.start, s.end
                )));
            }
            if s.start != clock {
                return Err(SchedError::InvariantViolation(format!(
                    "slice {idx} of task {} starts at {} but the previous slice ended at {clock}",
                    s.task_id, s.start
                )));
            }
            if s.round == 0 {
                return Err(SchedError::InvariantViolation(format!(
                    "slice {idx} has round 0"
                )));
            }
            clock = s.end;
        }
        Ok(Self {
            slices,
            makespan: clock,
        })
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn makespan(&self) -> Tu {
        self.makespan
    }

    pub fn starts(&self) -> Vec<Tu> {
        self.slices.iter().map(|s| s.start).collect()
    }

    /// Slices belonging to one task, in time order.
    pub fn slices_of(&self, id: TaskId) -> impl Iterator<Item = &Slice> + '_ {
        self.slices.iter().filter(move |s| s.task_id == id)
    }

    /// The same timeline with round numbers dropped, for comparing
    /// schedulers that number rounds differently.
    pub fn timeline(&self) -> Vec<(TaskId, Tu, Tu)> {
        self.slices
            .iter()
            .map(|s| (s.task_id, s.start, s.end))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskMetrics {
    pub task_id: TaskId,
    pub completion: Tu,
    pub turnaround: Tu,
    pub waiting: Tu,
    pub context_switches: u64,
    pub slice_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub per_task: Vec<TaskMetrics>,
    pub total_waiting: Tu,
    #[serde(serialize_with = "serialize_exact")]
    pub avg_waiting: Exact,
    #[serde(serialize_with = "serialize_exact")]
    pub avg_turnaround: Exact,
    pub total_context_switches: u64,
    pub makespan: Tu,
}

impl MetricsReport {
    pub fn task(&self, id: TaskId) -> Option<&TaskMetrics> {
        self.per_task.iter().find(|m| m.task_id == id)
    }

    pub fn completions(&self) -> Vec<Tu> {
        self.per_task.iter().map(|m| m.completion).collect()
    }

    pub fn context_switches(&self) -> Vec<u64> {
        self.per_task.iter().map(|m| m.context_switches).collect()
    }
}

/// Derives per-task and aggregate metrics from a schedule.
///
/// A context switch is charged to a task for every slice that leaves it with
/// work remaining and is immediately followed by a slice of another task.
/// Finishing a slice, even exactly on the quantum boundary, is never charged,
/// and neither is a task running back-to-back quanta on its own.
pub fn metrics_from_schedule(schedule: &Schedule, tasks: &TaskSet) -> Result<MetricsReport> {
    tasks.require_non_empty()?;
    let index: HashMap<TaskId, usize> = tasks
        .tasks()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.id, i))
        .collect();

    let n = tasks.len();
    let mut remaining: Vec<Tu> = tasks.bursts();
    let mut completion = vec![None::<Tu>; n];
    let mut switches = vec![0u64; n];
    let mut slice_count = vec![0u64; n];

    let slices = schedule.slices();
    for (pos, slice) in slices.iter().enumerate() {
        let &i = index.get(&slice.task_id).ok_or_else(|| {
            SchedError::InvariantViolation(format!("unknown task id {} in schedule", slice.task_id))
        })?;
        let len = slice.len();
        if len > remaining[i] {
            return Err(SchedError::InvariantViolation(format!(
                "task {} runs {} tu more than its burst",
                slice.task_id,
                len - remaining[i]
            )));
        }
        remaining[i] -= len;
        slice_count[i] += 1;
        if remaining[i] == 0 {
            completion[i] = Some(slice.end);
        } else if let Some(next) = slices.get(pos + 1) {
            if next.task_id != slice.task_id {
                switches[i] += 1;
            }
        }
    }

    let mut per_task = Vec::with_capacity(n);
    for (i, task) in tasks.tasks().iter().enumerate() {
        let completion = match completion[i] {
            Some(c) if remaining[i] == 0 => c,
            _ => {
                return Err(SchedError::InvariantViolation(format!(
                    "task {} is left with {} tu unscheduled",
                    task.id, remaining[i]
                )))
            }
        };
        per_task.push(TaskMetrics {
            task_id: task.id,
            completion,
            turnaround: completion,
            waiting: completion - task.burst,
            context_switches: switches[i],
            slice_count: slice_count[i],
        });
    }

    if schedule.makespan() != tasks.total_burst() {
        return Err(SchedError::InvariantViolation(format!(
            "makespan {} differs from total burst {}",
            schedule.makespan(),
            tasks.total_burst()
        )));
    }

    let total_waiting: Tu = per_task.iter().map(|m| m.waiting).sum();
    let total_turnaround: Tu = per_task.iter().map(|m| m.turnaround).sum();
    let n = n as u64;
    Ok(MetricsReport {
        total_waiting,
        avg_waiting: Ratio::new(total_waiting, n),
        avg_turnaround: Ratio::new(total_turnaround, n),
        total_context_switches: switches.iter().sum(),
        makespan: schedule.makespan(),
        per_task,
    })
}

/// Renders an exact rational: a terminating decimal when one exists
/// (`134/5` -> `26.8`), otherwise `numer/denom`.
pub fn render_exact(value: Exact) -> String {
    render_ratio(u128::from(*value.numer()), u128::from(*value.denom()))
}

/// [`render_exact`] for wide rationals such as means over many runs.
pub fn render_ratio(numer: u128, denom: u128) -> String {
    assert!(denom != 0, "zero denominator");
    let g = gcd(numer, denom);
    let (numer, denom) = (numer / g, denom / g);
    let mut d = denom;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{numer}/{denom}");
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return numer.to_string();
    }
    // denom divides 10^digits, so numer/denom has exactly `digits` decimals.
    let scale = 10u128.pow(digits);
    let scaled = numer * (scale / denom);
    let frac = format!("{:0width$}", scaled % scale, width = digits as usize);
    format!("{}.{}", scaled / scale, frac.trim_end_matches('0'))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Wrapper that displays an [`Exact`] via [`render_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactDisplay(pub Exact);

impl fmt::Display for ExactDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_exact(self.0))
    }
}

pub fn serialize_exact<S: Serializer>(value: &Exact, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_exact(*value))
}
