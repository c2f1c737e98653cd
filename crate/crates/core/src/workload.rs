//! Seeded task-set generation and the plain-text task file format.
//!
//! Generation uses ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`) and
//! `Rng::gen_range` over the inclusive burst range, so a given workload spec yields
//! the same task set on every platform.
//!
//! Task files hold one task per line as `id,burst[,weight]`. Blank lines
//! and `#` comments are ignored; CRLF is accepted and LF is written.
//! Labels are not stored.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, SchedError};
use crate::model::{Task, TaskId, TaskSet, Tu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BurstDistribution {
    #[default]
    UniformInteger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WorkloadSpec {
    pub n: usize,
    pub burst_min: Tu,
    pub burst_max: Tu,
    pub seed: u64,
    pub distribution: BurstDistribution,
}

impl WorkloadSpec {
    pub fn uniform(n: usize, burst_min: Tu, burst_max: Tu, seed: u64) -> Self {
        Self {
            n,
            burst_min,
            burst_max,
            seed,
            distribution: BurstDistribution::UniformInteger,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SchedError::InvalidWorkload("n must be at least 1".into()));
        }
        if self.burst_min == 0 {
            return Err(SchedError::InvalidWorkload(
                "burst_min must be at least 1".into(),
            ));
        }
        if self.burst_min > self.burst_max {
            return Err(SchedError::InvalidWorkload(format!(
                "empty burst range {}..={}",
                self.burst_min, self.burst_max
            )));
        }
        Ok(())
    }
}

/// Draws `n` bursts independently and uniformly from the closed range.
/// Tasks are numbered `1..=n`.
pub fn generate(spec: &WorkloadSpec) -> Result<TaskSet> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bursts: Vec<Tu> = match spec.distribution {
        BurstDistribution::UniformInteger => (0..spec.n)
            .map(|_| rng.gen_range(spec.burst_min..=spec.burst_max))
            .collect(),
    };
    TaskSet::from_bursts(&bursts)
}

pub fn load_tasks(source: &str) -> Result<TaskSet> {
    let mut tasks = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let parse_err = |message: String| SchedError::Parse {
            line: line_no,
            message,
        };
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_err(format!(
                "expected `id,burst[,weight]`, found {} field(s)",
                fields.len()
            )));
        }
        let id: TaskId = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("invalid task id `{}`", fields[0])))?;
        let burst: Tu = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("invalid burst `{}`", fields[1])))?;
        let weight: u32 = match fields.get(2) {
            Some(w) => w
                .parse()
                .map_err(|_| parse_err(format!("invalid weight `{w}`")))?,
            None => 1,
        };
        if burst < 1 {
            return Err(parse_err(format!("task {id}: burst must be at least 1")));
        }
        if weight < 1 {
            return Err(parse_err(format!("task {id}: weight must be at least 1")));
        }
        if !seen.insert(id) {
            return Err(parse_err(format!("duplicate task id {id}")));
        }
        tasks.push(Task::with_weight(id, burst, weight).map_err(|e| parse_err(e.to_string()))?);
    }
    TaskSet::new(tasks)
}

/// Writes `id,burst` lines, appending the weight only when it is not 1.
pub fn save_tasks(tasks: &TaskSet) -> String {
    let mut out = String::new();
    for t in tasks.tasks() {
        if t.weight == 1 {
            let _ = writeln!(out, "{},{}", t.id, t.burst);
        } else {
            let _ = writeln!(out, "{},{},{}", t.id, t.burst, t.weight);
        }
    }
    out
}
