//! Commands behind the `ctqsim` binary, kept in a library so the output
//! formats can be tested without spawning processes.

use std::fmt::Write as _;
use std::process::ExitCode;

use ctq_core::experiment::{
    run_compare, Arm, CompareReport, ExperimentRow, Mean, SummaryRow, SweepConfig,
};
use ctq_core::{
    best_tq, metrics_from_schedule, render_exact, render_ratio, run_ctq, simulate_fcfs,
    simulate_fixed_rr, simulate_wrr, CtqTrace, MetricsReport, QuantumChoice, SchedError, Schedule,
    TaskSet, Tu,
};
use serde::Serialize;

pub const CSV_HEADER: [&str; 10] = [
    "workload_id",
    "n",
    "algorithm",
    "tq_policy",
    "avg_wt",
    "avg_tat",
    "context_switches",
    "makespan",
    "rounds",
    "tq_sequence",
];

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing flags.
    Usage(String),
    /// Unreadable or invalid input.
    Input(String),
    /// A produced schedule failed its own checks.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Input(_) => ExitCode::from(3),
            CliError::Internal(_) => ExitCode::from(4),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SchedError> for CliError {
    fn from(e: SchedError) -> Self {
        match e {
            SchedError::InvariantViolation(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimAlgo {
    Rr,
    Ctq,
    Fcfs,
    Wrr,
}

impl SimAlgo {
    fn as_str(self) -> &'static str {
        match self {
            SimAlgo::Rr => "rr",
            SimAlgo::Ctq => "ctq",
            SimAlgo::Fcfs => "fcfs",
            SimAlgo::Wrr => "wrr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulateOptions {
    pub algo: SimAlgo,
    pub tq: Option<Tu>,
    pub first_tq: Option<Tu>,
    pub wrr_reference_weight: u32,
    pub gantt: bool,
    pub format: Format,
}

/// Result of one `simulate` invocation before rendering.
#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub algo: SimAlgo,
    pub tq: Option<Tu>,
    pub schedule: Schedule,
    pub metrics: MetricsReport,
    pub ctq: Option<CtqTrace>,
}

pub fn simulate(tasks: &TaskSet, opts: &SimulateOptions) -> Result<SimulationOutput, CliError> {
    let need_tq = || {
        opts.tq.ok_or_else(|| {
            CliError::Usage(format!(
                "--tq is required for --algo {}",
                opts.algo.as_str()
            ))
        })
    };
    let (schedule, ctq, tq) = match opts.algo {
        SimAlgo::Rr => {
            let tq = need_tq()?;
            (simulate_fixed_rr(tasks, tq)?, None, Some(tq))
        }
        SimAlgo::Wrr => {
            let tq = need_tq()?;
            (
                simulate_wrr(tasks, tq, opts.wrr_reference_weight)?,
                None,
                Some(tq),
            )
        }
        SimAlgo::Fcfs => (simulate_fcfs(tasks)?, None, None),
        SimAlgo::Ctq => {
            let trace = run_ctq(tasks, opts.first_tq)?;
            (trace.schedule.clone(), Some(trace), opts.first_tq)
        }
    };
    let metrics = match &ctq {
        Some(trace) => trace.metrics.clone(),
        None => metrics_from_schedule(&schedule, tasks)?,
    };
    Ok(SimulationOutput {
        algo: opts.algo,
        tq,
        schedule,
        metrics,
        ctq,
    })
}

pub fn render_gantt(schedule: &Schedule) -> String {
    let mut out = String::from("task_id,start,end,round\n");
    for s in schedule.slices() {
        let _ = writeln!(out, "{},{},{},{}", s.task_id, s.start, s.end, s.round);
    }
    out
}

fn join_tq(seq: &[Tu]) -> String {
    seq.iter().map(Tu::to_string).collect::<Vec<_>>().join("|")
}

pub fn render_simulation(
    out: &SimulationOutput,
    gantt: bool,
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Json<'a> {
                algorithm: &'static str,
                tq: Option<Tu>,
                #[serde(skip_serializing_if = "Option::is_none")]
                tq_sequence: Option<&'a [Tu]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                rounds: Option<&'a [ctq_core::RoundRecord]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                schedule: Option<&'a Schedule>,
                metrics: &'a MetricsReport,
            }
            let json = Json {
                algorithm: out.algo.as_str(),
                tq: out.tq,
                tq_sequence: out.ctq.as_ref().map(|t| t.tq_sequence.as_slice()),
                rounds: out.ctq.as_ref().map(|t| t.rounds.as_slice()),
                schedule: gantt.then_some(&out.schedule),
                metrics: &out.metrics,
            };
            let mut text = serde_json::to_string_pretty(&json)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut text = String::new();
            if gantt {
                text.push_str(&render_gantt(&out.schedule));
                text.push('\n');
            }
            let _ = writeln!(text, "algorithm: {}", out.algo.as_str());
            if let Some(tq) = out.tq {
                let key = if out.algo == SimAlgo::Ctq {
                    "first_tq"
                } else {
                    "tq"
                };
                let _ = writeln!(text, "{key}: {tq}");
            }
            if let Some(trace) = &out.ctq {
                let _ = writeln!(text, "rounds: {}", trace.rounds.len());
                let _ = writeln!(text, "tq_sequence: {}", join_tq(&trace.tq_sequence));
            }
            text.push_str(&render_metrics(&out.metrics));
            Ok(text)
        }
    }
}

pub fn render_metrics(m: &MetricsReport) -> String {
    let mut text = String::from("task_id,completion,turnaround,waiting,context_switches,slices\n");
    for t in &m.per_task {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            t.task_id, t.completion, t.turnaround, t.waiting, t.context_switches, t.slice_count
        );
    }
    let _ = writeln!(text, "total_waiting: {}", m.total_waiting);
    let _ = writeln!(text, "avg_waiting: {}", render_exact(m.avg_waiting));
    let _ = writeln!(text, "avg_turnaround: {}", render_exact(m.avg_turnaround));
    let _ = writeln!(text, "context_switches: {}", m.total_context_switches);
    let _ = writeln!(text, "makespan: {}", m.makespan);
    text
}

pub fn render_best_tq(choice: &QuantumChoice, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(choice)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Internal(e.to_string())),
        Format::Csv => Ok(format!(
            "tq: {}\navg_waiting: {}\ncandidates_evaluated: {}\ntied: {}\n",
            choice.tq,
            render_exact(choice.avgwt),
            choice.candidates_evaluated,
            choice.tied
        )),
    }
}

pub fn cmd_best_tq(tasks: &TaskSet, format: Format) -> Result<String, CliError> {
    render_best_tq(&best_tq(tasks)?, format)
}

pub fn cmd_compare(config: &SweepConfig, format: Format) -> Result<String, CliError> {
    let report = run_compare(config)?;
    render_compare(&report, format)
}

fn mean(m: Mean) -> String {
    render_ratio(*m.numer(), *m.denom())
}

fn summary_policy(arm: Arm) -> &'static str {
    match arm {
        Arm::Rr => "best-initial",
        Arm::Ctq => "optimized",
        Arm::Fcfs => "none",
    }
}

fn row_record(r: &ExperimentRow) -> [String; 10] {
    [
        r.workload_id.to_string(),
        r.n.to_string(),
        r.algorithm.as_str().into(),
        r.tq_policy.render(),
        render_exact(r.metrics.avg_waiting),
        render_exact(r.metrics.avg_turnaround),
        r.metrics.total_context_switches.to_string(),
        r.metrics.makespan.to_string(),
        r.rounds().map(|n| n.to_string()).unwrap_or_default(),
        r.tq_sequence.as_deref().map(join_tq).unwrap_or_default(),
    ]
}

fn summary_record(s: &SummaryRow) -> [String; 10] {
    [
        "mean".into(),
        mean(s.n),
        s.algorithm.as_str().into(),
        summary_policy(s.algorithm).into(),
        mean(s.avg_wt),
        mean(s.avg_tat),
        mean(s.context_switches),
        mean(s.makespan),
        s.rounds.map(mean).unwrap_or_default(),
        String::new(),
    ]
}

/// CSV: one row per (workload, arm), then one `mean` row per arm.
/// JSON: `{"config", "rows", "summary"}` with rationals as strings.
pub fn render_compare(report: &CompareReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Internal(e.to_string());
            w.write_record(CSV_HEADER).map_err(io)?;
            for r in report.rows() {
                w.write_record(row_record(r)).map_err(io)?;
            }
            for s in &report.summary {
                w.write_record(summary_record(s)).map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                workload_id: usize,
                n: usize,
                algorithm: &'static str,
                tq_policy: String,
                avg_wt: String,
                avg_tat: String,
                context_switches: u64,
                makespan: Tu,
                #[serde(skip_serializing_if = "Option::is_none")]
                rounds: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                tq_sequence: Option<Vec<Tu>>,
            }
            #[derive(Serialize)]
            struct Summary {
                algorithm: &'static str,
                tq_policy: &'static str,
                runs: usize,
                n: String,
                avg_wt: String,
                avg_tat: String,
                context_switches: String,
                makespan: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                rounds: Option<String>,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                config: &'a SweepConfig,
                rows: Vec<Row>,
                summary: Vec<Summary>,
            }
            let doc = Doc {
                config: &report.config,
                rows: report
                    .rows()
                    .map(|r| Row {
                        workload_id: r.workload_id,
                        n: r.n,
                        algorithm: r.algorithm.as_str(),
                        tq_policy: r.tq_policy.render(),
                        avg_wt: render_exact(r.metrics.avg_waiting),
                        avg_tat: render_exact(r.metrics.avg_turnaround),
                        context_switches: r.metrics.total_context_switches,
                        makespan: r.metrics.makespan,
                        rounds: r.rounds(),
                        tq_sequence: r.tq_sequence.clone(),
                    })
                    .collect(),
                summary: report
                    .summary
                    .iter()
                    .map(|s| Summary {
                        algorithm: s.algorithm.as_str(),
                        tq_policy: summary_policy(s.algorithm),
                        runs: s.runs,
                        n: mean(s.n),
                        avg_wt: mean(s.avg_wt),
                        avg_tat: mean(s.avg_tat),
                        context_switches: mean(s.context_switches),
                        makespan: mean(s.makespan),
                        rounds: s.rounds.map(mean),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}
