use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctq_cli::{
    cmd_best_tq, cmd_compare, render_simulation, simulate, CliError, Format, SimAlgo,
    SimulateOptions,
};
use ctq_core::experiment::SweepConfig;
use ctq_core::simulator::DEFAULT_WRR_REFERENCE_WEIGHT;
use ctq_core::{generate, load_tasks, save_tasks, TaskSet, WorkloadSpec};

/// Round-robin and changeable-time-quantum scheduling experiments.
#[derive(Parser)]
#[command(name = "ctqsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheduler on a task file and print its metrics.
    Simulate(SimulateArgs),
    /// Find the fixed quantum with the smallest average waiting time.
    BestTq(BestTqArgs),
    /// Compare fixed RR, CTQ and FCFS over seeded random workloads.
    Compare(CompareArgs),
    /// Write a seeded random task file.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Rr,
    Ctq,
    Fcfs,
    Wrr,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Task file (`id,burst[,weight]` per line); `-` reads stdin.
    #[arg(long)]
    tasks: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Quantum for rr and wrr.
    #[arg(long)]
    tq: Option<u64>,
    /// Round-1 quantum for ctq; optimized when omitted.
    #[arg(long)]
    first_tq: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_WRR_REFERENCE_WEIGHT)]
    wrr_reference_weight: u32,
    /// Include the slice list.
    #[arg(long)]
    gantt: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BestTqArgs {
    #[arg(long)]
    tasks: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct WorkloadArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    burst_min: u64,
    #[arg(long, default_value_t = 500)]
    burst_max: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Step the task count linearly from --n up to this value across runs.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_tasks(path: &Path) -> Result<TaskSet, CliError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    let tasks =
        load_tasks(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if tasks.is_empty() {
        return Err(CliError::Input(format!("{}: no tasks", path.display())));
    }
    Ok(tasks)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let tasks = read_tasks(&args.tasks)?;
            let opts = SimulateOptions {
                algo: match args.algo {
                    AlgoArg::Rr => SimAlgo::Rr,
                    AlgoArg::Ctq => SimAlgo::Ctq,
                    AlgoArg::Fcfs => SimAlgo::Fcfs,
                    AlgoArg::Wrr => SimAlgo::Wrr,
                },
                tq: args.tq,
                first_tq: args.first_tq,
                wrr_reference_weight: args.wrr_reference_weight,
                gantt: args.gantt,
                format: args.output.format.into(),
            };
            let result = simulate(&tasks, &opts)?;
            let text = render_simulation(&result, opts.gantt, opts.format)?;
            emit(&text, args.output.out.as_deref())
        }
        Command::BestTq(args) => {
            let tasks = read_tasks(&args.tasks)?;
            let text = cmd_best_tq(&tasks, args.output.format.into())?;
            emit(&text, args.output.out.as_deref())
        }
        Command::Compare(args) => {
            let config = SweepConfig {
                n: args.workload.n,
                n_max: args.n_max,
                burst_min: args.workload.burst_min,
                burst_max: args.workload.burst_max,
                seed: args.workload.seed,
                runs: args.runs,
            };
            let text = cmd_compare(&config, args.output.format.into())?;
            emit(&text, args.output.out.as_deref())
        }
        Command::Generate(args) => {
            let spec = WorkloadSpec::uniform(
                args.workload.n,
                args.workload.burst_min,
                args.workload.burst_max,
                args.workload.seed,
            );
            let tasks = generate(&spec)?;
            emit(&save_tasks(&tasks), args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ctqsim: {e}");
            e.exit_code()
        }
    }
}
