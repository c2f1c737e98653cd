use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use ctq_cli::CSV_HEADER;
use ctq_core::{load_tasks, metrics_from_schedule, Schedule, Slice, TaskSet};

fn ctqsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctqsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn task_file(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::File::create(&path)
        .and_then(|mut f| f.write_all(body.as_bytes()))
        .unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse_gantt(text: &str) -> Schedule {
    let slices = text
        .lines()
        .skip_while(|l| *l != "task_id,start,end,round")
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<u64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            Slice {
                task_id: f[0] as u32,
                start: f[1],
                end: f[2],
                round: f[3] as u32,
            }
        })
        .collect();
    Schedule::from_slices(slices).unwrap()
}

#[test]
fn simulate_rr_gantt_dump() {
    let dir = tempfile::tempdir().unwrap();
    let tasks = task_file(dir.path(), "t.txt", "1,24\n2,3\n3,3\n");
    let out = ctqsim(&[
        "simulate", "--tasks", &tasks, "--algo", "rr", "--tq", "4", "--gantt",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let schedule = parse_gantt(&text);
    assert_eq!(schedule.starts(), vec![0, 4, 7, 10, 14, 18, 22, 26]);
    assert_eq!(schedule.makespan(), 30);
    assert!(text.contains("context_switches: 1\n"));
}

#[test]
fn simulate_reproduces_both_worked_runs() {
    let dir = tempfile::tempdir().unwrap();
    let tasks = task_file(dir.path(), "t.txt", "1,20\n2,20\n3,5\n4,3\n5,1\n");

    let ctq = stdout(&ctqsim(&[
        "simulate",
        "--tasks",
        &tasks,
        "--algo",
        "ctq",
        "--first-tq",
        "1",
    ]));
    for line in [
        "avg_waiting: 14.2",
        "avg_turnaround: 24",
        "context_switches: 9",
        "tq_sequence: 1|2|2|15",
    ] {
        assert!(ctq.contains(line), "missing {line} in\n{ctq}");
    }

    let rr = stdout(&ctqsim(&[
        "simulate", "--tasks", &tasks, "--algo", "rr", "--tq", "1",
    ]));
    for line in [
        "avg_waiting: 17",
        "avg_turnaround: 26.8",
        "context_switches: 44",
    ] {
        assert!(rr.contains(line), "missing {line} in\n{rr}");
    }
}

#[test]
fn gantt_dump_recomputes_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let body = "1,20\n2,20\n3,5\n4,3\n5,1\n";
    let tasks_path = task_file(dir.path(), "t.txt", body);
    let text = stdout(&ctqsim(&[
        "simulate",
        "--tasks",
        &tasks_path,
        "--algo",
        "ctq",
        "--first-tq",
        "1",
        "--gantt",
    ]));
    let tasks: TaskSet = load_tasks(body).unwrap();
    let m = metrics_from_schedule(&parse_gantt(&text), &tasks).unwrap();
    assert_eq!(m.total_context_switches, 9);
    assert_eq!(m.completions(), vec![34, 49, 19, 13, 5]);
}

#[test]
fn simulate_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let tasks = task_file(dir.path(), "t.txt", "1,15\n2,15\n");
    let out = ctqsim(&[
        "simulate", "--tasks", &tasks, "--algo", "ctq", "--format", "json", "--gantt",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tq_sequence"], serde_json::json!([15]));
    assert_eq!(v["metrics"]["avg_waiting"], "7.5");
    assert_eq!(v["schedule"]["slices"].as_array().unwrap().len(), 2);
}

#[test]
fn best_tq_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("1,19\n2,19\n3,4\n4,2\n", 2),
        ("1,15\n2,15\n", 15),
        ("7,9\n", 9),
    ];
    for (i, (body, want)) in cases.iter().enumerate() {
        let tasks = task_file(dir.path(), &format!("t{i}.txt"), body);
        let out = ctqsim(&["best-tq", "--tasks", &tasks]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.starts_with(&format!("tq: {want}\n")), "{text}");
        assert!(text.contains("candidates_evaluated:"));
    }
}

#[test]
fn compare_csv_layout() {
    let out = ctqsim(&[
        "compare",
        "--n",
        "5",
        "--burst-min",
        "1",
        "--burst-max",
        "500",
        "--seed",
        "9",
        "--runs",
        "30",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 90 + 3);
    let algos: Vec<&str> = lines[1..91]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert!(algos.chunks(3).all(|c| c == ["rr", "ctq", "fcfs"]));
    assert!(lines[91..].iter().all(|l| l.starts_with("mean,")));
    // tq_sequence column only on ctq rows
    for l in &lines[1..91] {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 10);
        assert_eq!(cols[2] == "ctq", !cols[9].is_empty(), "{l}");
    }
}

#[test]
fn compare_with_equal_bursts_matches_fcfs() {
    let out = ctqsim(&[
        "compare",
        "--n",
        "4",
        "--burst-min",
        "30",
        "--burst-max",
        "30",
        "--runs",
        "1",
    ]);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .take(3)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows[1][4..8], rows[2][4..8]);
}

#[test]
fn compare_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.json");
    let out = ctqsim(&[
        "compare",
        "--n",
        "6",
        "--runs",
        "3",
        "--seed",
        "5",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn generate_is_seeded() {
    let a = ctqsim(&[
        "generate",
        "--n",
        "8",
        "--burst-min",
        "1",
        "--burst-max",
        "500",
        "--seed",
        "3",
    ]);
    let b = ctqsim(&[
        "generate",
        "--n",
        "8",
        "--burst-min",
        "1",
        "--burst-max",
        "500",
        "--seed",
        "3",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let tasks = load_tasks(&stdout(&a)).unwrap();
    assert_eq!(tasks.len(), 8);
    assert!(tasks.bursts().iter().all(|b| (1..=500).contains(b)));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = task_file(dir.path(), "good.txt", "1,5\n");
    let bad = task_file(dir.path(), "bad.txt", "1,0\n");
    let empty = task_file(dir.path(), "empty.txt", "# nothing\n");

    assert_eq!(
        ctqsim(&["simulate", "--tasks", &good, "--algo", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ctqsim(&["simulate", "--tasks", &good, "--algo", "rr"])
            .status
            .code(),
        Some(2)
    );
    let out = ctqsim(&["simulate", "--tasks", &bad, "--algo", "fcfs"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(
        ctqsim(&["best-tq", "--tasks", &empty]).status.code(),
        Some(3)
    );
    assert_eq!(
        ctqsim(&["simulate", "--tasks", "/nonexistent/x", "--algo", "fcfs"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ctqsim(&["compare", "--n", "0"]).status.code(), Some(3));
    assert_eq!(
        ctqsim(&["compare", "--n", "3", "--runs", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        ctqsim(&[
            "generate",
            "--n",
            "3",
            "--burst-min",
            "9",
            "--burst-max",
            "2"
        ])
        .status
        .code(),
        Some(3)
    );
}
