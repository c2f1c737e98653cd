use ctq_core::{
    best_tq, load_tasks, metrics_from_schedule, residual_times, run_ctq, save_tasks, simulate_fcfs,
    simulate_fixed_rr, simulate_wrr, total_waiting, waiting_profile, Schedule, Task, TaskSet, Tu,
};
use proptest::prelude::*;

fn task_set(max_n: usize, max_burst: Tu) -> impl Strategy<Value = TaskSet> {
    prop::collection::vec(1..=max_burst, 1..=max_n)
        .prop_map(|bursts| TaskSet::from_bursts(&bursts).unwrap())
}

/// Waiting time by scanning the timeline: idle gaps of the task up to its
/// completion.
fn scanned_waiting(schedule: &Schedule, id: u32) -> Tu {
    let mut last_end = 0;
    let mut waited = 0;
    for s in schedule.slices_of(id) {
        waited += s.start - last_end;
        last_end = s.end;
    }
    waited
}

/// Simulated average waiting time (as TWT) for every quantum, independent of
/// the closed form.
fn simulated_twt(tasks: &TaskSet, tq: Tu) -> Tu {
    let s = simulate_fixed_rr(tasks, tq).unwrap();
    metrics_from_schedule(&s, tasks).unwrap().total_waiting
}

#[test]
fn derived_profile_matches_simulation() {
    let tasks = TaskSet::from_bursts(&[19, 19, 4, 2]).unwrap();
    assert_eq!(simulated_twt(&tasks, 2), 65);
    assert_eq!(waiting_profile(&tasks, 2).unwrap().twt, 65);

    let tasks = TaskSet::from_bursts(&[24, 3, 3]).unwrap();
    let s = simulate_fixed_rr(&tasks, 4).unwrap();
    let m = metrics_from_schedule(&s, &tasks).unwrap();
    let simulated: Vec<Tu> = m.per_task.iter().map(|t| t.waiting).collect();
    assert_eq!(simulated, vec![6, 4, 7]);
}

#[test]
fn identical_bursts_pick_the_whole_burst() {
    // brute force over the simulator, not the closed form
    for n in 1..=6 {
        for b in 1..=30 {
            let tasks = TaskSet::from_bursts(&vec![b; n]).unwrap();
            let min = (1..=b).map(|tq| simulated_twt(&tasks, tq)).min().unwrap();
            let largest_argmin = (1..=b).rev().find(|&tq| simulated_twt(&tasks, tq) == min);
            assert_eq!(largest_argmin, Some(b), "n={n} b={b}");
            assert_eq!(best_tq(&tasks).unwrap().tq, b, "n={n} b={b}");
        }
    }
}

#[test]
fn equal_pair_has_unique_minimizer() {
    let tasks = TaskSet::from_bursts(&[15, 15]).unwrap();
    let scores: Vec<Tu> = (1..=15).map(|tq| simulated_twt(&tasks, tq)).collect();
    let min = *scores.iter().min().unwrap();
    assert_eq!(scores.iter().filter(|&&s| s == min).count(), 1);
    assert_eq!(scores[14], min);
}

#[test]
fn fcfs_is_rr_with_huge_quantum() {
    let tasks = TaskSet::from_bursts(&[20, 20, 5, 3, 1]).unwrap();
    assert_eq!(
        simulate_fixed_rr(&tasks, 1_000).unwrap(),
        simulate_fcfs(&tasks).unwrap()
    );
}

proptest! {
    #[test]
    fn analytic_matches_simulator(tasks in task_set(10, 60), pick in any::<prop::sample::Index>()) {
        let tq = pick.index(tasks.largest_burst() as usize) as Tu + 1;
        let profile = waiting_profile(&tasks, tq).unwrap();
        let schedule = simulate_fixed_rr(&tasks, tq).unwrap();
        let metrics = metrics_from_schedule(&schedule, &tasks).unwrap();
        for (p, m) in profile.per_task.iter().zip(&metrics.per_task) {
            prop_assert_eq!(p.waiting, m.waiting);
            prop_assert_eq!(p.ntq + 1, m.slice_count);
            let last = schedule.slices_of(p.task_id).last().unwrap();
            prop_assert_eq!(p.sltq, last.start);
            prop_assert!(p.sltq >= p.ntq * tq);
        }
        prop_assert_eq!(profile.twt, metrics.total_waiting);
        prop_assert_eq!(total_waiting(&tasks.bursts(), tq), profile.twt);
    }

    #[test]
    fn schedules_conserve_work(tasks in task_set(12, 80), tq in 1..100u64) {
        for schedule in [
            simulate_fixed_rr(&tasks, tq).unwrap(),
            simulate_fcfs(&tasks).unwrap(),
            simulate_wrr(&tasks, tq, 3).unwrap(),
            run_ctq(&tasks, None).unwrap().schedule,
            run_ctq(&tasks, Some(tq)).unwrap().schedule,
        ] {
            let m = metrics_from_schedule(&schedule, &tasks).unwrap();
            prop_assert_eq!(schedule.makespan(), tasks.total_burst());
            prop_assert!(m.total_context_switches < schedule.slices().len() as u64);
            for (t, tm) in tasks.tasks().iter().zip(&m.per_task) {
                let ran: Tu = schedule.slices_of(t.id).map(|s| s.len()).sum();
                prop_assert_eq!(ran, t.burst);
                prop_assert_eq!(tm.waiting, tm.completion - t.burst);
                prop_assert_eq!(tm.waiting, scanned_waiting(&schedule, t.id));
                prop_assert!(tm.context_switches <= tm.slice_count);
            }
        }
    }

    #[test]
    fn large_quantum_is_fcfs(tasks in task_set(10, 60), extra in 0..20u64) {
        let rr = simulate_fixed_rr(&tasks, tasks.largest_burst() + extra).unwrap();
        prop_assert_eq!(rr, simulate_fcfs(&tasks).unwrap());
    }

    #[test]
    fn best_tq_is_a_minimizer(tasks in task_set(8, 50)) {
        let choice = best_tq(&tasks).unwrap();
        prop_assert!((1..=tasks.largest_burst()).contains(&choice.tq));
        let best = waiting_profile(&tasks, choice.tq).unwrap().avgwt;
        prop_assert_eq!(best, choice.avgwt);
        for tq in 1..=tasks.largest_burst() {
            let other = waiting_profile(&tasks, tq).unwrap().avgwt;
            prop_assert!(best <= other);
            if tq > choice.tq {
                prop_assert!(best < other, "tie at larger tq {}", tq);
            }
        }
    }

    #[test]
    fn ctq_trace_is_self_consistent(tasks in task_set(10, 80), first in prop::option::of(1..40u64)) {
        let trace = run_ctq(&tasks, first).unwrap();
        prop_assert_eq!(trace.rounds.len(), trace.tq_sequence.len());
        prop_assert!(trace.rounds.len() as u64 <= tasks.total_burst());
        let mut prev_survivors = usize::MAX;
        for (q, round) in trace.rounds.iter().enumerate() {
            // residuals agree with the quanta used so far
            let expected = residual_times(&tasks, &trace.tq_sequence[..q]);
            prop_assert_eq!(&round.survivors_before, &expected);
            // and with what the schedule actually dispatched
            for r in &round.survivors_before {
                let burst = tasks.tasks().iter().find(|t| t.id == r.task_id).unwrap().burst;
                let ran: Tu = trace
                    .schedule
                    .slices_of(r.task_id)
                    .filter(|s| (s.round as usize) <= q)
                    .map(|s| s.len())
                    .sum();
                prop_assert_eq!(r.remaining, burst - ran);
            }
            prop_assert!(round.survivors_before.len() <= prev_survivors);
            prev_survivors = round.survivors_before.len();
            prop_assert!(!round.completed_this_round.is_empty() || q + 1 < trace.rounds.len());
            if q > 0 || first.is_none() {
                let residuals: Vec<Tu> = round.survivors_before.iter().map(|r| r.remaining).collect();
                let choice = best_tq(&TaskSet::from_bursts(&residuals).unwrap()).unwrap();
                prop_assert_eq!(choice.tq, round.tq_used);
                prop_assert!(round.tq_used <= *residuals.iter().max().unwrap());
            }
        }
        prop_assert!(!trace.rounds.last().unwrap().completed_this_round.is_empty());
        prop_assert_eq!(run_ctq(&tasks, first).unwrap(), trace);
    }

    #[test]
    fn ctq_with_full_first_quantum_is_fcfs(tasks in task_set(10, 60)) {
        let trace = run_ctq(&tasks, Some(tasks.largest_burst())).unwrap();
        prop_assert_eq!(trace.schedule.timeline(), simulate_fcfs(&tasks).unwrap().timeline());
    }

    #[test]
    fn task_file_round_trip(entries in prop::collection::vec((1..1000u64, 1..5u32), 0..20)) {
        let tasks = TaskSet::new(
            entries
                .iter()
                .enumerate()
                .map(|(i, &(b, w))| Task::with_weight(i as u32 * 3, b, w).unwrap())
                .collect(),
        )
        .unwrap();
        let text = save_tasks(&tasks);
        prop_assert_eq!(load_tasks(&text).unwrap(), tasks);
        prop_assert_eq!(load_tasks(&text.replace('\n', "\r\n")).unwrap(), load_tasks(&text).unwrap());
    }

    #[test]
    fn total_waiting_ignores_ids_not_order(bursts in prop::collection::vec(1..60u64, 1..8), tq in 1..60u64) {
        let relabeled = TaskSet::new(
            bursts
                .iter()
                .enumerate()
                .map(|(i, &b)| Task::new(100 - i as u32, b).unwrap())
                .collect(),
        )
        .unwrap();
        let original = TaskSet::from_bursts(&bursts).unwrap();
        prop_assert_eq!(
            waiting_profile(&relabeled, tq).unwrap().twt,
            waiting_profile(&original, tq).unwrap().twt
        );
    }
}
