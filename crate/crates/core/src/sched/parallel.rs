use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::verify::Verifier;
use super::{deadlock, initial_graph, Event, RunError, RunOptions, RunResult};
use crate::delegate::execute_task;
use crate::frontend::Program;
use crate::graph::{Graph, Seq};

/// Runs `main(;;)` on `workers` simulated workers in lock-step ticks.
pub fn run_parallel(program: &Program, workers: usize, seed: u64, opts: &RunOptions) -> Result<RunResult, RunError> {
    let graph = initial_graph(program, opts.channel_rule)?;
    run_parallel_on(graph, program, workers, seed, opts)
}

struct Selection {
    worker: usize,
    seq: Seq,
}

/// Runs an arbitrary graph on simulated workers. Worker 0 starts out owning
/// every task.
///
/// Each tick, workers in id order either take their own smallest ready task
/// or probe one victim, chosen by a seeded generator among workers holding
/// unclaimed tasks, and steal its largest ready task.
/// Selected tasks then execute and complete in worker order. Children stay
/// with the worker that created them.
pub fn run_parallel_on(
    mut graph: Graph,
    program: &Program,
    workers: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<RunResult, RunError> {
    let workers = workers.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owned: Vec<BTreeSet<Seq>> = vec![BTreeSet::new(); workers];
    owned[0] = graph.tasks().map(|t| t.seq.clone()).collect();
    let mut result = RunResult::default();
    let mut verifier = Verifier::default();
    if opts.trace {
        result.trace.push(graph.render());
    }

    while !graph.is_empty() {
        result.ticks += 1;
        let tick = result.ticks;
        let ready: BTreeSet<Seq> = graph.ready_tasks().into_iter().collect();
        let mut claimed: BTreeSet<Seq> = BTreeSet::new();
        let mut selections = Vec::new();

        for w in 0..workers {
            let available = |q: &BTreeSet<Seq>, claimed: &BTreeSet<Seq>| {
                q.iter().filter(|s| ready.contains(*s) && !claimed.contains(*s)).cloned().collect::<Vec<_>>()
            };
            if let Some(seq) = available(&owned[w], &claimed).first().cloned() {
                result.events.push(Event::Exec { tick, worker: w, task: render(&graph, &seq) });
                claimed.insert(seq.clone());
                selections.push(Selection { worker: w, seq });
                continue;
            }
            let victims: Vec<usize> =
                (0..workers).filter(|&v| v != w && owned[v].iter().any(|s| !claimed.contains(s))).collect();
            if victims.is_empty() {
                continue;
            }
            let v = victims[rng.gen_range(0..victims.len())];
            let Some(seq) = available(&owned[v], &claimed).pop() else {
                continue;
            };
            if opts.verify {
                if let Some(s) = available(&owned[v], &claimed).iter().find(|s| **s > seq) {
                    return Err(RunError::InvariantViolation(format!("stole {seq} while {s} was larger")));
                }
            }
            owned[v].remove(&seq);
            owned[w].insert(seq.clone());
            let task = render(&graph, &seq);
            result.events.push(Event::Steal { tick, worker: w, task: task.clone(), victim: v });
            result.events.push(Event::Exec { tick, worker: w, task });
            result.steals += 1;
            claimed.insert(seq.clone());
            selections.push(Selection { worker: w, seq });
        }

        if selections.is_empty() {
            return Err(deadlock(&graph));
        }
        for Selection { worker, seq } in selections {
            let (seqs_before, ready_before) = if opts.verify {
                if !graph.is_ready(&seq) {
                    return Err(RunError::InvariantViolation(format!("{seq} stopped being ready within a tick")));
                }
                let seqs: Vec<Seq> = graph.tasks().map(|t| t.seq.clone()).collect();
                (seqs, graph.ready_tasks().into_iter().collect())
            } else {
                (vec![], BTreeSet::new())
            };
            let outcome = execute_task(graph.task(&seq).expect("selected task is live"), program, &graph)?;
            let done = graph.complete_task(&seq, outcome)?;
            owned[worker].remove(&seq);
            owned[worker].extend(done.children.iter().cloned());
            result.steps += 1;
            if graph.len() > opts.task_limit {
                return Err(RunError::TaskLimitExceeded { limit: opts.task_limit });
            }
            if opts.verify {
                verifier.step(&seqs_before, &ready_before, &done, &graph)?;
            }
            if opts.trace {
                result.trace.push(graph.render());
            }
        }

        if opts.verify {
            let total: usize = owned.iter().map(BTreeSet::len).sum();
            if total != graph.len() || graph.tasks().any(|t| !owned.iter().any(|q| q.contains(&t.seq))) {
                return Err(RunError::InvariantViolation("task ownership is not a partition".into()));
            }
        }
    }
    result.finish(&graph);
    Ok(result)
}

fn render(graph: &Graph, seq: &Seq) -> String {
    graph.render_task(graph.task(seq).expect("selected task is live"))
}
