use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::verify::Verifier;
use super::{deadlock, initial_graph, Policy, RunError, RunOptions, RunResult};
use crate::delegate::execute_task;
use crate::frontend::Program;
use crate::graph::{Graph, Seq};

/// Runs `main(;;)` to completion, one task at a time.
pub fn run_sequential(program: &Program, policy: Policy, opts: &RunOptions) -> Result<RunResult, RunError> {
    let graph = initial_graph(program, opts.channel_rule)?;
    run_sequential_on(graph, program, policy, opts)
}

fn pick(ready: &[Seq], policy: Policy, step: usize) -> &Seq {
    match policy {
        Policy::EarliestReady => &ready[0],
        Policy::LatestReady => &ready[ready.len() - 1],
        Policy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(step as u64);
            &ready[rng.gen_range(0..ready.len())]
        }
    }
}

/// Runs an arbitrary graph to completion, one task at a time.
pub fn run_sequential_on(
    mut graph: Graph,
    program: &Program,
    policy: Policy,
    opts: &RunOptions,
) -> Result<RunResult, RunError> {
    let mut result = RunResult::default();
    let mut verifier = Verifier::default();
    if opts.trace {
        result.trace.push(graph.render());
    }
    while !graph.is_empty() {
        let ready = graph.ready_tasks();
        if ready.is_empty() {
            return Err(deadlock(&graph));
        }
        let seq = pick(&ready, policy, result.steps).clone();
        let outcome = execute_task(graph.task(&seq).expect("ready task is live"), program, &graph)?;
        let seqs_before: Vec<Seq> = if opts.verify { graph.tasks().map(|t| t.seq.clone()).collect() } else { vec![] };
        let done = graph.complete_task(&seq, outcome)?;
        result.steps += 1;
        if graph.len() > opts.task_limit {
            return Err(RunError::TaskLimitExceeded { limit: opts.task_limit });
        }
        if opts.verify {
            let ready: BTreeSet<Seq> = ready.into_iter().collect();
            verifier.step(&seqs_before, &ready, &done, &graph)?;
        }
        if opts.trace {
            result.trace.push(graph.render());
        }
    }
    result.finish(&graph);
    Ok(result)
}
