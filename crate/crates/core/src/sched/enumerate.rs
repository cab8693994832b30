use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::verify::Verifier;
use super::{deadlock, initial_graph, RunError, RunOptions, Summary};
use crate::delegate::execute_task;
use crate::frontend::Program;
use crate::graph::{Graph, Seq, StateKey};

/// Every completion order of a program, counted, with the set of distinct
/// observable results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Number of distinct complete schedules (saturating).
    pub schedules: u128,
    pub summaries: BTreeSet<Summary>,
    /// Distinct graph states visited.
    pub states: usize,
}

impl Enumeration {
    pub fn is_determinate(&self) -> bool {
        self.summaries.len() == 1
    }
}

/// Explores every schedule of `main(;;)`, merging states with equal keys.
pub fn enumerate_schedules(program: &Program, max_states: usize, opts: &RunOptions) -> Result<Enumeration, RunError> {
    let graph = initial_graph(program, opts.channel_rule)?;
    enumerate_graph(graph, program, max_states, opts)
}

type Outcomes = (u128, Rc<BTreeSet<usize>>);

struct Explorer<'p> {
    program: &'p Program,
    opts: &'p RunOptions,
    max_states: usize,
    memo: HashMap<StateKey, Outcomes>,
    summaries: Vec<Summary>,
    index: HashMap<Summary, usize>,
}

impl Explorer<'_> {
    fn visit(&mut self, graph: &Graph) -> Result<Outcomes, RunError> {
        let key = graph.state_key();
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        if self.memo.len() >= self.max_states {
            return Err(RunError::StateBudgetExceeded { limit: self.max_states });
        }
        let found = if graph.is_empty() {
            let summary = Summary::of(graph);
            let next = self.summaries.len();
            let i = *self.index.entry(summary.clone()).or_insert(next);
            if i == next {
                self.summaries.push(summary);
            }
            (1, Rc::new(BTreeSet::from([i])))
        } else {
            let ready = graph.ready_tasks();
            if ready.is_empty() {
                return Err(deadlock(graph));
            }
            let ready_set: BTreeSet<Seq> = ready.iter().cloned().collect();
            let seqs: Vec<Seq> = graph.tasks().map(|t| t.seq.clone()).collect();
            let mut count: u128 = 0;
            let mut outcomes = BTreeSet::new();
            for seq in &ready {
                let mut next = graph.clone();
                let outcome = execute_task(next.task(seq).expect("ready task is live"), self.program, &next)?;
                let done = next.complete_task(seq, outcome)?;
                if next.len() > self.opts.task_limit {
                    return Err(RunError::TaskLimitExceeded { limit: self.opts.task_limit });
                }
                if self.opts.verify {
                    Verifier::default().step(&seqs, &ready_set, &done, &next)?;
                }
                let (n, sub) = self.visit(&next)?;
                count = count.saturating_add(n);
                outcomes.extend(sub.iter().copied());
            }
            (count, Rc::new(outcomes))
        };
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}

/// Explores every schedule of an arbitrary graph.
pub fn enumerate_graph(
    graph: Graph,
    program: &Program,
    max_states: usize,
    opts: &RunOptions,
) -> Result<Enumeration, RunError> {
    let mut explorer =
        Explorer { program, opts, max_states, memo: HashMap::new(), summaries: Vec::new(), index: HashMap::new() };
    let (schedules, found) = explorer.visit(&graph)?;
    let summaries = found.iter().map(|&i| explorer.summaries[i].clone()).collect();
    Ok(Enumeration { schedules, summaries, states: explorer.memo.len() })
}
