//! Drivers that repeatedly pick a ready task, execute it and apply its
//! outcome: a sequential stack, a lock-step work-stealing simulation, and an
//! exhaustive enumerator of completion orders.

mod enumerate;
mod parallel;
mod sequential;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use enumerate::{enumerate_graph, enumerate_schedules, Enumeration};
pub use parallel::{run_parallel, run_parallel_on};
pub use sequential::{run_sequential, run_sequential_on};

use crate::delegate::ExecError;
use crate::frontend::{Program, MAIN};
use crate::graph::{ChannelBinding, ChannelRule, Graph, GraphError, Observed, Seq};
use crate::value::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Policy {
    /// The ready task with the smallest sequence key: the top of the stack.
    #[default]
    EarliestReady,
    LatestReady,
    /// Uniform choice, a pure function of (seed, step, ready set).
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Record a rendered snapshot after every completion.
    pub trace: bool,
    /// Check graph and scheduler invariants at every step.
    pub verify: bool,
    /// Largest number of live tasks allowed.
    pub task_limit: usize,
    pub channel_rule: ChannelRule,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { trace: false, verify: false, task_limit: 1_000_000, channel_rule: ChannelRule::Declared }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("program has no main routine")]
    NoMain,
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("deadlock: no task is ready in\n{graph}")]
    Deadlock { graph: String },
    #[error("more than {limit} live tasks")]
    TaskLimitExceeded { limit: usize },
    #[error("more than {limit} distinct states")]
    StateBudgetExceeded { limit: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Exec { tick: usize, worker: usize, task: String },
    Steal { tick: usize, worker: usize, task: String, victim: usize },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Exec { tick, worker, task } => write!(f, "tick {tick} worker {worker} exec {task}"),
            Event::Steal { tick, worker, task, victim } => {
                write!(f, "tick {tick} worker {worker} steal {task} from {victim}")
            }
        }
    }
}

/// The observable result of a run: final item values and channel logs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summary {
    pub finals: BTreeMap<String, Observed>,
    pub channels: BTreeMap<String, Vec<Scalar>>,
}

impl Summary {
    fn of(graph: &Graph) -> Summary {
        Summary { finals: graph.observations().clone(), channels: graph.channels().clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunResult {
    pub finals: BTreeMap<String, Observed>,
    pub channels: BTreeMap<String, Vec<Scalar>>,
    /// Rendered graph before the first step and after every completion.
    pub trace: Vec<String>,
    pub events: Vec<Event>,
    pub steps: usize,
    pub ticks: usize,
    pub steals: usize,
}

impl RunResult {
    fn finish(&mut self, graph: &Graph) {
        self.finals = graph.observations().clone();
        self.channels = graph.channels().clone();
    }

    pub fn summary(&self) -> Summary {
        Summary { finals: self.finals.clone(), channels: self.channels.clone() }
    }

    /// Concatenated text written to `channel`.
    pub fn channel_text(&self, channel: &str) -> String {
        self.channels.get(channel).map_or_else(String::new, |log| log.iter().map(Scalar::to_output).collect())
    }

    /// Snapshots separated by `--- step N ---` lines.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for (n, snapshot) in self.trace.iter().enumerate() {
            out.push_str(&format!("--- step {n} ---\n"));
            out.push_str(snapshot);
        }
        out
    }

    pub fn events_text(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let channels: serde_json::Map<String, serde_json::Value> = self
            .channels
            .iter()
            .map(|(k, log)| (k.clone(), log.iter().map(Scalar::to_json).collect::<Vec<_>>().into()))
            .collect();
        let finals: serde_json::Map<String, serde_json::Value> =
            self.finals.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        serde_json::json!({
            "channels": channels,
            "finals": finals,
            "steps": self.steps,
            "steals": self.steals,
        })
    }
}

/// A graph holding the single task `main(;;)`.
pub fn initial_graph(program: &Program, rule: ChannelRule) -> Result<Graph, RunError> {
    let main = program.main().ok_or(RunError::NoMain)?;
    let mut graph = Graph::with_channel_rule(rule);
    let channels = main
        .nonlocals
        .iter()
        .map(|n| ChannelBinding { channel: n.channel.clone(), del: n.del, origin: n.origin })
        .collect();
    graph.insert_task(Seq::root(1), MAIN, vec![], channels);
    Ok(graph)
}

fn deadlock(graph: &Graph) -> RunError {
    RunError::Deadlock { graph: graph.render() }
}
