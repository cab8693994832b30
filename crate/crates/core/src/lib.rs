//! A task-graph runtime: programs are compiled to routines, loaded as a
//! graph of tasks over items and channels, and executed by delegation under
//! sequential, simulated-parallel or exhaustive schedulers.

pub mod cli;
pub mod delegate;
pub mod frontend;
pub mod graph;
pub mod sched;
pub mod value;

pub use frontend::{compile, EffectMode, FrontendError, Program};
pub use graph::{alpha_equivalent, ChannelRule, Graph, Seq};
pub use sched::{
    enumerate_graph, enumerate_schedules, run_parallel, run_parallel_on, run_sequential, run_sequential_on,
    Enumeration, Policy, RunError, RunOptions, RunResult, Summary,
};
pub use value::{Scalar, Value};
