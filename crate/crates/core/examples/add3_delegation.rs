// A task replaces itself with the tasks of its routine body.

use std::error::Error;

use tsia::delegate::execute_task;
use tsia::graph::Seq;
use tsia::{compile, run_sequential_on, EffectMode, Graph, Policy, RunOptions};

const SOURCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/add3.tsia"));

/// Returns the graph after one delegation step and the final value of `p`.
pub fn run_example() -> Result<(String, i64), Box<dyn Error>> {
    let program = compile(SOURCE, EffectMode::Infer)?;
    let mut graph = Graph::parse("add3(6,9,17;;p)")?;
    println!("before:\n{graph}");

    let first = Seq::root(1);
    let outcome = execute_task(graph.task(&first).expect("loaded"), &program, &graph)?;
    graph.complete_task(&first, outcome)?;
    let expanded = graph.render();
    println!("after one step:\n{expanded}");

    let result = run_sequential_on(graph, &program, Policy::EarliestReady, &RunOptions::default())?;
    let p = result.finals["p"].value().ok_or("p is undefined")?.to_string().parse()?;
    println!("p = {p}");
    Ok((expanded, p))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
