// Graphs written directly as text, run without any source program.

use std::error::Error;

use tsia::{alpha_equivalent, run_parallel_on, run_sequential_on, Graph, Policy, Program, RunOptions, Scalar, Value};

fn preset() -> Result<Graph, Box<dyn Error>> {
    let mut graph = Graph::parse("plus(u,v;;a) plus(v,w;;b) mult(a,b;;c)")?;
    for (name, v) in [("u", 2), ("v", 3), ("w", 4)] {
        graph.define(name, Value::Scalar(Scalar::Int(v)))?;
    }
    Ok(graph)
}

/// Final `c` from a sequential and a two-worker run.
pub fn run_example() -> Result<(String, String), Box<dyn Error>> {
    let graph = preset()?;
    print!("{graph}");
    let renamed = Graph::parse("plus(x,y;;p) plus(y,z;;q) mult(p,q;;r)")?;
    println!("alpha-equivalent to a renamed copy: {}", alpha_equivalent(&graph, &renamed));

    let builtins = Program::builtins();
    let opts = RunOptions::default();
    let seq = run_sequential_on(preset()?, &builtins, Policy::LatestReady, &opts)?;
    let par = run_parallel_on(preset()?, &builtins, 2, 0, &opts)?;
    print!("{}", par.events_text());
    let c = |r: &tsia::RunResult| r.finals["c"].to_string();
    println!("c = {} sequentially, {} on two workers", c(&seq), c(&par));
    Ok((c(&seq), c(&par)))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
