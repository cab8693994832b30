// Disjoint halves of one array are produced and consumed on different
// workers.

use std::error::Error;

use tsia::{compile, run_parallel, EffectMode, RunOptions, RunResult};

const SOURCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/arrays.tsia"));

pub fn run_example() -> Result<RunResult, Box<dyn Error>> {
    let program = compile(SOURCE, EffectMode::Infer)?;
    let result = run_parallel(&program, 2, 0, &RunOptions { verify: true, ..RunOptions::default() })?;
    print!("{}", result.events_text());
    let h = &result.finals["h"];
    println!(
        "h: {} of {} elements defined, h[0] = {:?}, h[9999] = {:?}",
        h.slots.iter().filter(|s| s.is_some()).count(),
        h.slots.len(),
        h.slots[0],
        h.slots[9999]
    );
    Ok(result)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
