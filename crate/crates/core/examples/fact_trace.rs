// Runs the factorial program on the sequential stack and prints every
// graph state along the way.

use std::error::Error;

use tsia::{compile, run_sequential, EffectMode, Policy, RunOptions};

const SOURCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fact7.tsia"));

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let program = compile(SOURCE, EffectMode::Infer)?;
    let opts = RunOptions { trace: true, ..RunOptions::default() };
    let result = run_sequential(&program, Policy::EarliestReady, &opts)?;
    print!("{}", result.trace_text());
    println!("stdout: {}", result.channel_text("stdout"));
    Ok(result.channel_text("stdout"))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
