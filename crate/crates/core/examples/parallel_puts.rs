// Two `puts` calls that only delegate stdout may run side by side, while
// the characters still arrive in program order.

use std::error::Error;

use tsia::sched::Event;
use tsia::{compile, run_parallel, EffectMode, RunOptions};

const SOURCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/puts_del.tsia"));

fn puts_in_one_tick(events: &[Event]) -> Option<usize> {
    let execs: Vec<(usize, &str)> = events
        .iter()
        .filter_map(|e| match e {
            Event::Exec { tick, task, .. } if task.starts_with("puts(") => Some((*tick, task.as_str())),
            _ => None,
        })
        .collect();
    execs.iter().find(|(t, _)| execs.iter().filter(|(u, _)| u == t).count() > 1).map(|(t, _)| *t)
}

/// (workers, seed, tick)
pub type Sighting = (usize, u64, usize);

/// The first configuration in which two puts tasks run together.
pub fn run_example() -> Result<Option<Sighting>, Box<dyn Error>> {
    let program = compile(SOURCE, EffectMode::Infer)?;
    for workers in 2..=4 {
        for seed in 0..16 {
            let result = run_parallel(&program, workers, seed, &RunOptions::default())?;
            assert_eq!(result.channel_text("stdout"), "ABCD");
            if let Some(tick) = puts_in_one_tick(&result.events) {
                print!("{}", result.events_text());
                println!("workers {workers}, seed {seed}: two puts tasks in tick {tick}");
                return Ok(Some((workers, seed, tick)));
            }
        }
    }
    Ok(None)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
