// Every legal completion order of a program, and the outcomes they reach.

use std::error::Error;

use tsia::{compile, enumerate_schedules, EffectMode, RunOptions};

const PROGRAMS: [(&str, &str); 4] = [
    ("fig1", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fig1.tsia"))),
    ("plusmult", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/plusmult.tsia"))),
    ("fact7", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fact7.tsia"))),
    ("puts_del", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/puts_del.tsia"))),
];

/// (name, schedules, distinct outcomes).
pub type Row = (&'static str, u128, usize);

pub fn run_example() -> Result<Vec<Row>, Box<dyn Error>> {
    let mut rows = Vec::new();
    for (name, source) in PROGRAMS {
        let program = compile(source, EffectMode::Infer)?;
        let found = enumerate_schedules(&program, 1_000_000, &RunOptions::default())?;
        println!(
            "{name:>9}: {} schedules, {} states, {} outcomes",
            found.schedules,
            found.states,
            found.summaries.len()
        );
        rows.push((name, found.schedules, found.summaries.len()));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
