// Programs the checker rejects before anything runs.

use std::error::Error;

use tsia::frontend::Rule;
use tsia::{compile, EffectMode};

const CASES: [(&str, &str); 4] = [
    ("outalias", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/outalias.tsia"))),
    ("cfact", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cfact.tsia"))),
    ("delmisuse", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/delmisuse.tsia"))),
    ("extent", include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/extent.tsia"))),
];

/// The first rule each program violates.
pub fn run_example() -> Result<Vec<(&'static str, Rule)>, Box<dyn Error>> {
    let mut found = Vec::new();
    for (name, source) in CASES {
        let err = compile(source, EffectMode::Infer).expect_err("program should be rejected");
        println!("{name}:\n{err}\n");
        let first = err.diagnostics().first().ok_or("expected a diagnostic")?;
        found.push((name, first.rule));
    }
    Ok(found)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
