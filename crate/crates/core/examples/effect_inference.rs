// Channel effects spread from builtins to every routine that can reach
// them, or are reported as missing in check mode.

use std::error::Error;

use tsia::{compile, EffectMode};

const SOURCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/putint.tsia"));

/// Inferred declarations of `puts`, `putint` and `main`, then the number of
/// diagnostics check mode reports.
pub fn run_example() -> Result<(Vec<String>, usize), Box<dyn Error>> {
    let program = compile(SOURCE, EffectMode::Infer)?;
    let mut lines = Vec::new();
    for name in ["puts", "putint", "main"] {
        let routine = program.routine(name).ok_or("missing routine")?;
        let decls: Vec<String> =
            routine.nonlocals.iter().map(|n| format!("{}{}", if n.del { "del " } else { "" }, n.channel)).collect();
        let line = format!("{name}(;{};)", decls.join(","));
        println!("{line}");
        lines.push(line);
    }
    let err = compile(SOURCE, EffectMode::Check).expect_err("check mode reports missing effects");
    println!("{err}");
    Ok((lines, err.diagnostics().len()))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
