#![allow(dead_code)]

use std::path::PathBuf;

use tsia::{compile, EffectMode, Program, RunOptions};

macro_rules! corpus_file {
    ($name:literal) => {
        ($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $name, ".tsia")))
    };
}

/// Programs that compile and run.
pub const RUNNABLE: [(&str, &str); 9] = [
    corpus_file!("plusmult"),
    corpus_file!("fact"),
    corpus_file!("fact7"),
    corpus_file!("add3"),
    corpus_file!("fig1"),
    corpus_file!("arrays"),
    corpus_file!("puts"),
    corpus_file!("puts_del"),
    corpus_file!("putint"),
];

/// Programs the checker rejects, with the rule each must report.
pub const REJECTED: [(&str, &str); 4] =
    [("outalias", "OutAlias"), ("cfact", "ChildOutcome"), ("delmisuse", "DelMisuse"), ("extent", "ExtentOverflow")];

pub fn source(name: &str) -> String {
    std::fs::read_to_string(path(name)).expect("corpus file")
}

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(format!("{name}.tsia"))
}

pub fn program(name: &str) -> Program {
    compile(&source(name), EffectMode::Infer).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn verified() -> RunOptions {
    RunOptions { verify: true, ..RunOptions::default() }
}

/// `b * (b+1) * ... * e` by iteration.
pub fn product(b: i64, e: i64) -> i64 {
    (b..=e).product()
}
