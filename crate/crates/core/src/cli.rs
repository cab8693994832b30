//! The `tsia` command: run, trace, enumerate and check programs.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::frontend::{compile, EffectMode, Program};
use crate::graph::ChannelRule;
use crate::sched::{enumerate_schedules, run_parallel, run_sequential, Policy, RunOptions, RunResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "tsia", version, about = "Run task-graph programs")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand, Debug)]
enum Mode {
    /// Execute a program and print its standard output.
    Run(Config),
    /// Execute a program and write graph snapshots.
    Trace(Config),
    /// Count every schedule and distinct outcome.
    Enumerate(Config),
    /// Check a program without running it.
    Check(Config),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyArg {
    Earliest,
    Latest,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectsArg {
    Infer,
    Check,
    Conservative,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Program source file.
    pub source: PathBuf,
    #[arg(long, value_enum, default_value = "earliest")]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "infer")]
    pub effects: EffectsArg,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub task_limit: u64,
    /// Write graph snapshots (and parallel events).
    #[arg(long)]
    pub trace: bool,
    /// Destination for trace output instead of standard error.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl Config {
    fn effects(&self) -> EffectMode {
        match self.effects {
            EffectsArg::Infer => EffectMode::Infer,
            EffectsArg::Check => EffectMode::Check,
            EffectsArg::Conservative => EffectMode::Conservative,
        }
    }

    fn policy(&self) -> Policy {
        match self.policy {
            PolicyArg::Earliest => Policy::EarliestReady,
            PolicyArg::Latest => Policy::LatestReady,
            PolicyArg::Random => Policy::Random(self.seed),
        }
    }

    fn options(&self, trace: bool) -> RunOptions {
        RunOptions {
            trace,
            verify: false,
            task_limit: self.task_limit as usize,
            channel_rule: match self.effects {
                EffectsArg::Conservative => ChannelRule::Conservative,
                _ => ChannelRule::Declared,
            },
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let (cfg, trace) = match &cli.mode {
        Mode::Trace(cfg) => (cfg, true),
        Mode::Run(cfg) | Mode::Enumerate(cfg) | Mode::Check(cfg) => (cfg, cfg.trace),
    };
    let source = match fs::read_to_string(&cfg.source) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "tsia: cannot read {}: {e}", cfg.source.display());
            return EXIT_USAGE;
        }
    };
    let program = match compile(&source, cfg.effects()) {
        Ok(p) => p,
        Err(e) => {
            let sink: &mut dyn Write = if matches!(cli.mode, Mode::Check(_)) { out } else { err };
            let _ = writeln!(sink, "{e}");
            return EXIT_DIAGNOSTICS;
        }
    };
    match cli.mode {
        Mode::Check(_) => EXIT_OK,
        Mode::Enumerate(_) => enumerate(&program, cfg, out, err),
        Mode::Run(_) | Mode::Trace(_) => run(&program, cfg, trace, out, err),
    }
}

fn runtime_error(err: &mut dyn Write, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "tsia: {e}");
    EXIT_RUNTIME
}

fn run(program: &Program, cfg: &Config, trace: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let opts = cfg.options(trace);
    let result = if cfg.workers > 1 {
        run_parallel(program, cfg.workers as usize, cfg.seed, &opts)
    } else {
        run_sequential(program, cfg.policy(), &opts)
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return runtime_error(err, e),
    };
    if trace {
        if let Err(e) = write_trace(&result, cfg, err) {
            return runtime_error(err, e);
        }
    }
    let _ = match cfg.format {
        Format::Text => write!(out, "{}", result.channel_text("stdout")),
        Format::Json => writeln!(out, "{}", result.to_json()),
    };
    EXIT_OK
}

fn write_trace(result: &RunResult, cfg: &Config, err: &mut dyn Write) -> std::io::Result<()> {
    let text = result.trace_text() + &result.events_text();
    match &cfg.trace_out {
        Some(path) => fs::write(path, text),
        None => err.write_all(text.as_bytes()),
    }
}

fn enumerate(program: &Program, cfg: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let found = match enumerate_schedules(program, cfg.max_states as usize, &cfg.options(false)) {
        Ok(f) => f,
        Err(e) => return runtime_error(err, e),
    };
    let _ = match cfg.format {
        Format::Text => write!(out, "schedules: {}\noutcomes: {}\n", found.schedules, found.summaries.len()),
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::json!({
                "schedules": found.schedules.to_string(),
                "outcomes": found.summaries.len(),
                "states": found.states,
            })
        ),
    };
    EXIT_OK
}
