//! One line per acceptance criterion. Runs without the libtest harness so
//! the verdicts are always printed.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{product, program, verified, RUNNABLE};
use tsia::delegate::execute_task;
use tsia::sched::Event;
use tsia::{
    alpha_equivalent, compile, enumerate_schedules, run_parallel, run_sequential, run_sequential_on, EffectMode, Graph,
    Policy, RunOptions, RunResult, Seq, Summary,
};

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    bound: Duration,
    check: Check,
}

const CRITERIA: [Criterion; 8] = [
    Criterion { id: 1, name: "factorial golden trace", bound: Duration::from_secs(1), check: golden_trace },
    Criterion { id: 2, name: "add3 delegation", bound: Duration::from_secs(1), check: add3_delegation },
    Criterion { id: 3, name: "determinacy suite", bound: Duration::from_secs(30), check: determinacy },
    Criterion { id: 4, name: "puts ordering", bound: Duration::from_secs(5), check: puts_ordering },
    Criterion { id: 5, name: "region parallelism", bound: Duration::from_secs(2), check: region_parallelism },
    Criterion { id: 6, name: "static rejection", bound: Duration::from_secs(5), check: static_rejection },
    Criterion { id: 7, name: "factorial oracle", bound: Duration::from_secs(1), check: fact_oracle },
    Criterion { id: 8, name: "invariant suite", bound: Duration::from_secs(30), check: invariants },
];

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Reference walk-through states with the snapshot index of each. After
/// the fourth state, each reference state folds two completions.
const WALKTHROUGH: [(usize, &[&str]); 8] = [
    (0, &["main(;;)"]),
    (1, &["fact(1,3;;k)", "intprint(k;;)"]),
    (2, &["fact(1,2;;x)", "fact(3,3;;y)", "mult(x,y;;k)", "intprint(k;;)"]),
    (3, &["fact(1,1;;a)", "fact(2,2;;b)", "mult(a,b;;x)", "fact(3,3;;y)", "mult(x,y;;k)", "intprint(k;;)"]),
    (5, &["mult(1,2;;x)", "fact(3,3;;y)", "mult(x,y;;k)", "intprint(k;;)"]),
    (7, &["mult(2,3;;k)", "intprint(k;;)"]),
    (8, &["intprint(6;;)"]),
    (9, &[]),
];

fn golden_trace() -> Result<String, String> {
    let opts = RunOptions { trace: true, ..RunOptions::default() };
    let result = run_sequential(&program("fact7"), Policy::EarliestReady, &opts).map_err(err)?;
    ensure(result.trace.len() == 10, || format!("{} snapshots", result.trace.len()))?;
    for (index, tasks) in WALKTHROUGH {
        let expected: String = tasks.iter().map(|t| format!("{t}\n")).collect();
        let got = &result.trace[index];
        if index == 3 {
            let a = Graph::parse(got).map_err(err)?;
            let b = Graph::parse(&expected).map_err(err)?;
            ensure(alpha_equivalent(&a, &b), || format!("state {index}: {got:?} is not a renaming of {expected:?}"))?;
        } else {
            ensure(*got == expected, || format!("state {index}: {got:?} != {expected:?}"))?;
        }
    }
    let out = result.channel_text("stdout");
    ensure(out == "6", || format!("printed {out:?}"))?;
    Ok("8 states match, prints 6".into())
}

fn add3_delegation() -> Result<String, String> {
    let p = program("add3");
    let mut graph = Graph::parse("add3(6,9,17;;p)").map_err(err)?;
    let first = Seq::root(1);
    let outcome = execute_task(graph.task(&first).ok_or("no task")?, &p, &graph).map_err(err)?;
    graph.complete_task(&first, outcome).map_err(err)?;
    let expected = Graph::parse("add(6,9;;r) add(r,17;;p)").map_err(err)?;
    ensure(alpha_equivalent(&graph, &expected), || format!("children were {:?}", graph.render()))?;
    let result = run_sequential_on(graph, &p, Policy::EarliestReady, &RunOptions::default()).map_err(err)?;
    let p_value = result.finals["p"].to_string();
    let oracle = 6 + 9 + 17;
    ensure(p_value == oracle.to_string(), || format!("p = {p_value}, expected {oracle}"))?;
    Ok(format!("children add(6,9;;r) add(r,17;;p), p = {oracle}"))
}

fn sequential_summary(name: &str) -> Result<Summary, String> {
    Ok(run_sequential(&program(name), Policy::EarliestReady, &RunOptions::default()).map_err(err)?.summary())
}

fn determinacy() -> Result<String, String> {
    let mut runs = 0;
    for (name, _) in RUNNABLE {
        let p = program(name);
        let base = sequential_summary(name)?;
        let found = enumerate_schedules(&p, 1_000_000, &RunOptions::default()).map_err(err)?;
        ensure(found.summaries.len() == 1, || format!("{name}: {} outcomes", found.summaries.len()))?;
        ensure(found.summaries.first() == Some(&base), || format!("{name}: enumeration disagrees"))?;
        for workers in 1..=4 {
            for seed in 0..16 {
                let got = run_parallel(&p, workers, seed, &RunOptions::default()).map_err(err)?;
                ensure(got.summary() == base, || format!("{name}: workers {workers} seed {seed} differs"))?;
                runs += 1;
            }
        }
    }
    let fig1 = enumerate_schedules(&program("fig1"), 1_000_000, &RunOptions::default()).map_err(err)?;
    ensure(fig1.schedules == 2 && fig1.summaries.len() == 1, || {
        format!("fig1: {} schedules, {} outcomes", fig1.schedules, fig1.summaries.len())
    })?;
    Ok(format!("{} programs, {runs} parallel runs, fig1 2 schedules 1 outcome", RUNNABLE.len()))
}

fn putc_order(result: &RunResult) -> Vec<String> {
    result
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Exec { task, .. } if task.starts_with("putc(") => Some(task.clone()),
            _ => None,
        })
        .collect()
}

fn puts_ordering() -> Result<String, String> {
    let mut same_tick = None;
    for name in ["puts", "puts_del"] {
        let p = program(name);
        let mut policies = vec![Policy::EarliestReady, Policy::LatestReady];
        policies.extend((0..16).map(Policy::Random));
        for policy in policies {
            let out = run_sequential(&p, policy, &RunOptions::default()).map_err(err)?.channel_text("stdout");
            ensure(out == "ABCD", || format!("{name} under {policy:?} printed {out:?}"))?;
        }
        for workers in 1..=4 {
            for seed in 0..16 {
                let result = run_parallel(&p, workers, seed, &RunOptions::default()).map_err(err)?;
                let out = result.channel_text("stdout");
                ensure(out == "ABCD", || format!("{name} on {workers} workers seed {seed} printed {out:?}"))?;
                let order = putc_order(&result);
                ensure(order == ["putc('A';;)", "putc('B';;)", "putc('C';;)", "putc('D';;)"], || {
                    format!("{name}: putc order {order:?}")
                })?;
                if name == "puts_del" && same_tick.is_none() {
                    let tick_of = |text: &str| {
                        result.events.iter().find_map(|e| match e {
                            Event::Exec { tick, task, .. } if task.starts_with(text) => Some(*tick),
                            _ => None,
                        })
                    };
                    if let (Some(a), Some(b)) = (tick_of("puts(\"AB\""), tick_of("puts(\"CD\"")) {
                        if a == b {
                            same_tick = Some((workers, seed, a));
                        }
                    }
                }
            }
        }
    }
    let (workers, seed, tick) = same_tick.ok_or("the two puts tasks never shared a tick")?;
    Ok(format!("ABCD everywhere; both puts in tick {tick} with {workers} workers, seed {seed}"))
}

fn region_parallelism() -> Result<String, String> {
    let p = program("arrays");
    for seed in 0..16 {
        let result = run_parallel(&p, 2, seed, &RunOptions::default()).map_err(err)?;
        let execs: Vec<(usize, usize, &str)> = result
            .events
            .iter()
            .filter_map(|e| match e {
                Event::Exec { tick, worker, task } => Some((*tick, *worker, task.as_str())),
                _ => None,
            })
            .collect();
        let find = |text: &str| execs.iter().find(|(_, _, t)| *t == text).copied();
        let b = find("b(;;h[0:4999])").ok_or("b never ran")?;
        let c = find("c(;;h[5000:9999])").ok_or("c never ran")?;
        ensure(b.0 == c.0 && b.1 != c.1, || format!("seed {seed}: b {b:?} and c {c:?}"))?;
        for half in ["h[0:4999]", "h[5000:9999]"] {
            let consumer = find(&format!("d(;{half};)")).ok_or("d never ran")?;
            let last_producer = execs
                .iter()
                .filter(|(_, _, t)| t.ends_with(&format!(";;{half})")))
                .map(|e| e.0)
                .max()
                .ok_or("no producer")?;
            ensure(consumer.0 > last_producer, || format!("seed {seed}: d on {half} ran at tick {}", consumer.0))?;
        }
        let defined = result.finals["h"].slots.iter().filter(|s| s.is_some()).count();
        ensure(defined == 10_000, || format!("seed {seed}: {defined} elements defined"))?;
    }
    Ok("b and c share a tick on different workers, 10000 elements defined".into())
}

fn static_rejection() -> Result<String, String> {
    for (name, rule) in common::REJECTED {
        let out = Command::new(env!("CARGO_BIN_EXE_tsia"))
            .args(["check", &common::path(name).display().to_string()])
            .output()
            .map_err(err)?;
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.code() == Some(1), || format!("{name}: exit {:?}", out.status.code()))?;
        ensure(text.contains(&format!("{rule}:")), || format!("{name}: {text}"))?;
    }
    Ok("OutAlias, ChildOutcome, DelMisuse, ExtentOverflow, all exit 1".into())
}

fn fact_oracle() -> Result<String, String> {
    let mut cases = 0;
    for e in 1..=10 {
        for b in 1..=e {
            let src = format!(
                "fact(int b, int e;; int f)
                 {{ if (b>=e) f=b; else {{ int m=(b+e)/2; fact(b,m;;x); fact(m+1,e;;y); mult(x,y;;f); }} }}
                 main(;;) {{ fact({b},{e};;f); }}"
            );
            let p = compile(&src, EffectMode::Infer).map_err(err)?;
            let result = run_sequential(&p, Policy::EarliestReady, &RunOptions::default()).map_err(err)?;
            let got = result.finals["f"].to_string();
            ensure(got == product(b, e).to_string(), || format!("fact({b},{e}) = {got}"))?;
            cases += 1;
        }
    }
    ensure(cases == 55, || format!("{cases} cases"))?;
    Ok("55 cases".into())
}

fn invariants() -> Result<String, String> {
    let opts = verified();
    let mut runs = 0;
    for (name, _) in RUNNABLE {
        let p = program(name);
        for policy in [Policy::EarliestReady, Policy::LatestReady, Policy::Random(3)] {
            run_sequential(&p, policy, &opts).map_err(|e| format!("{name}: {e}"))?;
            runs += 1;
        }
        for workers in 1..=4 {
            for seed in 0..4 {
                run_parallel(&p, workers, seed, &opts).map_err(|e| format!("{name}: {e}"))?;
                runs += 1;
            }
        }
        enumerate_schedules(&p, 1_000_000, &opts).map_err(|e| format!("{name}: {e}"))?;
        runs += 1;
    }
    Ok(format!("{runs} verified runs"))
}

fn main() -> ExitCode {
    let mut failures = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= c.bound {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, bound {:?}", c.bound))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {} {}: PASS ({detail}; {elapsed:.2?} <= {:?})", c.id, c.name, c.bound),
            Err(why) => {
                failures += 1;
                println!("criterion {} {}: FAIL ({why})", c.id, c.name);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
