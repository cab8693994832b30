macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(fact_trace, "fact_trace.rs");
example!(add3_delegation, "add3_delegation.rs");
example!(static_checks, "static_checks.rs");
example!(effect_inference, "effect_inference.rs");
example!(parallel_puts, "parallel_puts.rs");
example!(region_parallelism, "region_parallelism.rs");
example!(schedule_enumeration, "schedule_enumeration.rs");
example!(graph_text, "graph_text.rs");

use tsia::frontend::Rule;

#[test]
fn fact_trace_prints_six() {
    assert_eq!(fact_trace::run_example().unwrap(), "6");
}

#[test]
fn add3_expands_then_sums() {
    let (expanded, p) = add3_delegation::run_example().unwrap();
    assert_eq!(expanded, "add(6,9;;r)\nadd(r,17;;p)\n");
    assert_eq!(p, 6 + 9 + 17);
}

#[test]
fn static_checks_name_their_rules() {
    let found = static_checks::run_example().unwrap();
    assert_eq!(
        found,
        vec![
            ("outalias", Rule::OutAlias),
            ("cfact", Rule::ChildOutcome),
            ("delmisuse", Rule::DelMisuse),
            ("extent", Rule::ExtentOverflow),
        ]
    );
}

#[test]
fn effects_reach_main() {
    let (lines, missing) = effect_inference::run_example().unwrap();
    assert_eq!(lines, ["puts(;del stdout;)", "putint(;del stdout;)", "main(;del stdout;)"]);
    assert_eq!(missing, 2);
}

#[test]
fn puts_tasks_share_a_tick() {
    assert!(parallel_puts::run_example().unwrap().is_some());
}

#[test]
fn halves_fill_the_whole_array() {
    let result = region_parallelism::run_example().unwrap();
    assert!(result.finals["h"].slots.iter().all(Option::is_some));
}

#[test]
fn enumeration_finds_one_outcome_each() {
    let rows = schedule_enumeration::run_example().unwrap();
    assert_eq!(rows[0], ("fig1", 2, 1));
    assert!(rows.iter().all(|r| r.2 == 1));
}

#[test]
fn graph_text_runs_agree() {
    let (seq, par) = graph_text::run_example().unwrap();
    assert_eq!(seq, ((2 + 3) * (3 + 4)).to_string());
    assert_eq!(seq, par);
}
