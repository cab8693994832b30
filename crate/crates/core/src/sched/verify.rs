use std::collections::{BTreeSet, HashSet};

use super::RunError;
use crate::graph::{Completed, Graph, Seq, TaskId};

/// Step-by-step checks of scheduler and graph invariants.
#[derive(Default)]
pub(super) struct Verifier {
    executed: HashSet<TaskId>,
}

fn violation(message: String) -> RunError {
    RunError::InvariantViolation(message)
}

impl Verifier {
    /// Checks one completion. `seqs_before` and `ready_before` describe the
    /// graph just before `done` was applied.
    pub(super) fn step(
        &mut self,
        seqs_before: &[Seq],
        ready_before: &BTreeSet<Seq>,
        done: &Completed,
        after: &Graph,
    ) -> Result<(), RunError> {
        after.check_invariants().map_err(violation)?;

        if !self.executed.insert(done.task.id) {
            return Err(violation(format!("task {} executed twice", done.task.id)));
        }
        if let Some(t) = after.tasks().find(|t| self.executed.contains(&t.id)) {
            return Err(violation(format!("completed task {} is live again", t.id)));
        }

        let parent = &done.task.seq;
        for (i, c) in done.children.iter().enumerate() {
            if *c != parent.child(i as u32 + 1) {
                return Err(violation(format!("child {c} of {parent} is out of place")));
            }
        }
        let unaffected_before: Vec<&Seq> = seqs_before.iter().filter(|s| *s != parent).collect();
        let unaffected_after: Vec<Seq> =
            after.tasks().map(|t| t.seq.clone()).filter(|s| !done.children.contains(s)).collect();
        if unaffected_before.len() != unaffected_after.len()
            || unaffected_before.iter().zip(&unaffected_after).any(|(a, b)| *a != b)
        {
            return Err(violation(format!("completing {parent} reordered other tasks")));
        }

        let ready_after: BTreeSet<Seq> = after.ready_tasks().into_iter().collect();
        if let Some(s) = ready_before.iter().find(|s| *s != parent && !ready_after.contains(*s)) {
            return Err(violation(format!("completing {parent} made {s} unready")));
        }
        Ok(())
    }
}
