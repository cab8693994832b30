//! Textual form of a graph, item naming, alpha-equivalence and the
//! canonical state key used to merge identical states.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write};

use super::{Binding, Graph, ItemId, Target, Task};
use crate::frontend::{Mode, Origin};

/// Canonical, name-independent encoding of a complete graph state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(String);

impl StateKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Graph {
    /// Display names of live items. Names are unique: an item whose name is
    /// already used by an older live item gets a `_n` suffix.
    pub fn display_names(&self) -> HashMap<ItemId, String> {
        let mut taken: HashSet<String> = self.items.values().map(|i| i.name.clone()).collect();
        let mut seen = HashSet::new();
        let mut names = HashMap::new();
        for item in self.items.values() {
            if seen.insert(item.name.as_str()) {
                names.insert(item.id, item.name.clone());
                continue;
            }
            let fresh =
                (1..).map(|k| format!("{}_{k}", item.name)).find(|n| !taken.contains(n)).expect("unbounded suffixes");
            taken.insert(fresh.clone());
            names.insert(item.id, fresh);
        }
        names
    }

    fn binding_text(&self, b: &Binding, name: &dyn Fn(ItemId) -> String) -> String {
        let mut s = String::new();
        if b.del {
            s.push_str("del ");
        }
        match &b.target {
            Target::Literal(v) => {
                let _ = write!(s, "{v}");
            }
            Target::Region(r) => {
                s.push_str(&name(r.item));
                let item = &self.items[&r.item];
                if r.lo != 0 || r.hi + 1 != item.len() {
                    let base = item.extent.lo;
                    let _ = write!(s, "[{}:{}]", base + r.lo as i64, base + r.hi as i64);
                }
            }
        }
        s
    }

    fn task_text(&self, t: &Task, name: &dyn Fn(ItemId) -> String, all_channels: bool) -> String {
        let mut s = format!("{}(", t.instruction);
        for (slot, mode) in Mode::ALL.into_iter().enumerate() {
            if slot > 0 {
                s.push(';');
            }
            let args: Vec<String> =
                t.bindings.iter().filter(|b| b.mode == mode).map(|b| self.binding_text(b, name)).collect();
            s.push_str(&args.join(","));
        }
        s.push(')');
        let channels: Vec<String> = t
            .channels
            .iter()
            .filter(|c| all_channels || c.origin == Origin::Declared)
            .map(|c| {
                let del = if c.del { "del " } else { "" };
                if all_channels {
                    format!("{del}{}:{:?}", c.channel, c.origin)
                } else {
                    format!("{del}{}", c.channel)
                }
            })
            .collect();
        if !channels.is_empty() {
            let _ = write!(s, "(;{};)", channels.join(","));
        }
        s
    }

    /// One task in its textual form.
    pub fn render_task(&self, t: &Task) -> String {
        let names = self.display_names();
        self.task_text(t, &|id| names[&id].clone(), false)
    }

    /// One line per task in program order. Inferred and builtin channel
    /// declarations are left out.
    pub fn render(&self) -> String {
        let names = self.display_names();
        let name = |id: ItemId| names[&id].clone();
        self.tasks.values().map(|t| self.task_text(t, &name, false) + "\n").collect()
    }

    /// Item ids in order of first reference, scanning tasks in program order.
    fn first_occurrence(&self) -> HashMap<ItemId, usize> {
        let mut order = HashMap::new();
        for t in self.tasks.values() {
            for r in t.bindings.iter().filter_map(Binding::region) {
                let next = order.len();
                order.entry(r.item).or_insert(next);
            }
        }
        order
    }

    fn canonical_text(&self, all_channels: bool) -> (String, HashMap<ItemId, usize>) {
        let order = self.first_occurrence();
        let name = |id: ItemId| format!("#{}", order[&id]);
        let text = self.tasks.values().map(|t| self.task_text(t, &name, all_channels) + "\n").collect();
        (text, order)
    }

    /// Encodes tasks, referenced item contents, channel logs and
    /// observations with items numbered by first reference.
    pub fn state_key(&self) -> StateKey {
        let (mut key, order) = self.canonical_text(true);
        let mut ids: Vec<(usize, ItemId)> = order.iter().map(|(id, n)| (*n, *id)).collect();
        ids.sort();
        for (n, id) in ids {
            let item = &self.items[&id];
            let observed = if item.observed { item.name.as_str() } else { "" };
            let _ = write!(key, "#{n} {observed} {} {} {}", item.ty, item.extent, item.is_array);
            for slot in item.slots() {
                match slot {
                    Some(v) => {
                        let _ = write!(key, " {v}");
                    }
                    None => key.push_str(" ?"),
                }
            }
            key.push('\n');
        }
        for (channel, log) in &self.channels {
            let _ = writeln!(key, "{channel}: {log:?}");
        }
        for (name, value) in &self.observations {
            let _ = writeln!(key, "{name} = {:?}", value.slots);
        }
        StateKey(key)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Whether the two graphs render identically up to a renaming of items.
pub fn alpha_equivalent(a: &Graph, b: &Graph) -> bool {
    a.canonical_text(false).0 == b.canonical_text(false).0
}
