//! The executing application's state: pending tasks in program order, the
//! items they reference, and channel logs.

mod item;
mod render;
mod seq;
mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

pub use item::*;
pub use render::{alpha_equivalent, StateKey};
pub use seq::Seq;

use crate::frontend::Mode;
use crate::value::{BaseType, Extent, Scalar, Value};

/// How tasks with strict channel declarations are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ChannelRule {
    /// Wait only for prior tasks declaring the same channel.
    #[default]
    Declared,
    /// Wait for every prior task; declarations may be incomplete.
    Conservative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no live task at {0}")]
    UnknownTask(Seq),
    #[error("no live item named `{0}`")]
    UnknownItem(String),
    #[error("`{task}` writes `{item}` outside its inout and out regions")]
    WriteToUndeclaredRegion { task: String, item: String },
    #[error("`{task}` touches channel `{channel}` without declaring it")]
    HiddenEffect { task: String, channel: String },
    #[error("child `{child}` of `{task}` passes an out region that overlaps another argument")]
    OutAlias { task: String, child: String },
    #[error("`{task}` addresses `{item}` outside its extent")]
    OutOfBounds { task: String, item: String },
    #[error("value for `{item}` does not fit its shape")]
    ShapeMismatch { item: String },
    #[error("graph text, token {index}: {message}")]
    Parse { index: usize, message: String },
}

/// Result of applying one task's outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completed {
    pub task: Task,
    pub children: Vec<Seq>,
    pub collected: Vec<ItemId>,
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    tasks: BTreeMap<Seq, Task>,
    items: BTreeMap<ItemId, Item>,
    refcounts: HashMap<ItemId, usize>,
    channels: BTreeMap<String, Vec<Scalar>>,
    observations: BTreeMap<String, Observed>,
    channel_rule: ChannelRule,
    next_item: u64,
    next_task: u64,
}

/// Footprint of the tasks preceding a readiness query.
#[derive(Default)]
struct Prior {
    reads: HashMap<ItemId, Vec<(usize, usize)>>,
    writes: HashMap<ItemId, Vec<(usize, usize)>>,
    channels: HashSet<String>,
    any: bool,
}

fn overlaps(spans: Option<&Vec<(usize, usize)>>, r: &Region) -> bool {
    spans.is_some_and(|v| v.iter().any(|&(lo, hi)| lo <= r.hi && r.lo <= hi))
}

impl Prior {
    fn blocks(&self, t: &Task, rule: ChannelRule) -> bool {
        for (b, r) in t.regions() {
            if b.del {
                continue;
            }
            if overlaps(self.writes.get(&r.item), r) {
                return true;
            }
            if b.mode.writes() && overlaps(self.reads.get(&r.item), r) {
                return true;
            }
        }
        t.channels.iter().filter(|c| !c.del).any(|c| match rule {
            ChannelRule::Declared => self.channels.contains(&c.channel),
            ChannelRule::Conservative => self.any,
        })
    }

    fn add(&mut self, t: &Task) {
        self.any = true;
        for (b, r) in t.regions() {
            let spans = if b.mode.writes() { &mut self.writes } else { &mut self.reads };
            spans.entry(r.item).or_default().push((r.lo, r.hi));
        }
        for c in &t.channels {
            self.channels.insert(c.channel.clone());
        }
    }
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn with_channel_rule(rule: ChannelRule) -> Graph {
        Graph { channel_rule: rule, ..Graph::default() }
    }

    pub fn channel_rule(&self) -> ChannelRule {
        self.channel_rule
    }

    pub fn set_channel_rule(&mut self, rule: ChannelRule) {
        self.channel_rule = rule;
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Live tasks in program order.
    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.tasks.values()
    }

    pub fn task(&self, seq: &Seq) -> Option<&Task> {
        self.tasks.get(seq)
    }

    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.items.values()
    }

    pub fn item(&self, id: ItemId) -> Option<&Item> {
        self.items.get(&id)
    }

    pub fn item_named(&self, name: &str) -> Option<&Item> {
        self.items.values().find(|i| i.name == name)
    }

    pub fn channels(&self) -> &BTreeMap<String, Vec<Scalar>> {
        &self.channels
    }

    /// Concatenated text of a channel's log.
    pub fn channel_text(&self, name: &str) -> String {
        self.channels.get(name).map_or_else(String::new, |log| log.iter().map(Scalar::to_output).collect())
    }

    /// Last recorded contents of every observed item, keyed by name.
    pub fn observations(&self) -> &BTreeMap<String, Observed> {
        &self.observations
    }

    /// Allocates a fresh item with every slot unset.
    pub fn alloc_item(&mut self, ty: BaseType, extent: Extent, is_array: bool, name: &str) -> ItemId {
        let id = ItemId(self.next_item);
        self.next_item += 1;
        self.items.insert(id, Item::new(id, name, ty, extent, is_array));
        self.refcounts.insert(id, 0);
        id
    }

    /// Marks an item as observed and records its current contents.
    pub fn observe(&mut self, id: ItemId) {
        if let Some(item) = self.items.get_mut(&id) {
            item.observed = true;
            self.observations.insert(item.name.clone(), item.snapshot());
        }
    }

    /// Defines every element of the named item.
    pub fn define(&mut self, name: &str, value: Value) -> Result<(), GraphError> {
        let item = self
            .items
            .values_mut()
            .find(|i| i.name == name)
            .ok_or_else(|| GraphError::UnknownItem(name.to_string()))?;
        let values = value.elements();
        let fits = values.len() == item.len() && matches!(value, Value::Array(_)) == item.is_array;
        if !fits || values.iter().any(|v| v.ty() != values[0].ty()) {
            return Err(GraphError::ShapeMismatch { item: name.to_string() });
        }
        item.ty = values[0].ty();
        item.write(0, values);
        if item.observed {
            self.observations.insert(item.name.clone(), item.snapshot());
        }
        Ok(())
    }

    /// Places a task at `seq`, which must be free.
    pub fn insert_task(
        &mut self,
        seq: Seq,
        instruction: &str,
        bindings: Vec<Binding>,
        channels: Vec<ChannelBinding>,
    ) -> TaskId {
        assert!(!self.tasks.contains_key(&seq), "sequence key {seq} is taken");
        let id = TaskId(self.next_task);
        self.next_task += 1;
        for r in bindings.iter().filter_map(Binding::region) {
            *self.refcounts.get_mut(&r.item).expect("binding to a live item") += 1;
        }
        let task = Task { id, seq: seq.clone(), instruction: instruction.to_string(), bindings, channels };
        self.tasks.insert(seq, task);
        id
    }

    /// Readiness of the task at `seq` against every task before it.
    pub fn is_ready(&self, seq: &Seq) -> bool {
        let mut prior = Prior::default();
        for (s, t) in &self.tasks {
            if s == seq {
                return self.assembled(t) && !prior.blocks(t, self.channel_rule);
            }
            prior.add(t);
        }
        false
    }

    /// Sequence keys of all ready tasks, in program order.
    pub fn ready_tasks(&self) -> Vec<Seq> {
        let mut prior = Prior::default();
        let mut ready = Vec::new();
        for (s, t) in &self.tasks {
            if self.assembled(t) && !prior.blocks(t, self.channel_rule) {
                ready.push(s.clone());
            }
            prior.add(t);
        }
        ready
    }

    /// Every strict in or inout region is fully defined.
    fn assembled(&self, t: &Task) -> bool {
        t.regions()
            .filter(|(b, _)| !b.del && b.mode != Mode::Out)
            .all(|(_, r)| self.items[&r.item].is_defined(r.lo, r.hi))
    }

    /// Applies `outcome` for the task at `seq`: allocations, writes, channel
    /// writes, children at `seq.1 …`, removal of the task, then literal
    /// substitution and collection of unreferenced items.
    ///
    /// Nothing changes when the outcome is rejected.
    pub fn complete_task(&mut self, seq: &Seq, outcome: Outcome) -> Result<Completed, GraphError> {
        let task = self.tasks.get(seq).ok_or_else(|| GraphError::UnknownTask(seq.clone()))?;
        self.validate(task, &outcome)?;
        let task = self.tasks.remove(seq).expect("checked above");
        let observe = task.seq.depth() == 1;

        let mut touched = BTreeSet::new();
        let mut locals = Vec::with_capacity(outcome.allocs.len());
        for a in outcome.allocs {
            let id = self.alloc_item(a.ty, a.extent, a.is_array, &a.name);
            self.items.get_mut(&id).expect("just allocated").init(a.init);
            if observe {
                self.observe(id);
            }
            locals.push(id);
            touched.insert(id);
        }
        for w in outcome.writes {
            let item = self.items.get_mut(&w.region.item).expect("validated");
            item.write(w.region.lo, &w.values);
            if item.observed {
                self.observations.insert(item.name.clone(), item.snapshot());
            }
            touched.insert(w.region.item);
        }
        for (channel, value) in outcome.channel_writes {
            self.channels.entry(channel).or_default().push(value);
        }

        let mut children = Vec::with_capacity(outcome.children.len());
        for (i, child) in outcome.children.into_iter().enumerate() {
            let child_seq = task.seq.child(i as u32 + 1);
            let bindings = child
                .bindings
                .into_iter()
                .map(|b| {
                    let target = match b.target {
                        Target::Literal(v) => Target::Literal(v),
                        Target::Region(r) => {
                            let item = match r.item {
                                ItemRef::Root(id) => id,
                                ItemRef::Local(k) => locals[k],
                            };
                            touched.insert(item);
                            Target::Region(Region { item, lo: r.lo, hi: r.hi })
                        }
                    };
                    Binding { mode: b.mode, del: b.del, target, is_array: b.is_array }
                })
                .collect();
            self.insert_task(child_seq.clone(), &child.instruction, bindings, child.channels);
            children.push(child_seq);
        }

        let mut candidates: BTreeSet<ItemId> = locals.iter().copied().collect();
        for (b, r) in task.regions() {
            *self.refcounts.get_mut(&r.item).expect("live item") -= 1;
            candidates.insert(r.item);
            if b.mode.writes() {
                touched.insert(r.item);
            }
        }
        touched.retain(|id| self.items.contains_key(id));
        candidates.extend(self.substitute(&touched));

        let mut collected = Vec::new();
        for id in candidates {
            if self.refcounts.get(&id) == Some(&0) {
                self.items.remove(&id);
                self.refcounts.remove(&id);
                collected.push(id);
            }
        }
        Ok(Completed { task, children, collected })
    }

    fn validate(&self, task: &Task, outcome: &Outcome) -> Result<(), GraphError> {
        let label = || self.render_task(task);
        let in_bounds = |r: &Region| self.items.get(&r.item).is_some_and(|i| r.lo <= r.hi && r.hi < i.len());
        for w in &outcome.writes {
            let item_name = || self.items.get(&w.region.item).map_or_else(String::new, |i| i.name.clone());
            if !in_bounds(&w.region) || w.values.len() != w.region.len() {
                return Err(GraphError::OutOfBounds { task: label(), item: item_name() });
            }
            let covered = task.regions().any(|(b, r)| b.mode.writes() && r.contains(&w.region));
            if !covered {
                return Err(GraphError::WriteToUndeclaredRegion { task: label(), item: item_name() });
            }
        }
        for (channel, _) in &outcome.channel_writes {
            if task.channel(channel).is_none() {
                return Err(GraphError::HiddenEffect { task: label(), channel: channel.clone() });
            }
        }
        for child in &outcome.children {
            let child_label = || child.instruction.clone();
            for b in &child.bindings {
                let Target::Region(r) = &b.target else { continue };
                match r.item {
                    ItemRef::Local(k) => {
                        let fits = outcome.allocs.get(k).is_some_and(|a| r.lo <= r.hi && r.hi < a.extent.len());
                        if !fits {
                            return Err(GraphError::OutOfBounds { task: label(), item: child_label() });
                        }
                    }
                    ItemRef::Root(id) => {
                        let region = Region { item: id, lo: r.lo, hi: r.hi };
                        if !in_bounds(&region) {
                            return Err(GraphError::OutOfBounds {
                                task: label(),
                                item: self.items.get(&id).map_or_else(String::new, |i| i.name.clone()),
                            });
                        }
                        // Children only receive what the parent holds, and write only what it may write.
                        let held = task
                            .regions()
                            .any(|(pb, pr)| pr.contains(&region) && (pb.mode.writes() || !b.mode.writes()));
                        if !held {
                            return Err(GraphError::WriteToUndeclaredRegion {
                                task: label(),
                                item: self.items[&id].name.clone(),
                            });
                        }
                    }
                }
            }
            for (i, b) in child.bindings.iter().enumerate() {
                let Target::Region(r) = &b.target else { continue };
                if b.mode != Mode::Out {
                    continue;
                }
                let alias = child.bindings.iter().enumerate().any(|(j, o)| {
                    i != j && matches!(&o.target, Target::Region(q) if q.item == r.item && q.lo <= r.hi && r.lo <= q.hi)
                });
                if alias {
                    return Err(GraphError::OutAlias { task: label(), child: child_label() });
                }
            }
            if self.channel_rule == ChannelRule::Declared {
                for c in &child.channels {
                    if task.channel(&c.channel).is_none() {
                        return Err(GraphError::HiddenEffect { task: label(), channel: c.channel.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces strict in bindings on `roots` whose value is final (defined,
    /// no earlier writer) by literal copies. Returns the roots released.
    fn substitute(&mut self, roots: &BTreeSet<ItemId>) -> Vec<ItemId> {
        if roots.is_empty() {
            return Vec::new();
        }
        let mut writers: HashMap<ItemId, Vec<(usize, usize)>> = HashMap::new();
        let mut released = Vec::new();
        for task in self.tasks.values_mut() {
            for b in &mut task.bindings {
                let Target::Region(r) = b.target else { continue };
                if !roots.contains(&r.item) {
                    continue;
                }
                if b.mode == Mode::In && !b.del && !overlaps(writers.get(&r.item), &r) {
                    if let Some(values) = self.items[&r.item].read(r.lo, r.hi) {
                        b.target =
                            Target::Literal(if b.is_array { Value::Array(values) } else { Value::Scalar(values[0]) });
                        *self.refcounts.get_mut(&r.item).expect("live item") -= 1;
                        released.push(r.item);
                        continue;
                    }
                }
                if b.mode.writes() {
                    writers.entry(r.item).or_default().push((r.lo, r.hi));
                }
            }
        }
        released
    }

    /// Checks structural invariants: every binding resolves inside a live
    /// item, reference counts are exact, no garbage survives, and no task
    /// aliases an out region.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut counts: HashMap<ItemId, usize> = HashMap::new();
        for (seq, t) in &self.tasks {
            if &t.seq != seq {
                return Err(format!("task {} filed under {seq}", t.seq));
            }
            for (b, r) in t.regions() {
                let Some(item) = self.items.get(&r.item) else {
                    return Err(format!("`{}` references a collected item", self.render_task(t)));
                };
                if r.lo > r.hi || r.hi >= item.len() {
                    return Err(format!("`{}` addresses `{}` out of bounds", self.render_task(t), item.name));
                }
                *counts.entry(r.item).or_default() += 1;
                if b.mode == Mode::Out && t.regions().any(|(o, q)| !std::ptr::eq(o, b) && q.overlaps(r)) {
                    return Err(format!("`{}` aliases an out region", self.render_task(t)));
                }
            }
        }
        for id in self.items.keys() {
            let actual = counts.get(id).copied().unwrap_or(0);
            if actual == 0 {
                return Err(format!("item `{}` survives with no references", self.items[id].name));
            }
            if self.refcounts.get(id) != Some(&actual) {
                return Err(format!("reference count of `{}` is stale", self.items[id].name));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Origin;

    fn scalar(g: &mut Graph, name: &str) -> Region {
        let id = g.alloc_item(BaseType::Int, Extent::SCALAR, false, name);
        g.item(id).unwrap().whole()
    }

    fn bind(mode: Mode, r: Region) -> Binding {
        Binding { mode, del: false, target: Target::Region(r), is_array: false }
    }

    #[test]
    fn section3_readiness() {
        let mut g = Graph::parse("plus(u,v;;a) plus(v,w;;b) mult(a,b;;c)").unwrap();
        for (n, v) in [("u", 1), ("v", 2), ("w", 3)] {
            g.define(n, Value::Scalar(Scalar::Int(v))).unwrap();
        }
        assert_eq!(g.ready_tasks(), vec![Seq::root(1), Seq::root(2)]);
        assert!(!g.is_ready(&Seq::root(3)));

        let b = g.item_named("b").unwrap().whole();
        let done = g
            .complete_task(
                &Seq::root(2),
                Outcome { writes: vec![Write { region: b, values: vec![Scalar::Int(5)] }], ..Outcome::default() },
            )
            .unwrap();
        // w is unreferenced; b was copied into mult as a literal.
        assert_eq!(done.collected.len(), 2);
        assert!(g.item_named("w").is_none() && g.item_named("b").is_none());
        assert!(g.item_named("v").is_some());
        assert_eq!(g.render(), "plus(u,v;;a)\nmult(a,5;;c)\n");
        g.check_invariants().unwrap();
    }

    #[test]
    fn last_task_empties_graph() {
        let mut g = Graph::new();
        g.insert_task(Seq::root(1), "main", vec![], vec![]);
        g.complete_task(&Seq::root(1), Outcome::default()).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.render(), "");
    }

    #[test]
    fn del_binding_waives_assembly_but_blocks_later_readers() {
        let mut g = Graph::parse("a(;;q) b(false;del q;) c(q;;)").unwrap();
        assert_eq!(g.ready_tasks(), vec![Seq::root(1), Seq::root(2)]);
        let q = g.item_named("q").unwrap().whole();
        g.complete_task(
            &Seq::root(1),
            Outcome { writes: vec![Write { region: q, values: vec![Scalar::Int(6)] }], ..Outcome::default() },
        )
        .unwrap();
        // b may still write q through its children.
        assert_eq!(g.ready_tasks(), vec![Seq::root(2)]);
        assert_eq!(g.render(), "b(false;del q;)\nc(q;;)\n");
    }

    #[test]
    fn channel_readiness() {
        let g = Graph::parse("puts(\"AB\";;)(;del stdout;) putc('C';;)(;stdout;) putc('D';;)(;stdout;)").unwrap();
        assert_eq!(g.ready_tasks(), vec![Seq::root(1)]);

        let g2 = Graph::parse("f(;;) putc('C';;)(;stdout;)").unwrap();
        assert_eq!(g2.ready_tasks().len(), 2);
        let mut g3 = g2.clone();
        g3.channel_rule = ChannelRule::Conservative;
        assert_eq!(g3.ready_tasks(), vec![Seq::root(1)]);
    }

    #[test]
    fn anti_dependencies_serialize() {
        let mut g = Graph::new();
        let x = scalar(&mut g, "x");
        g.define("x", Value::Scalar(Scalar::Int(1))).unwrap();
        g.insert_task(Seq::root(1), "r", vec![bind(Mode::In, x)], vec![]);
        g.insert_task(Seq::root(2), "w", vec![bind(Mode::Out, x)], vec![]);
        assert_eq!(g.ready_tasks(), vec![Seq::root(1)]);
    }

    #[test]
    fn children_take_the_parent_position() {
        let mut g = Graph::new();
        g.insert_task(Seq::root(1), "main", vec![], vec![]);
        g.insert_task(Seq::root(2), "after", vec![], vec![]);
        let k = RegionRef { item: ItemRef::Local(0), lo: 0, hi: 0 };
        let outcome = Outcome {
            allocs: vec![Alloc {
                name: "k".into(),
                ty: BaseType::Int,
                extent: Extent::SCALAR,
                is_array: false,
                init: vec![None],
            }],
            children: vec![
                TaskTemplate {
                    instruction: "fact".into(),
                    bindings: vec![
                        Binding {
                            mode: Mode::In,
                            del: false,
                            target: Target::Literal(Value::Scalar(Scalar::Int(1))),
                            is_array: false,
                        },
                        Binding { mode: Mode::Out, del: false, target: Target::Region(k), is_array: false },
                    ],
                    channels: vec![],
                },
                TaskTemplate {
                    instruction: "intprint".into(),
                    bindings: vec![Binding { mode: Mode::In, del: false, target: Target::Region(k), is_array: false }],
                    channels: vec![ChannelBinding { channel: "stdout".into(), del: false, origin: Origin::Builtin }],
                },
            ],
            ..Outcome::default()
        };
        // The parent never declared stdout.
        assert!(matches!(
            g.clone().complete_task(&Seq::root(1), outcome.clone()),
            Err(GraphError::HiddenEffect { .. })
        ));
        g.tasks.get_mut(&Seq::root(1)).unwrap().channels.push(ChannelBinding {
            channel: "stdout".into(),
            del: true,
            origin: Origin::Inferred,
        });
        let done = g.complete_task(&Seq::root(1), outcome).unwrap();
        assert_eq!(done.children, vec![Seq::root(1).child(1), Seq::root(1).child(2)]);
        assert_eq!(g.render(), "fact(1;;k)\nintprint(k;;)\nafter(;;)\n");
        assert!(g.observations().contains_key("k"));
        g.check_invariants().unwrap();
    }

    #[test]
    fn undeclared_writes_are_rejected() {
        let mut g = Graph::parse("f(x;;) g(;;y)").unwrap();
        let x = g.item_named("x").unwrap().whole();
        let err = g
            .complete_task(
                &Seq::root(1),
                Outcome { writes: vec![Write { region: x, values: vec![Scalar::Int(0)] }], ..Outcome::default() },
            )
            .unwrap_err();
        assert!(matches!(err, GraphError::WriteToUndeclaredRegion { .. }));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn child_out_alias_is_rejected() {
        let mut g = Graph::parse("f(;;y)").unwrap();
        let y = RegionRef::from(g.item_named("y").unwrap().whole());
        let out = |r| Binding { mode: Mode::Out, del: false, target: Target::Region(r), is_array: false };
        let err = g
            .complete_task(
                &Seq::root(1),
                Outcome {
                    children: vec![TaskTemplate {
                        instruction: "two".into(),
                        bindings: vec![out(y), out(y)],
                        channels: vec![],
                    }],
                    ..Outcome::default()
                },
            )
            .unwrap_err();
        assert!(matches!(err, GraphError::OutAlias { .. }));
    }
}
