use std::fmt;

use serde::Serialize;

use super::Seq;
use crate::frontend::{Mode, Origin};
use crate::value::{BaseType, Extent, Scalar, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskId(pub u64);

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A storage cell: a scalar, or an array over `extent`, with per-element
/// definedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub id: ItemId,
    pub name: String,
    pub ty: BaseType,
    pub extent: Extent,
    pub is_array: bool,
    /// Values survive collection in the run's final observations.
    pub observed: bool,
    slots: Vec<Option<Scalar>>,
}

impl Item {
    pub fn new(id: ItemId, name: &str, ty: BaseType, extent: Extent, is_array: bool) -> Item {
        Item { id, name: name.to_string(), ty, extent, is_array, observed: false, slots: vec![None; extent.len()] }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Option<Scalar>] {
        &self.slots
    }

    pub fn whole(&self) -> Region {
        Region { item: self.id, lo: 0, hi: self.len() - 1 }
    }

    pub fn is_defined(&self, lo: usize, hi: usize) -> bool {
        self.slots[lo..=hi].iter().all(Option::is_some)
    }

    pub fn defined_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Values of `[lo, hi]` when every element is defined.
    pub fn read(&self, lo: usize, hi: usize) -> Option<Vec<Scalar>> {
        self.slots[lo..=hi].iter().copied().collect()
    }

    pub fn write(&mut self, lo: usize, values: &[Scalar]) {
        for (slot, v) in self.slots[lo..lo + values.len()].iter_mut().zip(values) {
            *slot = Some(*v);
        }
    }

    pub(crate) fn init(&mut self, slots: Vec<Option<Scalar>>) {
        debug_assert_eq!(slots.len(), self.slots.len());
        self.slots = slots;
    }

    pub fn snapshot(&self) -> Observed {
        Observed { is_array: self.is_array, slots: self.slots.clone() }
    }
}

/// Recorded contents of an observed item.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Observed {
    pub is_array: bool,
    pub slots: Vec<Option<Scalar>>,
}

impl Observed {
    pub fn value(&self) -> Option<Value> {
        let values: Option<Vec<Scalar>> = self.slots.iter().copied().collect();
        let values = values?;
        Some(if self.is_array { Value::Array(values) } else { Value::Scalar(values[0]) })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let slot = |s: &Option<Scalar>| s.map_or(serde_json::Value::Null, |s| s.to_json());
        if self.is_array {
            self.slots.iter().map(slot).collect::<Vec<_>>().into()
        } else {
            slot(&self.slots[0])
        }
    }
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => {
                write!(f, "<{} of {} undefined>", self.slots.iter().filter(|s| s.is_none()).count(), self.slots.len())
            }
        }
    }
}

impl Serialize for Observed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Element range `[lo, hi]` of a root item, as offsets from its first element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub item: ItemId,
    pub lo: usize,
    pub hi: usize,
}

impl Region {
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &Region) -> bool {
        self.item == other.item && self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains(&self, other: &Region) -> bool {
        self.item == other.item && self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Two accesses conflict when they overlap and at least one writes.
pub fn regions_conflict(r1: &Region, m1: Mode, r2: &Region, m2: Mode) -> bool {
    r1.overlaps(r2) && (m1.writes() || m2.writes())
}

/// Item reference inside an outcome: an existing root, or the n-th item the
/// completing task allocates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItemRef {
    Root(ItemId),
    Local(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegionRef {
    pub item: ItemRef,
    pub lo: usize,
    pub hi: usize,
}

impl From<Region> for RegionRef {
    fn from(r: Region) -> Self {
        RegionRef { item: ItemRef::Root(r.item), lo: r.lo, hi: r.hi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target<R = Region> {
    Region(R),
    Literal(Value),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binding<R = Region> {
    pub mode: Mode,
    pub del: bool,
    pub target: Target<R>,
    /// Bound to an array-shaped parameter; a literal copy keeps the shape.
    pub is_array: bool,
}

impl<R> Binding<R> {
    pub fn region(&self) -> Option<&R> {
        match &self.target {
            Target::Region(r) => Some(r),
            Target::Literal(_) => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        !self.del
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelBinding {
    pub channel: String,
    pub del: bool,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub id: TaskId,
    pub seq: Seq,
    pub instruction: String,
    pub bindings: Vec<Binding>,
    pub channels: Vec<ChannelBinding>,
}

impl Task {
    pub fn regions(&self) -> impl Iterator<Item = (&Binding, &Region)> {
        self.bindings.iter().filter_map(|b| b.region().map(|r| (b, r)))
    }

    pub fn channel(&self, name: &str) -> Option<&ChannelBinding> {
        self.channels.iter().find(|c| c.channel == name)
    }
}

/// A child task as produced by delegation, before it is placed in the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskTemplate {
    pub instruction: String,
    pub bindings: Vec<Binding<RegionRef>>,
    pub channels: Vec<ChannelBinding>,
}

/// An item the completing task allocates for its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alloc {
    pub name: String,
    pub ty: BaseType,
    pub extent: Extent,
    pub is_array: bool,
    /// Initial contents; `None` slots start undefined.
    pub init: Vec<Option<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Write {
    pub region: Region,
    pub values: Vec<Scalar>,
}

/// Everything a task's execution produces, applied atomically at completion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub allocs: Vec<Alloc>,
    pub writes: Vec<Write>,
    pub channel_writes: Vec<(String, Scalar)>,
    pub children: Vec<TaskTemplate>,
}
