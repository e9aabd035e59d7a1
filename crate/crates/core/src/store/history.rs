use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{NodeId, PropHistory, PropType, PropValue};

/// Position of an event in the chronological log: its timestamp plus the
/// sequence index that breaks ties between equal timestamps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EventTime {
    pub time: i64,
    pub seq: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Addition {
    pub at: EventTime,
    pub props: Vec<(usize, PropValue)>,
}

/// Additions and deletions of one edge on one layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LayerHistory {
    pub(crate) additions: Vec<Addition>,
    pub(crate) deletions: Vec<EventTime>,
}

impl LayerHistory {
    pub fn additions(&self) -> impl Iterator<Item = EventTime> + '_ {
        self.additions.iter().map(|a| a.at)
    }

    pub fn deletions(&self) -> &[EventTime] {
        &self.deletions
    }

    pub(crate) fn push_addition(&mut self, addition: Addition) {
        let pos = self.additions.partition_point(|a| a.at < addition.at);
        self.additions.insert(pos, addition);
    }

    pub(crate) fn push_deletion(&mut self, at: EventTime) {
        let pos = self.deletions.partition_point(|d| *d < at);
        self.deletions.insert(pos, at);
    }

    /// True if some addition has `start <= time < end`.
    pub(crate) fn has_addition_in(&self, start: i64, end: i64) -> bool {
        let first = self.additions.partition_point(|a| a.at.time < start);
        self.additions.get(first).is_some_and(|a| a.at.time < end)
    }

    pub(crate) fn additions_in(&self, start: i64, end: i64) -> &[Addition] {
        let lo = self.additions.partition_point(|a| a.at.time < start);
        let hi = self.additions.partition_point(|a| a.at.time < end);
        &self.additions[lo..hi]
    }
}

#[derive(Clone, Debug)]
pub(crate) struct EdgeStore {
    pub src: usize,
    pub dst: usize,
    /// Sorted by layer index.
    pub layers: Vec<(usize, LayerHistory)>,
    pub prop_types: HashMap<usize, PropType>,
}

impl EdgeStore {
    pub fn new(src: usize, dst: usize) -> Self {
        Self {
            src,
            dst,
            layers: Vec::new(),
            prop_types: HashMap::new(),
        }
    }

    #[cfg(test)]
    pub fn layer(&self, layer: usize) -> Option<&LayerHistory> {
        self.layers
            .binary_search_by_key(&layer, |(l, _)| *l)
            .ok()
            .map(|i| &self.layers[i].1)
    }

    pub fn layer_mut(&mut self, layer: usize) -> &mut LayerHistory {
        let i = match self.layers.binary_search_by_key(&layer, |(l, _)| *l) {
            Ok(i) => i,
            Err(i) => {
                self.layers.insert(i, (layer, LayerHistory::default()));
                i
            }
        };
        &mut self.layers[i].1
    }
}

#[derive(Clone, Debug)]
pub(crate) struct NodeStore {
    pub id: NodeId,
    /// Explicit node updates (`add_node`, `delete_node`).
    pub activity: Vec<EventTime>,
    /// Property updates that carry no activity (produced by materialisation).
    pub prop_updates: Vec<EventTime>,
    pub props: HashMap<usize, PropHistory>,
    pub constants: BTreeMap<String, PropValue>,
    pub out_edges: Vec<usize>,
    pub in_edges: Vec<usize>,
}

impl NodeStore {
    pub fn new(id: NodeId) -> Self {
        Self {
            id,
            activity: Vec::new(),
            prop_updates: Vec::new(),
            props: HashMap::new(),
            constants: BTreeMap::new(),
            out_edges: Vec::new(),
            in_edges: Vec::new(),
        }
    }

    pub fn has_activity_in(&self, start: i64, end: i64) -> bool {
        let first = self.activity.partition_point(|a| a.time < start);
        self.activity.get(first).is_some_and(|a| a.time < end)
    }
}

pub(crate) fn insert_sorted(list: &mut Vec<EventTime>, at: EventTime) {
    let pos = list.partition_point(|t| *t < at);
    list.insert(pos, at);
}
