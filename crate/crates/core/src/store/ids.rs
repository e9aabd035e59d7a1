use std::fmt;

use serde::{Deserialize, Serialize};

/// External node identifier: an unsigned integer or a string.
///
/// Strings that spell a canonical unsigned integer (`"0"`, `"42"`, but not
/// `"042"`) are normalised to [`NodeId::Num`], so ids survive a trip through
/// text formats unchanged. Numeric ids order before string ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum NodeId {
    Num(u64),
    Str(String),
}

// map keys always arrive as strings, so strings are normalised on the way in
impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Num(n) => NodeId::Num(n),
            Raw::Str(s) => NodeId::from(s),
        })
    }
}

impl NodeId {
    pub fn parse(s: &str) -> Self {
        let canonical = !s.is_empty()
            && s.bytes().all(|b| b.is_ascii_digit())
            && (s.len() == 1 || !s.starts_with('0'));
        match canonical.then(|| s.parse::<u64>().ok()).flatten() {
            Some(n) => NodeId::Num(n),
            None => NodeId::Str(s.to_owned()),
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Num(n) => write!(f, "{n}"),
            NodeId::Str(s) => f.write_str(s),
        }
    }
}

impl From<u64> for NodeId {
    fn from(n: u64) -> Self {
        NodeId::Num(n)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::parse(s)
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        match NodeId::parse(&s) {
            NodeId::Num(n) => NodeId::Num(n),
            NodeId::Str(_) => NodeId::Str(s),
        }
    }
}

impl From<&String> for NodeId {
    fn from(s: &String) -> Self {
        NodeId::parse(s)
    }
}

impl From<&NodeId> for NodeId {
    fn from(id: &NodeId) -> Self {
        id.clone()
    }
}

/// A node as seen by the store: its external id and the dense internal index
/// assigned at first sight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub id: NodeId,
    pub vid: usize,
}

/// One directed edge history, identified by its (source, target) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub eid: usize,
    pub src: usize,
    pub dst: usize,
}
