use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EventTime;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropValue {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropType {
    Int,
    Float,
    Str,
    Bool,
}

impl PropValue {
    pub fn dtype(&self) -> PropType {
        match self {
            PropValue::Int(_) => PropType::Int,
            PropValue::Float(_) => PropType::Float,
            PropValue::Str(_) => PropType::Str,
            PropValue::Bool(_) => PropType::Bool,
        }
    }
}

impl PropType {
    pub fn name(self) -> &'static str {
        match self {
            PropType::Int => "int",
            PropType::Float => "float",
            PropType::Str => "str",
            PropType::Bool => "bool",
        }
    }

    /// Parses a textual cell into a value of this type.
    pub fn parse_value(self, raw: &str) -> Result<PropValue, String> {
        match self {
            PropType::Int => raw
                .trim()
                .parse()
                .map(PropValue::Int)
                .map_err(|e| format!("`{raw}` is not an int: {e}")),
            PropType::Float => raw
                .trim()
                .parse()
                .map(PropValue::Float)
                .map_err(|e| format!("`{raw}` is not a float: {e}")),
            PropType::Bool => match raw.trim() {
                "true" => Ok(PropValue::Bool(true)),
                "false" => Ok(PropValue::Bool(false)),
                other => Err(format!("`{other}` is not a bool")),
            },
            PropType::Str => Ok(PropValue::Str(raw.to_owned())),
        }
    }
}

impl std::str::FromStr for PropType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "int" | "i64" | "integer" => Ok(PropType::Int),
            "float" | "f64" => Ok(PropType::Float),
            "str" | "string" => Ok(PropType::Str),
            "bool" | "boolean" => Ok(PropType::Bool),
            other => Err(format!("unknown property type `{other}`")),
        }
    }
}

impl fmt::Display for PropType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for PropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropValue::Int(v) => write!(f, "{v}"),
            PropValue::Float(v) => write!(f, "{v:?}"),
            PropValue::Str(v) => f.write_str(v),
            PropValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

impl From<i64> for PropValue {
    fn from(v: i64) -> Self {
        PropValue::Int(v)
    }
}

impl From<i32> for PropValue {
    fn from(v: i32) -> Self {
        PropValue::Int(v.into())
    }
}

impl From<f64> for PropValue {
    fn from(v: f64) -> Self {
        PropValue::Float(v)
    }
}

impl From<bool> for PropValue {
    fn from(v: bool) -> Self {
        PropValue::Bool(v)
    }
}

impl From<&str> for PropValue {
    fn from(v: &str) -> Self {
        PropValue::Str(v.to_owned())
    }
}

impl From<String> for PropValue {
    fn from(v: String) -> Self {
        PropValue::Str(v)
    }
}

/// Property names are interned per graph; histories refer to them by index.
#[derive(Clone, Debug, Default)]
pub(crate) struct Interner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }
}

/// Values of one property on one entity, sorted by event time.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PropHistory {
    entries: Vec<(EventTime, PropValue)>,
}

impl PropHistory {
    pub fn dtype(&self) -> Option<PropType> {
        self.entries.first().map(|(_, v)| v.dtype())
    }

    pub fn entries(&self) -> &[(EventTime, PropValue)] {
        &self.entries
    }

    pub(crate) fn insert(&mut self, at: EventTime, value: PropValue) {
        let pos = self.entries.partition_point(|(t, _)| *t < at);
        self.entries.insert(pos, (at, value));
    }

    /// Latest entry with `lower <= time < upper`.
    pub fn latest_in(&self, lower: i64, upper: i64) -> Option<&PropValue> {
        let end = self.entries.partition_point(|(t, _)| t.time < upper);
        self.entries[..end]
            .last()
            .filter(|(t, _)| t.time >= lower)
            .map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn et(time: i64, seq: u64) -> EventTime {
        EventTime { time, seq }
    }

    #[test]
    fn latest_respects_bounds() {
        let mut h = PropHistory::default();
        h.insert(et(6, 1), 2.into());
        h.insert(et(1, 0), 1.into());
        assert_eq!(h.latest_in(0, 5), Some(&PropValue::Int(1)));
        assert_eq!(h.latest_in(0, 7), Some(&PropValue::Int(2)));
        assert_eq!(h.latest_in(2, 5), None);
        assert_eq!(h.latest_in(i64::MIN, 1), None);
    }

    #[test]
    fn equal_times_order_by_sequence() {
        let mut h = PropHistory::default();
        h.insert(et(3, 5), "second".into());
        h.insert(et(3, 2), "first".into());
        assert_eq!(h.latest_in(0, 4), Some(&PropValue::from("second")));
    }

    #[test]
    fn parse_cells() {
        assert_eq!(PropType::Int.parse_value("42"), Ok(PropValue::Int(42)));
        assert_eq!(PropType::Float.parse_value("2.5"), Ok(PropValue::Float(2.5)));
        assert_eq!(PropType::Bool.parse_value("true"), Ok(PropValue::Bool(true)));
        assert!(PropType::Int.parse_value("x").is_err());
        assert_eq!("string".parse::<PropType>(), Ok(PropType::Str));
    }
}
