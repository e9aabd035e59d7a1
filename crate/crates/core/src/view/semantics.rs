use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Window;
use crate::store::{EventTime, LayerHistory};
use crate::Time;

/// How deletions affect edge presence in a window.
///
/// Under `Event` an edge is present when one of its additions falls inside the
/// window and deletions are ignored. Under `Persistent` an addition opens an
/// alive interval that lasts until the next deletion, and the edge is present
/// when an alive interval overlaps the window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeletionSemantics {
    #[default]
    Event,
    Persistent,
}

impl FromStr for DeletionSemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "event" => Ok(DeletionSemantics::Event),
            "persistent" => Ok(DeletionSemantics::Persistent),
            other => Err(format!("unknown deletion semantics `{other}`")),
        }
    }
}

impl fmt::Display for DeletionSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeletionSemantics::Event => "event",
            DeletionSemantics::Persistent => "persistent",
        })
    }
}

/// A maximal alive interval `[start, end)`. `opened_by` is `None` for the
/// implicit interval closed by leading deletions; `closed_by` is `None` for a
/// trailing interval that never closes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AliveInterval {
    pub start: Time,
    pub end: Time,
    pub opened_by: Option<EventTime>,
    pub closed_by: Option<EventTime>,
}

impl AliveInterval {
    /// An interval overlaps a window when they share an instant; an interval
    /// opened and closed at the same instant still counts at that instant.
    pub fn overlaps(&self, w: &Window) -> bool {
        if self.start == self.end {
            w.contains(self.start)
        } else {
            self.start < w.end() && self.end > w.start()
        }
    }
}

/// Scans additions and deletions in (timestamp, sequence) order: an addition
/// opens an interval if none is open, a deletion closes the open one. Leading
/// deletions with no earlier addition close the implicit interval from -inf;
/// any other deletion without an open interval is ignored.
pub fn alive_intervals(history: &LayerHistory) -> Vec<AliveInterval> {
    let mut additions = history.additions().peekable();
    let mut deletions = history.deletions().iter().copied().peekable();
    let mut out: Vec<AliveInterval> = Vec::new();
    let mut open: Option<EventTime> = None;
    let mut seen_addition = false;
    loop {
        let take_addition = match (additions.peek(), deletions.peek()) {
            (Some(a), Some(d)) => a < d,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_addition {
            let a = additions.next().unwrap();
            seen_addition = true;
            if open.is_none() {
                open = Some(a);
            }
        } else {
            let d = deletions.next().unwrap();
            match open.take() {
                Some(a) => out.push(AliveInterval {
                    start: a.time,
                    end: d.time,
                    opened_by: Some(a),
                    closed_by: Some(d),
                }),
                None if !seen_addition => match out.last_mut() {
                    // a run of leading deletions extends the implicit interval
                    Some(implicit) => {
                        implicit.end = d.time;
                        implicit.closed_by = Some(d);
                    }
                    None => out.push(AliveInterval {
                        start: Time::MIN,
                        end: d.time,
                        opened_by: None,
                        closed_by: Some(d),
                    }),
                },
                None => {}
            }
        }
    }
    if let Some(a) = open {
        out.push(AliveInterval {
            start: a.time,
            end: Time::MAX,
            opened_by: Some(a),
            closed_by: None,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::Addition;

    fn history(adds: &[Time], dels: &[Time]) -> LayerHistory {
        // sequence indices follow the given timestamps, additions first on ties
        let mut h = LayerHistory::default();
        let mut events: Vec<(Time, bool)> = adds.iter().map(|&t| (t, true)).collect();
        events.extend(dels.iter().map(|&t| (t, false)));
        events.sort_by_key(|&(t, is_add)| (t, !is_add));
        for (seq, (time, is_add)) in events.into_iter().enumerate() {
            let at = EventTime { time, seq: seq as u64 };
            if is_add {
                h.push_addition(Addition { at, props: vec![] });
            } else {
                h.push_deletion(at);
            }
        }
        h
    }

    fn spans(h: &LayerHistory) -> Vec<(Time, Time)> {
        alive_intervals(h).iter().map(|i| (i.start, i.end)).collect()
    }

    #[test]
    fn add_delete_add() {
        assert_eq!(
            spans(&history(&[1, 9], &[5])),
            vec![(1, 5), (9, Time::MAX)]
        );
    }

    #[test]
    fn leading_deletion_closes_implicit_interval() {
        assert_eq!(spans(&history(&[], &[3])), vec![(Time::MIN, 3)]);
        assert_eq!(spans(&history(&[], &[3, 6])), vec![(Time::MIN, 6)]);
        assert_eq!(
            spans(&history(&[8], &[3])),
            vec![(Time::MIN, 3), (8, Time::MAX)]
        );
    }

    #[test]
    fn stray_deletion_after_addition_is_ignored() {
        assert_eq!(spans(&history(&[1], &[2, 4])), vec![(1, 2)]);
    }

    #[test]
    fn repeated_additions_keep_interval_open() {
        assert_eq!(spans(&history(&[1, 3], &[5])), vec![(1, 5)]);
    }

    #[test]
    fn overlap_rules() {
        let iv = AliveInterval {
            start: 1,
            end: 5,
            opened_by: None,
            closed_by: None,
        };
        assert!(iv.overlaps(&Window::new(2, 4).unwrap()));
        assert!(iv.overlaps(&Window::new(4, 9).unwrap()));
        assert!(!iv.overlaps(&Window::new(5, 9).unwrap()));
        assert!(!iv.overlaps(&Window::new(0, 1).unwrap()));
        let point = AliveInterval { start: 5, end: 5, ..iv };
        assert!(point.overlaps(&Window::new(5, 6).unwrap()));
        assert!(!point.overlaps(&Window::new(6, 7).unwrap()));
    }
}
