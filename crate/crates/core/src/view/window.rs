use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{GraphError, Result, Time};

/// Half-open time range `[start, end)`. `Time::MIN` and `Time::MAX` stand for
/// the unbounded sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    start: Time,
    end: Time,
}

impl Window {
    pub const ALL: Window = Window {
        start: Time::MIN,
        end: Time::MAX,
    };

    pub fn new(start: Time, end: Time) -> Result<Self> {
        if start < end {
            Ok(Window { start, end })
        } else {
            Err(GraphError::InvalidWindow { start, end })
        }
    }

    /// Everything strictly before `end`.
    pub fn until(end: Time) -> Self {
        Window {
            start: Time::MIN,
            end,
        }
    }

    pub fn start(&self) -> Time {
        self.start
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn contains(&self, t: Time) -> bool {
        self.start <= t && t < self.end
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn is_bounded(&self) -> bool {
        self.start != Time::MIN || self.end != Time::MAX
    }

    /// May produce an empty window; queries through an empty window see nothing.
    pub fn intersect(&self, other: &Window) -> Window {
        Window {
            start: self.start.max(other.start),
            end: self.end.min(other.end),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.start {
            Time::MIN => f.write_str("[-inf, ")?,
            s => write!(f, "[{s}, ")?,
        }
        match self.end {
            Time::MAX => f.write_str("+inf)"),
            e => write!(f, "{e})"),
        }
    }
}

/// An ordered sequence of windows, produced by [`WindowSet::rolling`] or
/// [`WindowSet::expanding`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSet {
    windows: Vec<Window>,
}

impl WindowSet {
    pub fn from_windows(mut windows: Vec<Window>) -> Self {
        windows.sort_by_key(|w| (w.start, w.end));
        WindowSet { windows }
    }

    /// Fixed-width windows `[s, s + size)` for `s = first, first + step, ...`
    /// while `s <= last`.
    pub fn rolling(bounds: Option<(Time, Time)>, size: Time, step: Option<Time>) -> Result<Self> {
        let step = step.unwrap_or(size);
        if size <= 0 || step <= 0 {
            return Err(GraphError::InvalidArgument(format!(
                "window size and step must be positive (got {size} and {step})"
            )));
        }
        let mut windows = Vec::new();
        if let Some((first, last)) = bounds {
            let mut s = first;
            while s <= last {
                let end = s.checked_add(size).ok_or(GraphError::TimeOverflow)?;
                windows.push(Window { start: s, end });
                match s.checked_add(step) {
                    Some(next) => s = next,
                    None => break,
                }
            }
        }
        Ok(WindowSet { windows })
    }

    /// Growing prefixes `(-inf, first + k * step)` for `k = 1, 2, ...`, stopping
    /// after the first bound that exceeds `last`.
    pub fn expanding(bounds: Option<(Time, Time)>, step: Time) -> Result<Self> {
        if step <= 0 {
            return Err(GraphError::InvalidArgument(format!(
                "expanding step must be positive (got {step})"
            )));
        }
        let mut windows = Vec::new();
        if let Some((first, last)) = bounds {
            let mut end = first;
            loop {
                end = end.checked_add(step).ok_or(GraphError::TimeOverflow)?;
                windows.push(Window::until(end));
                if end > last {
                    break;
                }
            }
        }
        Ok(WindowSet { windows })
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Window> {
        self.windows.iter()
    }

    pub fn as_slice(&self) -> &[Window] {
        &self.windows
    }
}

impl<'a> IntoIterator for &'a WindowSet {
    type Item = &'a Window;
    type IntoIter = std::slice::Iter<'a, Window>;

    fn into_iter(self) -> Self::IntoIter {
        self.windows.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn starts(ws: &WindowSet) -> Vec<Time> {
        ws.iter().map(|w| w.start()).collect()
    }

    #[test]
    fn invalid_windows() {
        assert_eq!(
            Window::new(5, 2),
            Err(GraphError::InvalidWindow { start: 5, end: 2 })
        );
        assert!(Window::new(3, 3).is_err());
    }

    #[test]
    fn intersection() {
        let w = Window::new(0, 10).unwrap().intersect(&Window::new(5, 20).unwrap());
        assert_eq!(w, Window::new(5, 10).unwrap());
        let empty = Window::new(0, 2).unwrap().intersect(&Window::new(4, 6).unwrap());
        assert!(empty.is_empty());
        assert_eq!(Window::ALL.intersect(&w), w);
    }

    #[test]
    fn rolling_tiles_the_span() {
        let ws = WindowSet::rolling(Some((0, 9)), 5, None).unwrap();
        assert_eq!(
            ws.as_slice(),
            &[Window::new(0, 5).unwrap(), Window::new(5, 10).unwrap()]
        );
        let ws = WindowSet::rolling(Some((0, 9)), 5, Some(2)).unwrap();
        assert_eq!(starts(&ws), vec![0, 2, 4, 6, 8]);
        assert!(ws.iter().all(|w| w.end() - w.start() == 5));
        assert!(WindowSet::rolling(None, 5, None).unwrap().is_empty());
    }

    #[test]
    fn rolling_rejects_non_positive() {
        assert!(WindowSet::rolling(Some((0, 9)), 0, None).is_err());
        assert!(WindowSet::rolling(Some((0, 9)), 5, Some(-1)).is_err());
        assert!(WindowSet::expanding(Some((0, 9)), 0).is_err());
    }

    // enumerate k until the bound passes the last event, keeping that window
    fn expanding_oracle(first: Time, last: Time, step: Time) -> Vec<Time> {
        let mut ends = Vec::new();
        for k in 1.. {
            let end = first + k * step;
            ends.push(end);
            if end > last {
                break;
            }
        }
        ends
    }

    #[test]
    fn expanding_bounds() {
        let ws = WindowSet::expanding(Some((0, 9)), 5).unwrap();
        let ends: Vec<_> = ws.iter().map(|w| w.end()).collect();
        assert_eq!(ends, vec![5, 10]);
        assert_eq!(ends, expanding_oracle(0, 9, 5));
        assert!(ws.iter().all(|w| w.start() == Time::MIN));
        for (first, last, step) in [(3, 3, 1), (0, 100, 7), (-20, 13, 4), (5, 6, 50)] {
            let ends: Vec<_> = WindowSet::expanding(Some((first, last)), step)
                .unwrap()
                .iter()
                .map(|w| w.end())
                .collect();
            assert_eq!(ends, expanding_oracle(first, last, step));
        }
        assert_eq!(WindowSet::expanding(Some((0, 9)), 50).unwrap().len(), 1);
        assert!(WindowSet::expanding(None, 5).unwrap().is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(Window::ALL.to_string(), "[-inf, +inf)");
        assert_eq!(Window::new(1, 4).unwrap().to_string(), "[1, 4)");
    }
}
