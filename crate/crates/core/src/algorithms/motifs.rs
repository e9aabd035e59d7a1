//! Counting of three-edge, up-to-three-node δ-temporal motifs.
//!
//! A motif instance is an ordered triple of edge-addition events with strictly
//! increasing timestamps `t1 < t2 < t3` and `t3 - t1 <= delta`, whose nodes,
//! relabelled by first appearance as `a`, `b`, `c`, number at most three.
//! Self-loop events never participate. The first edge is always `ab`, which
//! leaves six possible second edges and six possible third edges:
//!
//! ```text
//! rows (first two edges):  ab ab | ab ac | ab ba | ab bc | ab ca | ab cb
//! columns (third edge):       ab |    ac |    ba |    bc |    ca |    cb
//! ```
//!
//! Both key lists are sorted lexicographically.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::{GraphError, GraphView, Result, Time};

pub const ROW_KEYS: [&str; 6] = ["ab ab", "ab ac", "ab ba", "ab bc", "ab ca", "ab cb"];
pub const COLUMN_KEYS: [&str; 6] = ["ab", "ac", "ba", "bc", "ca", "cb"];

// labels a, b, c as 0, 1, 2; COLUMN_KEYS indexed by directed label pair
const fn pair_index(from: usize, to: usize) -> usize {
    match (from, to) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 0) => 2,
        (1, 2) => 3,
        (2, 0) => 4,
        _ => 5, // (2, 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotifSignature {
    pub signature: String,
    pub row: usize,
    pub col: usize,
}

/// All 36 motif classes in row-major matrix order.
pub fn motif_signatures() -> Vec<MotifSignature> {
    let mut out = Vec::with_capacity(36);
    for (row, prefix) in ROW_KEYS.iter().enumerate() {
        for (col, third) in COLUMN_KEYS.iter().enumerate() {
            out.push(MotifSignature {
                signature: format!("{prefix} {third}"),
                row,
                col,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotifMatrix {
    pub counts: [[u64; 6]; 6],
    pub delta: Time,
}

impl MotifMatrix {
    pub fn new(delta: Time) -> Self {
        MotifMatrix {
            counts: [[0; 6]; 6],
            delta,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Count for a signature such as `"ab ba ab"`.
    pub fn get(&self, signature: &str) -> Option<u64> {
        let (prefix, third) = signature.rsplit_once(' ')?;
        let row = ROW_KEYS.iter().position(|k| *k == prefix)?;
        let col = COLUMN_KEYS.iter().position(|k| *k == third)?;
        Some(self.counts[row][col])
    }

    pub fn add(&mut self, other: &MotifMatrix) {
        for (r, row) in other.counts.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                self.counts[r][c] += v;
            }
        }
    }

    /// True if every cell is at most the matching cell of `other`.
    pub fn le_cellwise(&self, other: &MotifMatrix) -> bool {
        self.counts
            .iter()
            .flatten()
            .zip(other.counts.iter().flatten())
            .all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MotifMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>6}", "")?;
        for c in COLUMN_KEYS {
            write!(f, " {c:>8}")?;
        }
        for (row, key) in self.counts.iter().zip(ROW_KEYS) {
            write!(f, "\n{key:>6}")?;
            for v in row {
                write!(f, " {v:>8}")?;
            }
        }
        Ok(())
    }
}

/// Per-node and per-pair time indexes over the motif-eligible events.
struct EventIndex {
    out: Vec<Vec<(Time, usize)>>,
    inc: Vec<Vec<(Time, usize)>>,
    pairs: HashMap<(usize, usize), Vec<Time>>,
}

/// Events with `lo < t <= hi` in a time-sorted slice.
fn count_between<T>(list: &[T], key: impl Fn(&T) -> Time, lo: Time, hi: Time) -> u64 {
    let from = list.partition_point(|x| key(x) <= lo);
    let to = list.partition_point(|x| key(x) <= hi);
    to.saturating_sub(from) as u64
}

fn slice_between(list: &[(Time, usize)], lo: Time, hi: Time) -> &[(Time, usize)] {
    let from = list.partition_point(|x| x.0 <= lo);
    let to = list.partition_point(|x| x.0 <= hi);
    &list[from..to.max(from)]
}

impl EventIndex {
    fn pair(&self, u: usize, v: usize, lo: Time, hi: Time) -> u64 {
        self.pairs
            .get(&(u, v))
            .map_or(0, |ts| count_between(ts, |t| *t, lo, hi))
    }

    fn out_count(&self, v: usize, lo: Time, hi: Time) -> u64 {
        count_between(&self.out[v], |x| x.0, lo, hi)
    }

    fn in_count(&self, v: usize, lo: Time, hi: Time) -> u64 {
        count_between(&self.inc[v], |x| x.0, lo, hi)
    }
}

/// Counts every ordered triple of visible edge additions forming one of the
/// 36 motif classes within `delta`.
pub fn temporal_motifs(view: &GraphView, delta: Time) -> Result<MotifMatrix> {
    if delta <= 0 {
        return Err(GraphError::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let events: Vec<(Time, usize, usize)> = view
        .addition_events()
        .into_iter()
        .filter(|e| e.src != e.dst)
        .map(|e| (e.time, e.src, e.dst))
        .collect();
    let n = view.graph().count_nodes();
    let mut index = EventIndex {
        out: vec![Vec::new(); n],
        inc: vec![Vec::new(); n],
        pairs: HashMap::new(),
    };
    for &(t, s, d) in &events {
        index.out[s].push((t, d));
        index.inc[d].push((t, s));
        index.pairs.entry((s, d)).or_default().push(t);
    }

    let counts = events
        .par_iter()
        .fold(
            || MotifMatrix::new(delta),
            |mut acc, &(t1, a, b)| {
                count_from(&index, &mut acc, t1, a, b);
                acc
            },
        )
        .reduce(
            || MotifMatrix::new(delta),
            |mut x, y| {
                x.add(&y);
                x
            },
        );
    Ok(counts)
}

/// Adds all motifs whose first event is `a -> b` at `t1`.
fn count_from(index: &EventIndex, acc: &mut MotifMatrix, t1: Time, a: usize, b: usize) {
    let hi = t1.saturating_add(acc.delta);
    // second events touching a or b, tagged with their label pair and the new node
    let mut seconds: Vec<(Time, usize, Option<usize>)> = Vec::new();
    for &(t, x) in slice_between(&index.out[a], t1, hi) {
        seconds.push(if x == b { (t, pair_index(0, 1), None) } else { (t, pair_index(0, 2), Some(x)) });
    }
    for &(t, x) in slice_between(&index.inc[a], t1, hi) {
        seconds.push(if x == b { (t, pair_index(1, 0), None) } else { (t, pair_index(2, 0), Some(x)) });
    }
    for &(t, x) in slice_between(&index.out[b], t1, hi) {
        if x != a {
            seconds.push((t, pair_index(1, 2), Some(x)));
        }
    }
    for &(t, x) in slice_between(&index.inc[b], t1, hi) {
        if x != a {
            seconds.push((t, pair_index(2, 1), Some(x)));
        }
    }
    for (t2, row, c) in seconds {
        let cells = &mut acc.counts[row];
        match c {
            None => {
                let ab = index.pair(a, b, t2, hi);
                let ba = index.pair(b, a, t2, hi);
                cells[pair_index(0, 1)] += ab;
                cells[pair_index(1, 0)] += ba;
                cells[pair_index(0, 2)] += index.out_count(a, t2, hi) - ab;
                cells[pair_index(2, 0)] += index.in_count(a, t2, hi) - ba;
                cells[pair_index(1, 2)] += index.out_count(b, t2, hi) - ba;
                cells[pair_index(2, 1)] += index.in_count(b, t2, hi) - ab;
            }
            Some(c) => {
                let nodes = [a, b, c];
                for from in 0..3 {
                    for to in 0..3 {
                        if from != to {
                            cells[pair_index(from, to)] += index.pair(nodes[from], nodes[to], t2, hi);
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::{TemporalGraph, NO_PROPS};

    fn graph(events: &[(i64, &str, &str)]) -> Arc<TemporalGraph> {
        let mut g = TemporalGraph::new();
        for &(t, s, d) in events {
            g.add_edge(t, s, d, NO_PROPS, None).unwrap();
        }
        Arc::new(g)
    }

    #[test]
    fn single_back_and_forth() {
        let g = graph(&[(1, "u", "v"), (2, "v", "u"), (3, "u", "v")]);
        let m = temporal_motifs(&g.view(), 10).unwrap();
        assert_eq!(m.get("ab ba ab"), Some(1));
        assert_eq!(m.total(), 1);
        let tight = temporal_motifs(&g.view(), 1).unwrap();
        assert_eq!(tight.total(), 0);
    }

    #[test]
    fn needs_three_events() {
        let g = graph(&[(1, "u", "v"), (2, "v", "w")]);
        assert_eq!(temporal_motifs(&g.view(), 100).unwrap().total(), 0);
    }

    #[test]
    fn equal_timestamps_do_not_chain() {
        let g = graph(&[(1, "a", "b"), (1, "b", "c"), (2, "c", "a")]);
        assert_eq!(temporal_motifs(&g.view(), 10).unwrap().total(), 0);
    }

    #[test]
    fn triangle_cycle() {
        let g = graph(&[(1, "x", "y"), (2, "y", "z"), (3, "z", "x")]);
        let m = temporal_motifs(&g.view(), 5).unwrap();
        assert_eq!(m.get("ab bc ca"), Some(1));
        assert_eq!(m.total(), 1);
    }

    #[test]
    fn four_nodes_and_self_loops_excluded() {
        let g = graph(&[(1, "a", "b"), (2, "c", "d"), (3, "a", "a"), (4, "b", "a")]);
        let m = temporal_motifs(&g.view(), 10).unwrap();
        assert_eq!(m.total(), 0);
    }

    #[test]
    fn signatures_layout() {
        let sigs = motif_signatures();
        assert_eq!(sigs.len(), 36);
        assert_eq!(sigs[0].signature, "ab ab ab");
        assert_eq!(sigs[35].signature, "ab cb cb");
        let two_node = sigs
            .iter()
            .filter(|s| !s.signature.contains('c'))
            .count();
        assert_eq!(two_node, 4);
    }

    #[test]
    fn rejects_non_positive_delta() {
        let g = graph(&[(1, "a", "b")]);
        assert!(temporal_motifs(&g.view(), 0).is_err());
    }
}
