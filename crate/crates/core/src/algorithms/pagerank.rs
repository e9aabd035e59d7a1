use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{view_metadata, AlgorithmResult, ResultRow, ResultValue};
use crate::{GraphError, GraphView, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Stop once the L1 change between iterations drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tolerance: 1e-7,
            max_iterations: 100,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if self.damping.is_nan() || self.damping <= 0.0 || self.damping >= 1.0 {
            return Err(GraphError::InvalidArgument(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(GraphError::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(GraphError::InvalidArgument("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Power-iteration PageRank on the view's directed edge set.
///
/// Each visible (source, target) pair counts once regardless of how many
/// events it carries. Mass on nodes without out-edges is spread uniformly.
/// The metadata records whether the tolerance was reached.
pub fn pagerank(view: &GraphView, config: &PageRankConfig) -> Result<AlgorithmResult> {
    config.validate()?;
    // iterate in external id order so equal graphs give bit-identical scores
    let vids: Vec<usize> = view.nodes().into_iter().map(|n| n.vid).collect();
    let n = vids.len();
    if n == 0 {
        return Err(GraphError::EmptyView);
    }
    let graph = view.graph();
    let mut index = vec![usize::MAX; graph.count_nodes()];
    for (i, &v) in vids.iter().enumerate() {
        index[v] = i;
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in view.edge_refs() {
        out[index[e.src]].push(index[e.dst]);
    }

    let d = config.damping;
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < config.max_iterations {
        iterations += 1;
        let dangling: f64 = (0..n).filter(|&i| out[i].is_empty()).map(|i| rank[i]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for (i, targets) in out.iter().enumerate() {
            if targets.is_empty() {
                continue;
            }
            let share = d * rank[i] / targets.len() as f64;
            for &j in targets {
                next[j] += share;
            }
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < config.tolerance {
            break;
        }
    }
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|x| *x /= total);

    let rows = vids
        .iter()
        .zip(&rank)
        .map(|(&v, &score)| ResultRow {
            node: graph.node_id(v).clone(),
            values: vec![ResultValue::Float(score)],
        })
        .collect();
    let mut meta = view_metadata(view);
    meta.insert("damping".into(), json!(config.damping));
    meta.insert("tolerance".into(), json!(config.tolerance));
    meta.insert("max_iterations".into(), json!(config.max_iterations));
    meta.insert("iterations".into(), json!(iterations));
    meta.insert("residual".into(), json!(residual));
    meta.insert("converged".into(), json!(residual < config.tolerance));
    Ok(AlgorithmResult::new("pagerank", &["score"], rows).with_metadata(meta))
}
