//! Offline planners for known (or surrogate) node values.
//!
//! * [`sp_policy`]: undiscounted infinite-horizon planning reduced to a
//!   shortest-path problem towards the best node.
//! * [`vi_policy`]: plain value iteration with a span stopping rule.
//! * [`oracle`]: exact finite-horizon dynamic programming, used to check the
//!   two planners above.

pub mod oracle;
mod shortest_path;
mod value_iteration;

use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub use oracle::{
    check_sp_optimality, dp_optimal_value, path_value, sufficient_horizon, verify_radius_inequality,
    OptimalityCheck,
};
pub use shortest_path::{shortest_path_plan, sp_policy, CostGraph, ShortestPathMethod, SpPlan};
pub use value_iteration::{vi_policy, vi_solve, ViSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanningError {
    #[error("value iteration did not reach span < {epsilon} within {cap} iterations")]
    NonConvergence { epsilon: f64, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Stationary deterministic policy `s -> next[s]`, with `next[s]` in `N_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    next: Vec<NodeId>,
}

impl Policy {
    pub fn new(next: Vec<NodeId>) -> Self {
        Policy { next }
    }

    pub fn next(&self, s: NodeId) -> NodeId {
        self.next[s]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.next
    }

    pub fn is_admissible(&self, graph: &Graph) -> bool {
        self.next.len() == graph.num_nodes()
            && self.next.iter().enumerate().all(|(s, &v)| graph.is_adjacent(s, v))
    }

    /// `[start, pi(start), ...]` with `steps` moves.
    pub fn rollout(&self, start: NodeId, steps: usize) -> Vec<NodeId> {
        let mut path = Vec::with_capacity(steps + 1);
        let mut cur = start;
        path.push(cur);
        for _ in 0..steps {
            cur = self.next[cur];
            path.push(cur);
        }
        path
    }
}

/// Lowest index among the maximal entries of `values`.
pub fn argmax_lowest(values: &[f64]) -> NodeId {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
