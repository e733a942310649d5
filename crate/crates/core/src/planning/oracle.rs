//! Brute-force reference computations.
//!
//! These are exact but slow (`O(T |E|)` per query) and exist to check the
//! planners and learners, not to drive them.

use super::{sp_policy, PlanningError};
use crate::graph::{Graph, NodeId};

/// `V(s_{0:T}) = sum_{t=0}^{T} mu_{s_t}`.
pub fn path_value(mu: &[f64], path: &[NodeId]) -> f64 {
    path.iter().map(|&s| mu[s]).sum()
}

/// Best achievable `V(s0, T)` over admissible paths of length `T`, with one
/// maximizing path (successor ties broken towards the lowest index).
pub fn dp_optimal_value(graph: &Graph, mu: &[f64], s0: NodeId, horizon: usize) -> (f64, Vec<NodeId>) {
    let n = graph.num_nodes();
    // table[k][s] = V(s, k)
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(horizon + 1);
    table.push(mu.to_vec());
    for k in 1..=horizon {
        let prev = &table[k - 1];
        let row = (0..n)
            .map(|s| {
                mu[s]
                    + graph
                        .neighbors(s)
                        .iter()
                        .map(|&v| prev[v])
                        .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        table.push(row);
    }
    let mut path = Vec::with_capacity(horizon + 1);
    let mut cur = s0;
    path.push(cur);
    for remaining in (0..horizon).rev() {
        let row = &table[remaining];
        let nbrs = graph.neighbors(cur);
        let mut best = nbrs[0];
        for &v in &nbrs[1..] {
            if row[v] > row[best] {
                best = v;
            }
        }
        cur = best;
        path.push(cur);
    }
    (table[horizon][s0], path)
}

/// `T_G = ceil(D mu* / Delta)` for non-negative means, or `None` when all
/// means are equal. Means with negative entries are shifted to start at 0
/// first; path comparisons are invariant to the shift.
pub fn sufficient_horizon(graph: &Graph, mu: &[f64]) -> Option<usize> {
    let best = mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let second = mu
        .iter()
        .copied()
        .filter(|&m| m < best)
        .fold(f64::NEG_INFINITY, f64::max);
    if !second.is_finite() {
        return None;
    }
    let floor = mu.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let gap = best - second;
    Some((graph.diameter() as f64 * (best - floor) / gap).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptimalityCheck {
    /// The SP rollout attains the DP optimum from every start at `horizon`.
    Holds { horizon: usize },
    /// All means equal: every policy is optimal.
    Vacuous,
    Fails {
        start: NodeId,
        horizon: usize,
        sp_value: f64,
        dp_value: f64,
    },
}

impl OptimalityCheck {
    pub fn is_optimal(&self) -> bool {
        !matches!(self, OptimalityCheck::Fails { .. })
    }
}

/// Compares the SP policy's rollout against exact DP from every start node
/// at horizon `T_G + |S|`. The comparison assumes a unique best node: with a
/// tied maximum the policy heads for the lowest index, which need not be the
/// nearest.
pub fn check_sp_optimality(graph: &Graph, mu: &[f64]) -> OptimalityCheck {
    let Some(t_g) = sufficient_horizon(graph, mu) else {
        return OptimalityCheck::Vacuous;
    };
    let horizon = t_g + graph.num_nodes();
    let policy = sp_policy(graph, mu);
    for start in 0..graph.num_nodes() {
        let sp_value = path_value(mu, &policy.rollout(start, horizon));
        let (dp_value, _) = dp_optimal_value(graph, mu, start, horizon);
        if (sp_value - dp_value).abs() > 1e-9 * dp_value.abs().max(1.0) {
            return OptimalityCheck::Fails {
                start,
                horizon,
                sp_value,
                dp_value,
            };
        }
    }
    OptimalityCheck::Holds { horizon }
}

/// For `0 <= z_k <= Z_{k-1} := max(1, sum_{i<k} z_i)`, checks
/// `sum_k z_k / sqrt(Z_{k-1}) <= (sqrt 2 + 1) sqrt(Z_n)`.
pub fn verify_radius_inequality(z: &[f64]) -> Result<bool, PlanningError> {
    let mut total = 0.0f64;
    let mut lhs = 0.0;
    for (k, &zk) in z.iter().enumerate() {
        let cap = total.max(1.0);
        if !(0.0..=cap).contains(&zk) {
            return Err(PlanningError::Precondition(format!(
                "z[{k}] = {zk} outside [0, {cap}]"
            )));
        }
        lhs += zk / f64::sqrt(cap);
        total += zk;
    }
    let rhs = (2f64.sqrt() + 1.0) * total.max(1.0).sqrt();
    Ok(lhs <= rhs)
}
