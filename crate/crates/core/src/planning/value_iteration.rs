use super::{PlanningError, Policy};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct ViSolution {
    pub policy: Policy,
    /// Final iterate `u_i`.
    pub values: Vec<f64>,
    pub iterations: u64,
}

/// Greedy policy from value iteration `u_i(s) = v_s + max_{s' in N_s} u_{i-1}(s')`,
/// stopped once `span(u_i - u_{i-1}) < epsilon`.
pub fn vi_policy(graph: &Graph, values: &[f64], epsilon: f64) -> Result<Policy, PlanningError> {
    vi_solve(graph, values, epsilon).map(|s| s.policy)
}

pub fn vi_solve(graph: &Graph, values: &[f64], epsilon: f64) -> Result<ViSolution, PlanningError> {
    let n = graph.num_nodes();
    if !(epsilon > 0.0) {
        return Err(PlanningError::Precondition(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if values.len() != n {
        return Err(PlanningError::Precondition(format!(
            "expected {n} values, got {}",
            values.len()
        )));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cap_f = 10.0 * n as f64 * (1.0 + (hi - lo) / epsilon);
    let cap = if cap_f >= u64::MAX as f64 { u64::MAX } else { cap_f as u64 };

    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        for s in 0..n {
            let best = graph
                .neighbors(s)
                .iter()
                .map(|&v| prev[v])
                .fold(f64::NEG_INFINITY, f64::max);
            cur[s] = values[s] + best;
        }
        let (mut dmin, mut dmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in 0..n {
            let d = cur[s] - prev[s];
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        std::mem::swap(&mut prev, &mut cur);
        if dmax - dmin < epsilon {
            break;
        }
        if iterations >= cap {
            return Err(PlanningError::NonConvergence { epsilon, cap });
        }
    }
    let next = (0..n)
        .map(|s| {
            let nbrs = graph.neighbors(s);
            let mut best = nbrs[0];
            for &v in &nbrs[1..] {
                if prev[v] > prev[best] {
                    best = v;
                }
            }
            best
        })
        .collect();
    Ok(ViSolution {
        policy: Policy::new(next),
        values: prev,
        iterations,
    })
}
