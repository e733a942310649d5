//! Tabular Q-learning benchmarks over (node, neighbor) pairs.
//!
//! The task is non-episodic, so both learners use a discount
//! `gamma = 1 - 1/H` with effective horizon `H`.

use rand::Rng;

use super::{LearnerError, LearnerRun, RunConfig};
use crate::env::{learner_rng, Environment};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QlConfig {
    /// Exploration rate for QL-epsilon.
    pub epsilon: f64,
    /// Initial Q value for QL-epsilon; `None` means `r_max * |S|`.
    pub q_init: Option<f64>,
    /// Bonus constant `c` for QL-UCB-H.
    pub ucbh_c: f64,
    /// Effective horizon `H`; `None` means `max(2 D, 2)`.
    pub effective_horizon: Option<usize>,
}

impl Default for QlConfig {
    fn default() -> Self {
        QlConfig {
            epsilon: 0.1,
            q_init: None,
            ucbh_c: 1.0,
            effective_horizon: None,
        }
    }
}

impl QlConfig {
    pub fn horizon_for(&self, graph: &Graph) -> usize {
        self.effective_horizon.unwrap_or(2 * graph.diameter()).max(2)
    }
}

/// Q values and visit counts, one entry per (node, neighbor) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    offsets: Vec<usize>,
    q: Vec<f64>,
    visits: Vec<u64>,
}

impl QTable {
    pub fn new(graph: &Graph, init: f64) -> Self {
        let mut offsets = Vec::with_capacity(graph.num_nodes() + 1);
        offsets.push(0);
        for s in 0..graph.num_nodes() {
            offsets.push(offsets[s] + graph.neighbors(s).len());
        }
        let len = offsets[graph.num_nodes()];
        QTable {
            offsets,
            q: vec![init; len],
            visits: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Q values of node `s`, aligned with `graph.neighbors(s)`.
    pub fn row(&self, s: NodeId) -> &[f64] {
        &self.q[self.offsets[s]..self.offsets[s + 1]]
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    fn greedy(&self, s: NodeId) -> usize {
        let row = self.row(s);
        let mut best = 0;
        for (i, &v) in row.iter().enumerate().skip(1) {
            if v > row[best] {
                best = i;
            }
        }
        best
    }

    fn max(&self, s: NodeId) -> f64 {
        self.row(s).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn finish(env: &Environment<'_>) -> LearnerRun {
    LearnerRun {
        trace: env.trace_after(0),
        trajectory: env.trajectory().to_vec(),
        rewards: env.collected().to_vec(),
        episodes: None,
    }
}

/// QL-epsilon with its final Q table.
pub fn ql_eps_learn(env: &mut Environment<'_>, config: &RunConfig) -> Result<(LearnerRun, QTable), LearnerError> {
    config.validate()?;
    let ql = config.ql;
    if !(0.0..=1.0).contains(&ql.epsilon) {
        return Err(LearnerError::Config(format!("epsilon {} not in [0, 1]", ql.epsilon)));
    }
    let graph = env.graph();
    let r_max = env.rewards().range().1;
    let gamma = 1.0 - 1.0 / ql.horizon_for(graph) as f64;
    let mut table = QTable::new(graph, ql.q_init.unwrap_or(r_max * graph.num_nodes() as f64));
    let mut rng = learner_rng(config.seed);
    for _ in 0..config.horizon {
        let s = env.current();
        let nbrs = graph.neighbors(s);
        let a = if ql.epsilon > 0.0 && rng.random::<f64>() < ql.epsilon {
            rng.random_range(0..nbrs.len())
        } else {
            table.greedy(s)
        };
        let next = nbrs[a];
        let r = env.step(next)?;
        let idx = table.offsets[s] + a;
        table.visits[idx] += 1;
        let alpha = 1.0 / table.visits[idx] as f64;
        let target = r + gamma * table.max(next);
        table.q[idx] += alpha * (target - table.q[idx]);
    }
    Ok((finish(env), table))
}

pub fn ql_eps_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    ql_eps_learn(env, config).map(|(run, _)| run)
}

/// QL-UCB-H (Hoeffding bonus) with its final Q table.
pub fn ql_ucbh_learn(env: &mut Environment<'_>, config: &RunConfig) -> Result<(LearnerRun, QTable), LearnerError> {
    config.validate()?;
    let ql = config.ql;
    let graph = env.graph();
    let r_max = env.rewards().range().1;
    let h = ql.horizon_for(graph) as f64;
    let gamma = 1.0 - 1.0 / h;
    let v_cap = h * r_max;
    let scale = config.bonus.resolve(env.rewards());
    let log_t = (config.horizon.max(2) as f64).ln();
    let mut table = QTable::new(graph, v_cap);
    for _ in 0..config.horizon {
        let s = env.current();
        let a = table.greedy(s);
        let next = graph.neighbors(s)[a];
        let r = env.step(next)?;
        let idx = table.offsets[s] + a;
        table.visits[idx] += 1;
        let k = table.visits[idx] as f64;
        let alpha = (h + 1.0) / (h + k);
        let bonus = ql.ucbh_c * scale * (h * log_t / k).sqrt();
        let v_next = table.max(next).min(v_cap);
        let target = r + gamma * v_next + bonus;
        table.q[idx] = (1.0 - alpha) * table.q[idx] + alpha * target;
    }
    Ok((finish(env), table))
}

pub fn ql_ucbh_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    ql_ucbh_learn(env, config).map(|(run, _)| run)
}
