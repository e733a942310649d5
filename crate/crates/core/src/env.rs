//! Stochastic node rewards, the walking agent, and regret accounting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("illegal move {from} -> {to}: not a neighbor")]
    IllegalMove { from: NodeId, to: NodeId },
    #[error("step {t} is beyond the trace length {len}")]
    OutOfRange { t: usize, len: usize },
    #[error("invalid reward model: {0}")]
    InvalidModel(String),
}

/// Reward distribution of a single node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeReward {
    Uniform { lo: f64, hi: f64 },
    Bernoulli { p: f64 },
    Constant(f64),
}

impl NodeReward {
    pub fn mean(&self) -> f64 {
        match *self {
            NodeReward::Uniform { lo, hi } => 0.5 * (lo + hi),
            NodeReward::Bernoulli { p } => p,
            NodeReward::Constant(c) => c,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            NodeReward::Uniform { lo, hi } => (lo, hi),
            NodeReward::Bernoulli { .. } => (0.0, 1.0),
            NodeReward::Constant(c) => (c, c),
        }
    }

    fn validate(&self) -> Result<(), EnvError> {
        match *self {
            NodeReward::Uniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo <= hi) => Err(
                EnvError::InvalidModel(format!("uniform support [{lo}, {hi}] is empty")),
            ),
            NodeReward::Bernoulli { p } if !(0.0..=1.0).contains(&p) => Err(
                EnvError::InvalidModel(format!("bernoulli p = {p} outside [0, 1]")),
            ),
            NodeReward::Constant(c) if !c.is_finite() => {
                Err(EnvError::InvalidModel("constant reward must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NodeReward::Uniform { lo, hi } if hi > lo => rng.random_range(lo..=hi),
            NodeReward::Uniform { lo, .. } => lo,
            NodeReward::Bernoulli { p } => {
                if rng.random_bool(p) {
                    1.0
                } else {
                    0.0
                }
            }
            NodeReward::Constant(c) => c,
        }
    }
}

/// Per-node reward distributions plus a declared range `[r_min, r_max]`
/// covering every node's support.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardModel {
    nodes: Vec<NodeReward>,
    r_min: f64,
    r_max: f64,
}

impl RewardModel {
    /// Uses the hull of the node supports as the declared range.
    pub fn new(nodes: Vec<NodeReward>) -> Result<Self, EnvError> {
        if nodes.is_empty() {
            return Err(EnvError::InvalidModel("no nodes".into()));
        }
        for n in &nodes {
            n.validate()?;
        }
        let r_min = nodes.iter().map(|n| n.support().0).fold(f64::INFINITY, f64::min);
        let r_max = nodes.iter().map(|n| n.support().1).fold(f64::NEG_INFINITY, f64::max);
        Ok(RewardModel { nodes, r_min, r_max })
    }

    /// Declares a wider range than the supports' hull.
    pub fn with_range(nodes: Vec<NodeReward>, r_min: f64, r_max: f64) -> Result<Self, EnvError> {
        let model = RewardModel::new(nodes)?;
        if r_min > model.r_min || r_max < model.r_max {
            return Err(EnvError::InvalidModel(format!(
                "declared range [{r_min}, {r_max}] does not cover supports [{}, {}]",
                model.r_min, model.r_max
            )));
        }
        Ok(RewardModel { r_min, r_max, ..model })
    }

    /// `P(s) = U(mu_s - half_width, mu_s + half_width)` for each mean.
    pub fn uniform_around(means: &[f64], half_width: f64) -> Result<Self, EnvError> {
        if half_width < 0.0 {
            return Err(EnvError::InvalidModel("negative noise half-width".into()));
        }
        RewardModel::new(
            means
                .iter()
                .map(|&mu| NodeReward::Uniform {
                    lo: mu - half_width,
                    hi: mu + half_width,
                })
                .collect(),
        )
    }

    pub fn constant(values: &[f64]) -> Result<Self, EnvError> {
        RewardModel::new(values.iter().map(|&c| NodeReward::Constant(c)).collect())
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, s: NodeId) -> &NodeReward {
        &self.nodes[s]
    }

    pub fn means(&self) -> Vec<f64> {
        self.nodes.iter().map(NodeReward::mean).collect()
    }

    pub fn mu_star(&self) -> f64 {
        self.nodes.iter().map(NodeReward::mean).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.r_min, self.r_max)
    }

    pub fn width(&self) -> f64 {
        self.r_max - self.r_min
    }

    /// Widest single-node support.
    pub fn max_support_width(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| {
                let (lo, hi) = n.support();
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

/// Draws `count` means i.i.d. from the open interval `(lo, hi)`.
pub fn sample_means(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo < hi, "sample_means requires lo < hi");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(MEANS_STREAM);
    (0..count)
        .map(|_| loop {
            let x = rng.random_range(lo..hi);
            if x > lo {
                break x;
            }
        })
        .collect()
}

const MEANS_STREAM: u64 = 0;
const LEARNER_STREAM: u64 = u64::MAX;

/// RNG for a learner's own randomization (posterior draws, coin flips),
/// disjoint from the reward and mean streams of the same seed.
pub fn learner_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(LEARNER_STREAM);
    rng
}

/// A single agent walking a graph and collecting rewards.
///
/// Each node draws from its own ChaCha stream derived from the seed, so the
/// k-th visit to a node yields the same reward under any learner; runs with
/// the same seed are paired sample-by-sample.
///
/// Placing the agent at `start` collects one reward there (time 0).
#[derive(Debug, Clone)]
pub struct Environment<'g> {
    graph: &'g Graph,
    rewards: RewardModel,
    streams: Vec<ChaCha8Rng>,
    trajectory: Vec<NodeId>,
    collected: Vec<f64>,
}

impl<'g> Environment<'g> {
    pub fn new(graph: &'g Graph, rewards: RewardModel, start: NodeId, seed: u64) -> Result<Self, EnvError> {
        if rewards.num_nodes() != graph.num_nodes() {
            return Err(EnvError::InvalidModel(format!(
                "reward model has {} nodes, graph has {}",
                rewards.num_nodes(),
                graph.num_nodes()
            )));
        }
        if start >= graph.num_nodes() {
            return Err(EnvError::InvalidModel(format!("start node {start} out of range")));
        }
        let streams = (0..graph.num_nodes())
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(1 + s as u64);
                rng
            })
            .collect();
        let mut env = Environment {
            graph,
            rewards,
            streams,
            trajectory: Vec::new(),
            collected: Vec::new(),
        };
        env.visit(start);
        Ok(env)
    }

    fn visit(&mut self, s: NodeId) -> f64 {
        let r = self.rewards.node(s).sample(&mut self.streams[s]);
        self.trajectory.push(s);
        self.collected.push(r);
        r
    }

    /// Moves to `next` and returns the reward drawn there.
    pub fn step(&mut self, next: NodeId) -> Result<f64, EnvError> {
        let from = self.current();
        if next >= self.graph.num_nodes() || !self.graph.is_adjacent(from, next) {
            return Err(EnvError::IllegalMove { from, to: next });
        }
        Ok(self.visit(next))
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn rewards(&self) -> &RewardModel {
        &self.rewards
    }

    pub fn current(&self) -> NodeId {
        *self.trajectory.last().expect("agent is always placed")
    }

    /// Moves taken so far (the initial placement is not a step).
    pub fn step_count(&self) -> usize {
        self.trajectory.len() - 1
    }

    /// Visited nodes, starting with the initial placement.
    pub fn trajectory(&self) -> &[NodeId] {
        &self.trajectory
    }

    /// Rewards aligned with [`Environment::trajectory`].
    pub fn collected(&self) -> &[f64] {
        &self.collected
    }

    /// Regret trace over the steps after `after_step` moves.
    pub fn trace_after(&self, after_step: usize) -> RegretTrace {
        RegretTrace::new(self.rewards.mu_star(), self.collected[after_step + 1..].to_vec())
    }
}

/// Realized rewards of a run and the regret `t * mu_star - sum_{tau <= t} r_tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    mu_star: f64,
    rewards: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RegretTrace {
    pub fn new(mu_star: f64, rewards: Vec<f64>) -> Self {
        let mut cumulative = Vec::with_capacity(rewards.len() + 1);
        let mut sum = 0.0;
        cumulative.push(0.0);
        for &r in &rewards {
            sum += r;
            cumulative.push(sum);
        }
        RegretTrace {
            mu_star,
            rewards,
            cumulative,
        }
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn regret_of(&self, t: usize) -> Result<f64, EnvError> {
        if t > self.len() {
            return Err(EnvError::OutOfRange { t, len: self.len() });
        }
        Ok(t as f64 * self.mu_star - self.cumulative[t])
    }

    /// `[regret(1), ..., regret(T)]`.
    pub fn regret_curve(&self) -> Vec<f64> {
        (1..=self.len())
            .map(|t| t as f64 * self.mu_star - self.cumulative[t])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn line(n: usize) -> Graph {
        GraphFamily::Line { nodes: n }.generate().unwrap()
    }

    #[test]
    fn constant_node_is_deterministic() {
        let g = line(2);
        let mut env = Environment::new(&g, RewardModel::constant(&[0.7, 0.7]).unwrap(), 0, 3).unwrap();
        for _ in 0..5 {
            assert_eq!(env.step(1).unwrap(), 0.7);
        }
        assert_eq!(env.step_count(), 5);
    }

    #[test]
    fn uniform_sample_mean() {
        let g = line(1);
        let model = RewardModel::new(vec![NodeReward::Uniform { lo: 0.4, hi: 0.6 }]).unwrap();
        let mut env = Environment::new(&g, model, 0, 11).unwrap();
        let mut sum = 0.0;
        for _ in 0..100_000 {
            let r = env.step(0).unwrap();
            assert!((0.4..=0.6).contains(&r));
            sum += r;
        }
        assert!((sum / 1e5 - 0.5).abs() < 0.005);
    }

    #[test]
    fn illegal_move_rejected() {
        let g = line(3);
        let mut env = Environment::new(&g, RewardModel::constant(&[0.0; 3]).unwrap(), 0, 0).unwrap();
        assert_eq!(env.step(2), Err(EnvError::IllegalMove { from: 0, to: 2 }));
        assert_eq!(env.step(9), Err(EnvError::IllegalMove { from: 0, to: 9 }));
        assert_eq!(env.step_count(), 0);
    }

    #[test]
    fn means_are_seeded_and_in_range() {
        let a = sample_means(42, 100, 0.5, 9.5);
        assert_eq!(a, sample_means(42, 100, 0.5, 9.5));
        assert_ne!(a, sample_means(43, 100, 0.5, 9.5));
        assert!(a.iter().all(|&m| m > 0.5 && m < 9.5));
        let mean = a.iter().sum::<f64>() / 100.0;
        assert!((mean - 5.0).abs() < 0.5, "mean {mean}");
    }

    #[test]
    fn regret_arithmetic() {
        let trace = RegretTrace::new(1.0, vec![0.0; 10]);
        assert_eq!(trace.regret_of(0).unwrap(), 0.0);
        assert_eq!(trace.regret_of(10).unwrap(), 10.0);
        assert_eq!(trace.regret_of(11), Err(EnvError::OutOfRange { t: 11, len: 10 }));

        let flat = RegretTrace::new(0.4, vec![0.4; 7]);
        assert!(flat.regret_curve().iter().all(|&r| r.abs() < 1e-12));
    }

    #[test]
    fn declared_range_must_cover_supports() {
        let nodes = vec![NodeReward::Uniform { lo: 1.0, hi: 2.0 }];
        assert!(RewardModel::with_range(nodes.clone(), 0.0, 10.0).is_ok());
        assert!(RewardModel::with_range(nodes, 1.5, 10.0).is_err());
        assert!(RewardModel::new(vec![NodeReward::Bernoulli { p: 1.5 }]).is_err());
    }

    #[test]
    fn paired_streams_are_per_node() {
        let g = line(3);
        let model = RewardModel::uniform_around(&[1.0, 2.0, 3.0], 0.5).unwrap();
        let mut a = Environment::new(&g, model.clone(), 0, 5).unwrap();
        let mut b = Environment::new(&g, model, 0, 5).unwrap();
        // a visits node 1 immediately; b detours through node 0 first.
        let ra = a.step(1).unwrap();
        b.step(0).unwrap();
        let rb = b.step(1).unwrap();
        assert_eq!(ra, rb);
    }
}
