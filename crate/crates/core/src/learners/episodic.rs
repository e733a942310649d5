//! Episodic optimistic learners: G-UCB and the UCRL2 graph adaptation.
//!
//! Each episode freezes the UCB values, plans once, and then runs a fixed
//! deterministic rule until a doubling condition fires:
//!
//! * destination doubling: walk until a node with maximal UCB is reached,
//!   then stay there until its lifetime sample count has doubled;
//! * any-node doubling: follow the policy until some node has been sampled
//!   within the episode as often as before it.

use super::{
    Doubling, LearnerError, LearnerRun, LearnerState, Planner, RunConfig, Transit, UcbRule,
    UcbSpec,
};
use crate::env::Environment;
use crate::graph::{Graph, HopTable, NodeId};
use crate::planning::{argmax_lowest, sp_policy, vi_policy, Policy};

/// One episode of an episodic run.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    /// Episode index `m`, starting at 1 (episode 0 is the initialization walk).
    pub m: usize,
    /// `t_m`: samples collected before the episode.
    pub t_start: u64,
    /// `H_m`: samples collected during the episode.
    pub steps: u64,
    /// Length the episode would have had without the horizon cut-off.
    /// Equal to `steps` for completed episodes; `u64::MAX` if it would never end.
    pub projected_steps: u64,
    /// Terminal node (projected when the episode was cut).
    pub dest: NodeId,
    /// `n_{m-1}(dest)`.
    pub n_prev_dest: u64,
    /// Samples of `dest` when the episode stopped.
    pub n_dest: u64,
    pub completed: bool,
    /// `U_{m-1}`, the frozen UCB values used for planning.
    pub ucb: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    pub records: Vec<EpisodeRecord>,
    /// `t_1`: samples collected by the initialization walk, start included.
    pub init_samples: u64,
    /// Steps after initialization.
    pub horizon: usize,
    pub planner: Planner,
    pub transit: Transit,
    pub doubling: Doubling,
}

impl EpisodeLog {
    pub const CSV_HEADER: &'static str = "m,t_m,h_m,dest_m,n_m_dest,completed";

    /// One CSV row per episode, without header.
    pub fn csv_rows(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.m, r.t_start, r.steps, r.dest, r.n_dest, r.completed
                )
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in self.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

/// Visits every node at least once by repeatedly walking a minimum-hop path
/// to the lowest-indexed unvisited node. Returns the full trajectory so far.
pub fn initialization_walk(env: &mut Environment<'_>, hops: &HopTable) -> Result<Vec<NodeId>, LearnerError> {
    let graph = env.graph();
    let mut visited = vec![false; graph.num_nodes()];
    for &s in env.trajectory() {
        visited[s] = true;
    }
    while let Some(target) = visited.iter().position(|v| !v) {
        while env.current() != target {
            let next = hops.next_hop(graph, env.current(), target);
            env.step(next)?;
            visited[next] = true;
        }
    }
    Ok(env.trajectory().to_vec())
}

/// G-UCB with the configured UCB rule, planner, transit and doubling scheme.
pub fn g_ucb_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    run_episodic(env, config, config.ucb, config.planner, config.transit, config.doubling)
}

/// UCRL2 adapted to known deterministic transitions: UCRL2 confidence radius,
/// value-iteration planning with threshold `1/sqrt(t_m)`, any-node doubling.
pub fn ucrl2_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    run_episodic(
        env,
        config,
        UcbSpec::Ucrl2 { delta: config.delta },
        Planner::ValueIteration,
        Transit::FollowPolicy,
        Doubling::AnyNode,
    )
}

fn plan(graph: &Graph, planner: Planner, ucb: &[f64], t_m: u64) -> Result<Policy, LearnerError> {
    Ok(match planner {
        Planner::ShortestPath => sp_policy(graph, ucb),
        Planner::ValueIteration => vi_policy(graph, ucb, 1.0 / (t_m as f64).sqrt())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Transit,
    Hold(NodeId),
}

/// Deterministic within-episode control: given the current node, decides
/// the next node or that the episode is over.
#[derive(Debug, Clone)]
struct EpisodeDriver<'a> {
    graph: &'a Graph,
    hops: &'a HopTable,
    policy: Policy,
    ucb: &'a [f64],
    max_ucb: f64,
    target: NodeId,
    transit: Transit,
    doubling: Doubling,
    n_prev: &'a [u64],
    c: Vec<u64>,
    phase: Phase,
    steps: u64,
    last: Option<NodeId>,
}

impl<'a> EpisodeDriver<'a> {
    fn move_from(&self, cur: NodeId) -> NodeId {
        match self.transit {
            Transit::FollowPolicy => self.policy.next(cur),
            Transit::DirectShortestLength => self.hops.next_hop(self.graph, cur, self.target),
        }
    }

    fn next(&mut self, cur: NodeId) -> Option<NodeId> {
        match self.doubling {
            Doubling::Destination => loop {
                match self.phase {
                    Phase::Transit if self.ucb[cur] < self.max_ucb => return Some(self.move_from(cur)),
                    Phase::Transit => self.phase = Phase::Hold(cur),
                    Phase::Hold(dest) => {
                        return (self.c[dest] < self.n_prev[dest]).then_some(dest);
                    }
                }
            },
            Doubling::AnyNode => match self.last {
                Some(s) if self.c[s] >= self.n_prev[s] => None,
                _ => Some(self.move_from(cur)),
            },
        }
    }

    fn record(&mut self, node: NodeId) {
        self.c[node] += 1;
        self.steps += 1;
        self.last = Some(node);
    }

    /// Terminal node once the episode is over.
    fn dest(&self) -> Option<NodeId> {
        match (self.doubling, self.phase) {
            (Doubling::Destination, Phase::Hold(d)) => Some(d),
            (Doubling::Destination, Phase::Transit) => None,
            (Doubling::AnyNode, _) => self.last,
        }
    }

    /// Continues the episode without sampling rewards; returns (total
    /// steps, terminal node), or `None` if it does not end within `cap`.
    fn project(mut self, mut cur: NodeId, cap: u64) -> Option<(u64, NodeId)> {
        while let Some(next) = self.next(cur) {
            if self.steps >= cap {
                return None;
            }
            self.record(next);
            cur = next;
        }
        Some((self.steps, self.dest().unwrap_or(cur)))
    }
}

fn run_episodic(
    env: &mut Environment<'_>,
    config: &RunConfig,
    spec: UcbSpec,
    planner: Planner,
    transit: Transit,
    doubling: Doubling,
) -> Result<LearnerRun, LearnerError> {
    config.validate()?;
    let graph = env.graph();
    let n = graph.num_nodes();
    let hops = HopTable::new(graph);

    initialization_walk(env, &hops)?;
    let init_moves = env.step_count();
    let mut state = LearnerState::from_history(n, env.trajectory(), env.collected());
    let init_samples = state.t();
    let budget_end = init_moves + config.horizon;
    let rule = UcbRule::new(spec, graph, config.bonus.resolve(env.rewards()));
    let projection_cap = 4 * (init_samples + config.horizon as u64) + n as u64;

    let mut records = Vec::new();
    while env.step_count() < budget_end {
        state.begin_episode();
        let t_m = state.t();
        let ucb = rule.values(&state)?;
        let policy = plan(graph, planner, &ucb, t_m)?;
        let n_prev = state.counts().to_vec();
        let mut driver = EpisodeDriver {
            graph,
            hops: &hops,
            policy,
            ucb: &ucb,
            max_ucb: ucb.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            target: argmax_lowest(&ucb),
            transit,
            doubling,
            n_prev: &n_prev,
            c: vec![0; n],
            phase: Phase::Transit,
            steps: 0,
            last: None,
        };
        let mut completed = true;
        while let Some(next) = driver.next(env.current()) {
            if env.step_count() >= budget_end {
                completed = false;
                break;
            }
            let reward = env.step(next)?;
            state.observe(next, reward);
            driver.record(next);
        }
        let steps = driver.steps;
        let (projected_steps, dest) = if completed {
            (steps, driver.dest().unwrap_or(env.current()))
        } else {
            driver
                .clone()
                .project(env.current(), projection_cap)
                .unwrap_or((u64::MAX, driver.dest().unwrap_or(env.current())))
        };
        records.push(EpisodeRecord {
            m: state.episode(),
            t_start: t_m,
            steps,
            projected_steps,
            dest,
            n_prev_dest: n_prev[dest],
            n_dest: state.count(dest),
            completed,
            ucb,
        });
    }

    let trace_from = if config.include_init { 0 } else { init_moves };
    Ok(LearnerRun {
        trace: env.trace_after(trace_from),
        trajectory: env.trajectory().to_vec(),
        rewards: env.collected().to_vec(),
        episodes: Some(EpisodeLog {
            records,
            init_samples,
            horizon: config.horizon,
            planner,
            transit,
            doubling,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RewardModel;
    use crate::graph::GraphFamily;

    fn graph(s: &str) -> Graph {
        s.parse::<GraphFamily>().unwrap().generate().unwrap()
    }

    #[test]
    fn init_walk_line() {
        let g = graph("line:5");
        let hops = HopTable::new(&g);
        let mut env = Environment::new(&g, RewardModel::constant(&[0.0; 5]).unwrap(), 0, 0).unwrap();
        assert_eq!(initialization_walk(&mut env, &hops).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn init_walk_star_revisits_center() {
        let g = graph("star:4");
        let hops = HopTable::new(&g);
        let mut env = Environment::new(&g, RewardModel::constant(&[0.0; 4]).unwrap(), 0, 0).unwrap();
        assert_eq!(initialization_walk(&mut env, &hops).unwrap(), vec![0, 1, 0, 2, 0, 3]);
    }

    #[test]
    fn init_walk_single_node() {
        let g = graph("line:1");
        let hops = HopTable::new(&g);
        let mut env = Environment::new(&g, RewardModel::constant(&[0.3]).unwrap(), 0, 0).unwrap();
        assert_eq!(initialization_walk(&mut env, &hops).unwrap(), vec![0]);
    }

    #[test]
    fn horizon_is_respected() {
        let g = graph("grid:3x3");
        let model = RewardModel::uniform_around(&[1., 2., 3., 4., 5., 6., 7., 8., 9.], 0.5).unwrap();
        for doubling in [Doubling::Destination, Doubling::AnyNode] {
            let mut env = Environment::new(&g, model.clone(), 0, 1).unwrap();
            let mut cfg = RunConfig::new(137);
            cfg.doubling = doubling;
            let run = g_ucb_run(&mut env, &cfg).unwrap();
            assert_eq!(run.trace.len(), 137);
            let log = run.episodes.unwrap();
            assert_eq!(
                log.records.iter().map(|r| r.steps).sum::<u64>() + log.init_samples,
                run.trajectory.len() as u64
            );
        }
    }

    #[test]
    fn single_node_graph_runs() {
        let g = graph("line:1");
        let mut env = Environment::new(&g, RewardModel::constant(&[0.3]).unwrap(), 0, 0).unwrap();
        let run = g_ucb_run(&mut env, &RunConfig::new(10)).unwrap();
        assert!(run.trace.regret_curve().iter().all(|r| r.abs() < 1e-12));
    }
}
