//! Post-hoc invariant checks on a finished run.
//!
//! Counts are rebuilt from the recorded trajectory rather than trusted from
//! the learner, so a bookkeeping bug in the learner shows up here.

use std::fmt;

use super::{Doubling, LearnerRun, Planner, Transit};
use crate::env::RewardModel;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    InadmissibleMove { at: usize, from: NodeId, to: NodeId },
    RewardOutOfRange { at: usize, reward: f64 },
    /// Bookkeeping in the episode log disagrees with the trajectory.
    LogMismatch(String),
    /// Destination doubling: `n_m(dest) != 2 n_{m-1}(dest)`.
    DoublingLaw { dest: NodeId, before: u64, after: u64 },
    /// Any-node doubling: the last node was not doubled within the episode.
    NoDoubling { last: NodeId, before: u64, within: u64 },
    EpisodeLength { steps: u64, bound: u64 },
    ClockBound { t_end: u64, bound: f64 },
    EpisodeCount { episodes: usize, bound: f64 },
    CyclicTransit { node: NodeId },
    StopNotArgmax { dest: NodeId, ucb: f64, max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Episode index, when the violation belongs to one episode.
    pub episode: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.episode {
            Some(m) => write!(f, "episode {m}: {:?}", self.kind),
            None => write!(f, "{:?}", self.kind),
        }
    }
}

/// Checks every runtime invariant that applies to `run`. An empty result
/// means the run is clean.
pub fn audit_run(graph: &Graph, model: &RewardModel, run: &LearnerRun) -> Vec<Violation> {
    let mut out = Vec::new();
    let global = |kind| Violation { episode: None, kind };
    let traj = &run.trajectory;
    for (i, w) in traj.windows(2).enumerate() {
        if !graph.is_adjacent(w[0], w[1]) {
            out.push(global(ViolationKind::InadmissibleMove {
                at: i + 1,
                from: w[0],
                to: w[1],
            }));
        }
    }
    let (lo, hi) = model.range();
    for (i, &r) in run.rewards.iter().enumerate() {
        if !(lo..=hi).contains(&r) {
            out.push(global(ViolationKind::RewardOutOfRange { at: i, reward: r }));
        }
    }
    if let Some(log) = &run.episodes {
        audit_episodes(graph, run, log, &mut out);
    }
    out
}

fn audit_episodes(graph: &Graph, run: &LearnerRun, log: &super::EpisodeLog, out: &mut Vec<Violation>) {
    let n = graph.num_nodes();
    let traj = &run.trajectory;
    let at = |m: usize, kind| Violation { episode: Some(m), kind };

    let mut counts = vec![0u64; n];
    let mut consumed = 0usize;
    let mut expected_start = log.init_samples;
    for rec in &log.records {
        if rec.t_start != expected_start {
            out.push(at(
                rec.m,
                ViolationKind::LogMismatch(format!("t_m = {} but {} samples precede it", rec.t_start, expected_start)),
            ));
            return;
        }
        let start = rec.t_start as usize;
        let end = start + rec.steps as usize;
        if end > traj.len() {
            out.push(at(rec.m, ViolationKind::LogMismatch("episode runs past the trajectory".into())));
            return;
        }
        for &s in &traj[consumed..start] {
            counts[s] += 1;
        }
        consumed = start;
        let mut within = vec![0u64; n];
        for &s in &traj[start..end] {
            within[s] += 1;
        }

        let bound = n as u64 + rec.t_start;
        if rec.projected_steps > bound {
            out.push(at(
                rec.m,
                ViolationKind::EpisodeLength {
                    steps: rec.projected_steps,
                    bound,
                },
            ));
        }

        if rec.completed && end > start {
            let last = traj[end - 1];
            match log.doubling {
                Doubling::Destination => {
                    let (before, after) = (counts[last], counts[last] + within[last]);
                    if last != rec.dest || after != 2 * before {
                        out.push(at(
                            rec.m,
                            ViolationKind::DoublingLaw {
                                dest: last,
                                before,
                                after,
                            },
                        ));
                    }
                }
                Doubling::AnyNode => {
                    if within[last] < counts[last] {
                        out.push(at(
                            rec.m,
                            ViolationKind::NoDoubling {
                                last,
                                before: counts[last],
                                within: within[last],
                            },
                        ));
                    }
                }
            }
        }

        if log.doubling == Doubling::Destination {
            let max = rec.ucb.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if rec.ucb[rec.dest] != max {
                out.push(at(
                    rec.m,
                    ViolationKind::StopNotArgmax {
                        dest: rec.dest,
                        ucb: rec.ucb[rec.dest],
                        max,
                    },
                ));
            }
            let cycle_free = log.planner == Planner::ShortestPath || log.transit == Transit::DirectShortestLength;
            if cycle_free {
                // transit: from the node held when the episode began up to
                // the first arrival at dest
                let mut seen = vec![false; n];
                for &s in &traj[start - 1..end] {
                    if seen[s] {
                        out.push(at(rec.m, ViolationKind::CyclicTransit { node: s }));
                        break;
                    }
                    seen[s] = true;
                    if s == rec.dest {
                        break;
                    }
                }
            }
        }

        expected_start = rec.t_start + rec.steps;
    }

    if expected_start as usize != traj.len() {
        out.push(Violation {
            episode: None,
            kind: ViolationKind::LogMismatch(format!(
                "episodes account for {} samples, trajectory has {}",
                expected_start,
                traj.len()
            )),
        });
    }

    let budget = 3.0 * (log.horizon as f64 + log.init_samples as f64);
    if let Some(last) = log.records.last() {
        let t_end = last.t_start.saturating_add(last.projected_steps);
        if t_end as f64 > budget {
            out.push(Violation {
                episode: None,
                kind: ViolationKind::ClockBound { t_end, bound: budget },
            });
        }
    }
    let m_bound = n as f64 * budget.ln() / 2f64.ln();
    if log.records.len() as f64 > m_bound {
        out.push(Violation {
            episode: None,
            kind: ViolationKind::EpisodeCount {
                episodes: log.records.len(),
                bound: m_bound,
            },
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Environment, RewardModel};
    use crate::graph::GraphFamily;
    use crate::learners::{g_ucb_run, ucrl2_run, RunConfig};

    fn setup() -> (Graph, RewardModel) {
        let g = GraphFamily::Grid { rows: 4, cols: 4 }.generate().unwrap();
        let means: Vec<f64> = (0..16).map(|i| 0.5 + ((i * 7) % 16) as f64 * 0.55).collect();
        (g, RewardModel::uniform_around(&means, 0.5).unwrap())
    }

    #[test]
    fn clean_runs_pass() {
        let (g, model) = setup();
        let mut env = Environment::new(&g, model.clone(), 0, 9).unwrap();
        let run = g_ucb_run(&mut env, &RunConfig::new(3000)).unwrap();
        assert_eq!(audit_run(&g, &model, &run), vec![]);
        let mut env = Environment::new(&g, model.clone(), 0, 9).unwrap();
        let run = ucrl2_run(&mut env, &RunConfig::new(3000)).unwrap();
        assert_eq!(audit_run(&g, &model, &run), vec![]);
    }

    #[test]
    fn tampered_trajectory_is_caught() {
        let (g, model) = setup();
        let mut env = Environment::new(&g, model.clone(), 0, 9).unwrap();
        let mut run = g_ucb_run(&mut env, &RunConfig::new(500)).unwrap();
        let k = run.trajectory.len() / 2;
        run.trajectory[k] = if run.trajectory[k] == 15 { 0 } else { 15 };
        let v = audit_run(&g, &model, &run);
        assert!(v.iter().any(|v| matches!(v.kind, ViolationKind::InadmissibleMove { .. })));
    }

    #[test]
    fn broken_doubling_is_caught() {
        let (g, model) = setup();
        let mut env = Environment::new(&g, model.clone(), 0, 9).unwrap();
        let mut run = g_ucb_run(&mut env, &RunConfig::new(800)).unwrap();
        // drop the last sample of a completed episode with more than one hold step
        let log = run.episodes.as_mut().unwrap();
        let idx = log
            .records
            .iter()
            .position(|r| r.completed && r.n_prev_dest >= 2)
            .unwrap();
        let end = (log.records[idx].t_start + log.records[idx].steps) as usize;
        log.records[idx].steps -= 1;
        for r in &mut log.records[idx + 1..] {
            r.t_start -= 1;
        }
        run.trajectory.remove(end - 1);
        run.rewards.remove(end - 1);
        let v = audit_run(&g, &model, &run);
        assert!(v.iter().any(|v| matches!(v.kind, ViolationKind::DoublingLaw { .. })), "{v:?}");
    }
}
