//! Myopic benchmarks: always move to the best-looking node of the current
//! neighborhood. Unsampled neighbors are tried first, lowest index first.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{LearnerError, LearnerRun, LearnerState, RunConfig, UcbRule, UcbSpec};
use crate::env::{learner_rng, Environment};
use crate::graph::NodeId;

fn pick_max(candidates: &[NodeId], mut score: impl FnMut(NodeId) -> f64) -> NodeId {
    let mut best = candidates[0];
    let mut best_score = score(best);
    for &v in &candidates[1..] {
        let s = score(v);
        if s > best_score {
            best = v;
            best_score = s;
        }
    }
    best
}

fn finish(env: &Environment<'_>) -> LearnerRun {
    LearnerRun {
        trace: env.trace_after(0),
        trajectory: env.trajectory().to_vec(),
        rewards: env.collected().to_vec(),
        episodes: None,
    }
}

/// Local UCB: next node is the neighborhood arg-max of the G-UCB index.
pub fn local_ucb_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    config.validate()?;
    let graph = env.graph();
    let rule = UcbRule::new(UcbSpec::GUcb, graph, config.bonus.resolve(env.rewards()));
    let mut state = LearnerState::from_history(graph.num_nodes(), env.trajectory(), env.collected());
    for _ in 0..config.horizon {
        let next = pick_max(graph.neighbors(env.current()), |v| match state.count(v) {
            0 => f64::INFINITY,
            n => state.sum(v) / n as f64 + rule.bonus(n, state.t()),
        });
        let r = env.step(next)?;
        state.observe(next, r);
    }
    Ok(finish(env))
}

/// Gaussian posterior over one node's mean with known noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPosterior {
    pub prior_mean: f64,
    pub prior_var: f64,
    pub noise_var: f64,
}

impl GaussianPosterior {
    /// Posterior (mean, variance) after `n` observations summing to `sum`.
    pub fn update(&self, n: u64, sum: f64) -> (f64, f64) {
        let precision = 1.0 / self.prior_var + n as f64 / self.noise_var;
        let mean = (self.prior_mean / self.prior_var + sum / self.noise_var) / precision;
        (mean, 1.0 / precision)
    }
}

/// Local Thompson sampling: one posterior draw per neighbor, move to the
/// largest. Prior and noise scales come from the declared reward range.
pub fn local_ts_run(env: &mut Environment<'_>, config: &RunConfig) -> Result<LearnerRun, LearnerError> {
    config.validate()?;
    let graph = env.graph();
    let (lo, hi) = env.rewards().range();
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    let posterior = GaussianPosterior {
        prior_mean: (lo + hi) / 2.0,
        prior_var: width.powi(2),
        noise_var: (width / 2.0).powi(2),
    };
    let mut rng = learner_rng(config.seed);
    let mut state = LearnerState::from_history(graph.num_nodes(), env.trajectory(), env.collected());
    for _ in 0..config.horizon {
        let next = pick_max(graph.neighbors(env.current()), |v| {
            let (m, var) = posterior.update(state.count(v), state.sum(v));
            sample_normal(&mut rng, m, var.sqrt())
        });
        let r = env.step(next)?;
        state.observe(next, r);
    }
    Ok(finish(env))
}

fn sample_normal<R: Rng>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    match Normal::new(mean, sd) {
        Ok(d) => d.sample(rng),
        Err(_) => mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RewardModel;
    use crate::graph::GraphFamily;

    #[test]
    fn local_ucb_on_complete_graph_is_ucb1() {
        let g = GraphFamily::FullyConnected { nodes: 4 }.generate().unwrap();
        let model = RewardModel::uniform_around(&[1.0, 3.0, 2.0, 1.5], 0.5).unwrap();
        let mut env = Environment::new(&g, model.clone(), 0, 3).unwrap();
        let cfg = RunConfig::new(300);
        let run = local_ucb_run(&mut env, &cfg).unwrap();
        // replay UCB1 over all arms
        let scale = cfg.bonus.resolve(&model);
        let mut n = [0u64; 4];
        let mut sum = [0f64; 4];
        n[0] = 1;
        sum[0] = run.rewards[0];
        for k in 1..run.trajectory.len() {
            let t = n.iter().sum::<u64>() as f64;
            let idx: Vec<f64> = (0..4)
                .map(|a| {
                    if n[a] == 0 {
                        f64::INFINITY
                    } else {
                        sum[a] / n[a] as f64 + scale * (2.0 * t.ln() / n[a] as f64).sqrt()
                    }
                })
                .collect();
            let mut best = 0;
            for a in 1..4 {
                if idx[a] > idx[best] {
                    best = a;
                }
            }
            assert_eq!(run.trajectory[k], best);
            n[best] += 1;
            sum[best] += run.rewards[k];
        }
    }

    #[test]
    fn posterior_update_matches_conjugate_formula() {
        let p = GaussianPosterior {
            prior_mean: 5.0,
            prior_var: 100.0,
            noise_var: 25.0,
        };
        let (m, v) = p.update(4, 8.0);
        let v_ref = 1.0 / (1.0 / 100.0 + 4.0 / 25.0);
        assert!((v - v_ref).abs() < 1e-12);
        assert!((m - v_ref * (5.0 / 100.0 + 8.0 / 25.0)).abs() < 1e-12);
        assert_eq!(p.update(0, 0.0), (5.0, 100.0));
    }

    #[test]
    fn ts_constant_rewards_settles_on_local_max() {
        let g = GraphFamily::Line { nodes: 3 }.generate().unwrap();
        let model = RewardModel::with_range(
            vec![
                crate::env::NodeReward::Constant(2.0),
                crate::env::NodeReward::Constant(6.0),
                crate::env::NodeReward::Constant(4.0),
            ],
            0.0,
            10.0,
        )
        .unwrap();
        let mut env = Environment::new(&g, model, 0, 0).unwrap();
        let run = local_ts_run(&mut env, &RunConfig::new(4000)).unwrap();
        let tail = &run.trajectory[3000..];
        let at_best = tail.iter().filter(|&&s| s == 1).count();
        assert!(at_best as f64 > 0.95 * tail.len() as f64);
    }
}
