//! One G-UCB run on a 10x10 grid with the episode log and an audit.

use graph_bandit::env::{sample_means, Environment, RewardModel};
use graph_bandit::graph::GraphFamily;
use graph_bandit::learners::{audit_run, g_ucb_run, RunConfig};

fn main() {
    let seed = 7;
    let graph = GraphFamily::Grid { rows: 10, cols: 10 }.generate().expect("valid grid");
    let mu = sample_means(seed, graph.num_nodes(), 0.5, 9.5);
    let model = RewardModel::uniform_around(&mu, 0.5).expect("valid rewards");
    let mut env = Environment::new(&graph, model.clone(), 0, seed).expect("valid start");

    let config = RunConfig {
        seed,
        ..RunConfig::new(5000)
    };
    let run = g_ucb_run(&mut env, &config).expect("run succeeds");

    let log = run.episodes.as_ref().expect("episodic learner");
    println!("initialization samples: {}", log.init_samples);
    println!("episodes: {}", log.records.len());
    for r in log.records.iter().take(8) {
        println!(
            "  m={:<3} t_m={:<5} H_m={:<4} dest={:<3} n={} -> {}",
            r.m, r.t_start, r.steps, r.dest, r.n_prev_dest, r.n_dest
        );
    }
    let curve = run.trace.regret_curve();
    for t in [100, 1000, 2500, 5000] {
        println!("regret at t = {t}: {:.1}", curve[t - 1]);
    }
    let violations = audit_run(&graph, &model, &run);
    println!("audit violations: {}", violations.len());
}
