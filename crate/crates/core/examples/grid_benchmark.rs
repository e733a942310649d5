//! The benchmark line-up on the 10x10 grid, 20 paired simulations.
//! Pass a horizon as the first argument to shorten the run.

use graph_bandit::experiments::{run_experiment, ExperimentSpec};

fn main() {
    let mut spec = ExperimentSpec::grid_benchmark();
    if let Some(h) = std::env::args().nth(1) {
        spec.horizon = h.parse().expect("horizon must be an integer");
    }
    let res = run_experiment(&spec).expect("benchmark runs");
    println!("regret at T = {}", spec.horizon);
    let mut rows: Vec<_> = res.summaries.iter().collect();
    rows.sort_by(|a, b| a.final_mean().total_cmp(&b.final_mean()));
    for s in rows {
        println!("  {:<10} {:>9.1} +- {:.1}", s.algorithm.name(), s.final_mean(), s.final_std());
    }
    println!("audit violations: {}", res.violations().len());
}
