//! Regret at T = 1000 as the graph size, diameter and gap vary.

use graph_bandit::experiments::{sensitivity_suite, Algorithm, ExperimentSpec, SensitivityKind};

fn main() {
    let base = ExperimentSpec {
        algorithms: vec![Algorithm::GUcb, Algorithm::LocalUcb],
        horizon: 1000,
        num_sims: 10,
        ..ExperimentSpec::grid_benchmark()
    };
    let sweeps: [(SensitivityKind, &[f64]); 3] = [
        (SensitivityKind::NumNodes, &[5.0, 10.0, 20.0, 50.0, 100.0]),
        (SensitivityKind::Diameter, &[2.0, 5.0, 10.0, 25.0, 49.0]),
        (SensitivityKind::Gap, &[4.0, 2.0, 1.0, 0.5]),
    ];
    for (kind, grid) in sweeps {
        let table = sensitivity_suite(kind, grid, &base).expect("sweep runs");
        print!("{}", table.to_csv());
    }
}
