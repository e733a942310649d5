//! Paired comparisons of G-UCB against its three variants on the grid.

use graph_bandit::experiments::{ablation_suite, AblationKind, ExperimentSpec};

fn main() {
    let spec = ExperimentSpec {
        horizon: 2000,
        ..ExperimentSpec::grid_benchmark()
    };
    for kind in [AblationKind::UcbDefinition, AblationKind::DoublingScheme, AblationKind::Transit] {
        let r = ablation_suite(kind, &spec).expect("ablation runs");
        let c = r.comparison;
        println!(
            "{:<16} {} {:.1} +- {:.1} vs {} {:.1} +- {:.1} (difference {:.1}, {:.2} pooled std)",
            kind.name(),
            r.baseline,
            c.mean_a,
            c.std_a,
            r.variant,
            c.mean_b,
            c.std_b,
            c.advantage(),
            c.margin()
        );
    }
}
