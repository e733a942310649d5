//! Loads a map from an edge list and a means table, then runs G-UCB and
//! local UCB on it.

use graph_bandit::cli::{read_means_csv, write_means_csv};
use graph_bandit::experiments::{run_experiment, Algorithm, ExperimentSpec, MeanInit};
use graph_bandit::graph::{Graph, GraphFamily};

const EDGES: &str = "\
# two rooms joined by a corridor
nodes 9
0 1
1 2
0 2
2 3
3 4
4 5
5 6
6 7
7 8
6 8
";

fn main() {
    let graph = Graph::load_edge_list(EDGES.as_bytes()).expect("edge list parses");
    let means = read_means_csv(write_means_csv(&[3.0, 4.0, 3.5, 1.0, 1.0, 1.0, 2.0, 8.0, 2.5]).as_bytes())
        .expect("means parse");
    println!("{} nodes, diameter {}", graph.num_nodes(), graph.diameter());

    let spec = ExperimentSpec {
        graph: GraphFamily::Custom {
            nodes: graph.num_nodes(),
            edges: graph.edges().collect(),
        },
        means: MeanInit::Fixed(means),
        algorithms: vec![Algorithm::GUcb, Algorithm::LocalUcb],
        horizon: 3000,
        ..ExperimentSpec::grid_benchmark()
    };
    let res = run_experiment(&spec).expect("experiment runs");
    for s in &res.summaries {
        println!("{:<10} {:.1} +- {:.1}", s.algorithm.name(), s.final_mean(), s.final_std());
    }
}
