//! Plans on a small grid with known means and checks the shortest-path
//! policy against exhaustive dynamic programming.

use graph_bandit::graph::GraphFamily;
use graph_bandit::planning::{check_sp_optimality, shortest_path_plan, sufficient_horizon, ShortestPathMethod};

fn main() {
    let graph = GraphFamily::Grid { rows: 3, cols: 4 }.generate().expect("valid grid");
    let mu = [1.0, 2.0, 0.5, 3.0, 2.5, 0.0, 4.0, 1.5, 1.0, 6.0, 2.0, 0.5];

    let plan = shortest_path_plan(&graph, &mu, ShortestPathMethod::Dijkstra);
    println!("destination {} (mu = {})", plan.destination, mu[plan.destination]);
    println!("node  mu   cost  to-go  next");
    for s in 0..graph.num_nodes() {
        println!(
            "{s:>4} {:>4} {:>5} {:>6} {:>5}",
            mu[s],
            plan.node_costs[s],
            plan.cost_to_go[s],
            plan.policy.next(s)
        );
    }

    let bf = shortest_path_plan(&graph, &mu, ShortestPathMethod::BellmanFord);
    assert_eq!(bf.cost_to_go, plan.cost_to_go);

    println!("rollout from 0: {:?}", plan.policy.rollout(0, 6));
    println!("sufficient horizon: {:?}", sufficient_horizon(&graph, &mu));
    println!("against DP: {:?}", check_sp_optimality(&graph, &mu));
}
