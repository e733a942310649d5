use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{argmax_lowest, Policy};
use crate::graph::{Graph, NodeId};

/// Directed cost graph: moving from `s` to a neighbor `s'` costs
/// `a_{ss'} = mu* - mu_{s'}`, so entering the best node is free.
#[derive(Debug, Clone, PartialEq)]
pub struct CostGraph<'g> {
    graph: &'g Graph,
    node_costs: Vec<f64>,
    destination: NodeId,
}

impl<'g> CostGraph<'g> {
    pub fn new(graph: &'g Graph, values: &[f64]) -> Self {
        assert_eq!(values.len(), graph.num_nodes(), "one value per node");
        assert!(values.iter().all(|v| v.is_finite()), "values must be finite");
        let destination = argmax_lowest(values);
        let best = values[destination];
        CostGraph {
            graph,
            node_costs: values.iter().map(|&v| best - v).collect(),
            destination,
        }
    }

    /// `s*`, the lowest-indexed maximizer.
    pub fn destination(&self) -> NodeId {
        self.destination
    }

    /// `c_s = mu* - mu_s`.
    pub fn node_costs(&self) -> &[f64] {
        &self.node_costs
    }

    /// Distance of the directed edge `(from, to)`; `None` if not adjacent.
    pub fn distance(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.graph
            .is_adjacent(from, to)
            .then(|| self.node_costs[to])
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ShortestPathMethod {
    #[default]
    Dijkstra,
    BellmanFord,
}

/// Output of the shortest-path planner.
#[derive(Debug, Clone, PartialEq)]
pub struct SpPlan {
    pub policy: Policy,
    pub destination: NodeId,
    /// `c_s` per node.
    pub node_costs: Vec<f64>,
    /// Total distance from each node to the destination under the policy.
    pub cost_to_go: Vec<f64>,
}

/// Shortest-total-distance policy towards the best node (ties on the
/// destination and on equal-cost successors go to the lowest index).
pub fn sp_policy(graph: &Graph, values: &[f64]) -> Policy {
    shortest_path_plan(graph, values, ShortestPathMethod::Dijkstra).policy
}

pub fn shortest_path_plan(graph: &Graph, values: &[f64], method: ShortestPathMethod) -> SpPlan {
    let costs = CostGraph::new(graph, values);
    let (cost_to_go, next) = match method {
        ShortestPathMethod::Dijkstra => dijkstra(&costs),
        ShortestPathMethod::BellmanFord => bellman_ford(&costs),
    };
    SpPlan {
        policy: Policy::new(next),
        destination: costs.destination,
        node_costs: costs.node_costs,
        cost_to_go,
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    node: NodeId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Reversed so that BinaryHeap pops the smallest (dist, node) first.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Single-target Dijkstra over reversed edges: a node is settled once its
/// cost-to-go is final, and its successor always points at a node settled
/// earlier, so following successors never cycles.
fn dijkstra(costs: &CostGraph<'_>) -> (Vec<f64>, Vec<NodeId>) {
    let graph = costs.graph;
    let n = graph.num_nodes();
    let target = costs.destination;
    let mut dist = vec![f64::INFINITY; n];
    let mut next: Vec<NodeId> = (0..n).collect();
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        node: target,
    });
    while let Some(Entry { dist: d, node: v }) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        settled[v] = true;
        let step = costs.node_costs[v];
        for &u in graph.neighbors(v) {
            if settled[u] {
                continue;
            }
            let cand = step + d;
            if cand < dist[u] || (cand == dist[u] && v < next[u]) {
                let improved = cand < dist[u];
                dist[u] = cand;
                next[u] = v;
                if improved {
                    heap.push(Entry { dist: cand, node: u });
                }
            }
        }
    }
    (dist, next)
}

/// Bellman-Ford on (distance, hops) pairs; hops strictly decrease along
/// successors, which keeps zero-cost plateaus acyclic.
fn bellman_ford(costs: &CostGraph<'_>) -> (Vec<f64>, Vec<NodeId>) {
    let graph = costs.graph;
    let n = graph.num_nodes();
    let target = costs.destination;
    let mut dist = vec![f64::INFINITY; n];
    let mut hops = vec![usize::MAX; n];
    let mut next: Vec<NodeId> = (0..n).collect();
    dist[target] = 0.0;
    hops[target] = 0;
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n {
            if u == target {
                continue;
            }
            for &v in graph.neighbors(u) {
                if v == u || !dist[v].is_finite() {
                    continue;
                }
                let cand = (costs.node_costs[v] + dist[v], hops[v] + 1);
                let cur = (dist[u], hops[u]);
                let better = match cand.0.total_cmp(&cur.0) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => cand.1 < cur.1 || (cand.1 == cur.1 && v < next[u]),
                };
                if better {
                    dist[u] = cand.0;
                    hops[u] = cand.1;
                    next[u] = v;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (dist, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn graph(s: &str) -> Graph {
        s.parse::<GraphFamily>().unwrap().generate().unwrap()
    }

    #[test]
    fn line_policy() {
        let g = graph("line:3");
        let pi = sp_policy(&g, &[0.2, 0.1, 0.9]);
        assert_eq!(pi.as_slice(), &[1, 2, 2]);
    }

    #[test]
    fn circle_prefers_cheaper_side() {
        // clockwise 0->1->2 costs 0.4, counterclockwise 0->3->2 costs 0.5
        let g = graph("circle:4");
        assert_eq!(sp_policy(&g, &[0.0, 0.6, 1.0, 0.5]).next(0), 1);
        // both sides cost 0.5: lowest index wins
        assert_eq!(sp_policy(&g, &[0.0, 0.5, 1.0, 0.5]).next(0), 1);
    }

    #[test]
    fn tied_maxima_route_to_lowest_index() {
        let g = graph("line:4");
        let plan = shortest_path_plan(&g, &[1.0, 0.0, 1.0, 1.0], ShortestPathMethod::Dijkstra);
        assert_eq!(plan.destination, 0);
        assert_eq!(plan.policy.next(0), 0);
        assert_eq!(*plan.policy.rollout(3, 5).last().unwrap(), 0);
    }

    #[test]
    fn cost_graph_edges() {
        let g = graph("line:3");
        let c = CostGraph::new(&g, &[0.2, 0.1, 0.9]);
        assert_eq!(c.destination(), 2);
        assert_eq!(c.distance(1, 2), Some(0.0));
        assert!((c.distance(1, 0).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(c.distance(0, 2), None);
    }

    #[test]
    fn bellman_ford_matches_dijkstra_costs() {
        let g = graph("grid:4x4");
        let values: Vec<f64> = (0..16).map(|i| ((i * 7919) % 13) as f64 / 13.0).collect();
        let a = shortest_path_plan(&g, &values, ShortestPathMethod::Dijkstra);
        let b = shortest_path_plan(&g, &values, ShortestPathMethod::BellmanFord);
        for (x, y) in a.cost_to_go.iter().zip(&b.cost_to_go) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(b.policy.is_admissible(&g));
    }
}
