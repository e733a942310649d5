//! Undirected, connected graphs with implied self-loops.
//!
//! Every neighborhood `N_s` stores `s` itself, so "stay" is an ordinary move.
//! Nodes are dense `0..n` indices; grid nodes are numbered row-major.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

/// Dense node index in `0..num_nodes`.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid graph parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node {node} out of range for a graph with {num_nodes} nodes (line {line})")]
    NodeOutOfRange {
        line: usize,
        node: usize,
        num_nodes: usize,
    },
    #[error("graph is disconnected: node {node} is unreachable from node 0")]
    Disconnected { node: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from undirected edges. Self-loops are added for every
    /// node; duplicate and self edges in the input are ignored.
    pub fn from_edges(num_nodes: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        if num_nodes == 0 {
            return Err(GraphError::InvalidParameter(
                "graph must have at least one node".into(),
            ));
        }
        let mut sets: Vec<BTreeSet<NodeId>> = (0..num_nodes).map(|s| BTreeSet::from([s])).collect();
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= num_nodes {
                    return Err(GraphError::NodeOutOfRange {
                        line: 0,
                        node,
                        num_nodes,
                    });
                }
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        let graph = Graph {
            adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        match self.bfs(0).iter().position(Option::is_none) {
            Some(node) => Err(GraphError::Disconnected { node }),
            None => Ok(()),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// `N_s`, sorted ascending, including `s`.
    pub fn neighbors(&self, s: NodeId) -> &[NodeId] {
        &self.adjacency[s]
    }

    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Number of undirected edges, self-loops excluded.
    pub fn num_edges(&self) -> usize {
        self.adjacency
            .iter()
            .map(|n| n.len() - 1)
            .sum::<usize>()
            / 2
    }

    /// Largest neighborhood size, self included.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Total number of (node, neighbor) pairs, i.e. `sum_s |N_s|`.
    pub fn num_moves(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Breadth-first hop counts from `source`; `None` for unreachable nodes.
    fn bfs(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes()];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Hop counts `l(source, s)` for every node.
    pub fn shortest_path_lengths(&self, source: NodeId) -> Vec<usize> {
        self.bfs(source)
            .into_iter()
            .map(|d| d.expect("graph is connected by construction"))
            .collect()
    }

    /// `D = max_{s,s'} l(s, s')`.
    pub fn diameter(&self) -> usize {
        (0..self.num_nodes())
            .map(|s| self.shortest_path_lengths(s).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, n)| n.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True when each consecutive pair of `path` is an edge or a stay.
    pub fn is_admissible(&self, path: &[NodeId]) -> bool {
        path.iter().all(|&s| s < self.num_nodes())
            && path.windows(2).all(|w| self.is_adjacent(w[0], w[1]))
    }

    /// Reads the edge-list text format:
    ///
    /// ```text
    /// # comment
    /// nodes 4
    /// 0 1
    /// 1 2
    /// 2 3
    /// ```
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let mut num_nodes: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| GraphError::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let Some(n) = num_nodes else {
                match fields.as_slice() {
                    ["nodes", count] => {
                        let n: usize = count.parse().map_err(|_| GraphError::Parse {
                            line: lineno,
                            message: format!("invalid node count `{count}`"),
                        })?;
                        if n == 0 {
                            return Err(GraphError::Parse {
                                line: lineno,
                                message: "node count must be positive".into(),
                            });
                        }
                        num_nodes = Some(n);
                        continue;
                    }
                    _ => {
                        return Err(GraphError::Parse {
                            line: lineno,
                            message: "expected header `nodes <N>`".into(),
                        })
                    }
                }
            };
            let [u, v] = fields.as_slice() else {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: format!("expected `<u> <v>`, found `{trimmed}`"),
                });
            };
            let parse = |tok: &str| -> Result<usize, GraphError> {
                let node: usize = tok.parse().map_err(|_| GraphError::Parse {
                    line: lineno,
                    message: format!("invalid node id `{tok}`"),
                })?;
                if node >= n {
                    return Err(GraphError::NodeOutOfRange {
                        line: lineno,
                        node,
                        num_nodes: n,
                    });
                }
                Ok(node)
            };
            edges.push((parse(u)?, parse(v)?));
        }
        let n = num_nodes.ok_or(GraphError::Parse {
            line: 0,
            message: "missing `nodes <N>` header".into(),
        })?;
        Graph::from_edges(n, &edges)
    }

    /// Writes the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("nodes {}\n", self.num_nodes());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// All-pairs hop counts with deterministic next-hop lookup.
///
/// `next_hop(s, target)` is the lowest-indexed neighbor of `s` one hop
/// closer to `target`.
#[derive(Debug, Clone)]
pub struct HopTable {
    n: usize,
    dist: Vec<u32>,
}

impl HopTable {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.num_nodes();
        let mut dist = vec![0u32; n * n];
        for s in 0..n {
            for (t, d) in graph.shortest_path_lengths(s).into_iter().enumerate() {
                dist[s * n + t] = d as u32;
            }
        }
        HopTable { n, dist }
    }

    pub fn distance(&self, from: NodeId, to: NodeId) -> usize {
        self.dist[from * self.n + to] as usize
    }

    pub fn next_hop(&self, graph: &Graph, from: NodeId, target: NodeId) -> NodeId {
        if from == target {
            return from;
        }
        let d = self.distance(from, target);
        graph
            .neighbors(from)
            .iter()
            .copied()
            .find(|&v| self.distance(v, target) + 1 == d)
            .expect("connected graph always has a next hop")
    }

    /// Minimum-hop path `[from, ..., target]`.
    pub fn path(&self, graph: &Graph, from: NodeId, target: NodeId) -> Vec<NodeId> {
        let mut path = vec![from];
        let mut cur = from;
        while cur != target {
            cur = self.next_hop(graph, cur, target);
            path.push(cur);
        }
        path
    }

    pub fn diameter(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }
}

/// The topologies used in the experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    FullyConnected { nodes: usize },
    Line { nodes: usize },
    Circle { nodes: usize },
    /// Node 0 is the center.
    Star { nodes: usize },
    /// Complete `branching`-ary tree in breadth-first order, truncated at `nodes`.
    Tree { nodes: usize, branching: usize },
    Grid { rows: usize, cols: usize },
    /// `nodes` nodes with diameter exactly `diameter`.
    Stretched { nodes: usize, diameter: usize },
    Custom { nodes: usize, edges: Vec<(NodeId, NodeId)> },
}

pub const DEFAULT_TREE_BRANCHING: usize = 2;

impl GraphFamily {
    pub fn num_nodes(&self) -> usize {
        match *self {
            GraphFamily::FullyConnected { nodes }
            | GraphFamily::Line { nodes }
            | GraphFamily::Circle { nodes }
            | GraphFamily::Star { nodes }
            | GraphFamily::Tree { nodes, .. }
            | GraphFamily::Stretched { nodes, .. }
            | GraphFamily::Custom { nodes, .. } => nodes,
            GraphFamily::Grid { rows, cols } => rows * cols,
        }
    }

    pub fn generate(&self) -> Result<Graph, GraphError> {
        let n = self.num_nodes();
        if n == 0 {
            return Err(GraphError::InvalidParameter(format!(
                "{self} must have at least one node"
            )));
        }
        let edges: Vec<(NodeId, NodeId)> = match self {
            GraphFamily::FullyConnected { .. } => (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect(),
            GraphFamily::Line { .. } => (1..n).map(|v| (v - 1, v)).collect(),
            GraphFamily::Circle { .. } => {
                let mut e: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
                if n > 2 {
                    e.push((n - 1, 0));
                }
                e
            }
            GraphFamily::Star { .. } => (1..n).map(|v| (0, v)).collect(),
            GraphFamily::Tree { branching, .. } => {
                if *branching == 0 {
                    return Err(GraphError::InvalidParameter(
                        "tree branching factor must be positive".into(),
                    ));
                }
                (1..n).map(|v| ((v - 1) / branching, v)).collect()
            }
            GraphFamily::Grid { rows, cols } => {
                if *rows == 0 || *cols == 0 {
                    return Err(GraphError::InvalidParameter(
                        "grid dimensions must be positive".into(),
                    ));
                }
                let mut e = Vec::with_capacity(2 * n);
                for r in 0..*rows {
                    for c in 0..*cols {
                        let id = r * cols + c;
                        if c + 1 < *cols {
                            e.push((id, id + 1));
                        }
                        if r + 1 < *rows {
                            e.push((id, id + cols));
                        }
                    }
                }
                e
            }
            GraphFamily::Stretched { diameter, .. } => stretched_edges(n, *diameter)?,
            GraphFamily::Custom { edges, .. } => edges.clone(),
        };
        Graph::from_edges(n, &edges)
    }
}

/// A path `0..=d` with the remaining nodes hung as leaves on the interior
/// path nodes `1..d`, assigned round-robin. A leaf on interior node `j` is
/// at most `d` hops from anything, so the diameter stays `d`.
fn stretched_edges(n: usize, d: usize) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
    if n == 1 {
        return if d == 0 {
            Ok(Vec::new())
        } else {
            Err(GraphError::InvalidParameter(
                "a single node has diameter 0".into(),
            ))
        };
    }
    if d == 0 || d >= n {
        return Err(GraphError::InvalidParameter(format!(
            "diameter {d} impossible with {n} nodes (need 1 <= D <= {})",
            n - 1
        )));
    }
    if d == 1 {
        return Ok((0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect());
    }
    let mut edges: Vec<_> = (1..=d).map(|v| (v - 1, v)).collect();
    let interior = d - 1;
    for (k, leaf) in (d + 1..n).enumerate() {
        edges.push((1 + k % interior, leaf));
    }
    Ok(edges)
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::FullyConnected { nodes } => write!(f, "complete:{nodes}"),
            GraphFamily::Line { nodes } => write!(f, "line:{nodes}"),
            GraphFamily::Circle { nodes } => write!(f, "circle:{nodes}"),
            GraphFamily::Star { nodes } => write!(f, "star:{nodes}"),
            GraphFamily::Tree { nodes, branching } => write!(f, "tree:{nodes}:{branching}"),
            GraphFamily::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            GraphFamily::Stretched { nodes, diameter } => write!(f, "stretched:{nodes}:{diameter}"),
            GraphFamily::Custom { nodes, edges } => write!(f, "custom:{nodes}:{}", edges.len()),
        }
    }
}

/// Parses `kind:params`, e.g. `grid:10x10`, `line:100`, `tree:100:3`,
/// `stretched:50:10`, `complete:20`.
impl FromStr for GraphFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| GraphError::InvalidParameter(format!("`{s}`: {msg}"));
        let num = |tok: &str| -> Result<usize, GraphError> {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| bad(&format!("`{tok}` is not a non-negative integer")))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            [kind, nodes] if matches!(*kind, "complete" | "fully-connected" | "fc") => {
                Ok(GraphFamily::FullyConnected { nodes: num(nodes)? })
            }
            ["line", nodes] => Ok(GraphFamily::Line { nodes: num(nodes)? }),
            [kind, nodes] if matches!(*kind, "circle" | "cycle") => {
                Ok(GraphFamily::Circle { nodes: num(nodes)? })
            }
            ["star", nodes] => Ok(GraphFamily::Star { nodes: num(nodes)? }),
            ["tree", nodes] => Ok(GraphFamily::Tree {
                nodes: num(nodes)?,
                branching: DEFAULT_TREE_BRANCHING,
            }),
            ["tree", nodes, b] => Ok(GraphFamily::Tree {
                nodes: num(nodes)?,
                branching: num(b)?,
            }),
            ["grid", dims] => {
                let (r, c) = dims
                    .split_once('x')
                    .ok_or_else(|| bad("grid expects ROWSxCOLS"))?;
                Ok(GraphFamily::Grid {
                    rows: num(r)?,
                    cols: num(c)?,
                })
            }
            ["stretched", nodes, d] => Ok(GraphFamily::Stretched {
                nodes: num(nodes)?,
                diameter: num(d)?,
            }),
            _ => Err(bad(
                "expected one of complete:N, line:N, circle:N, star:N, tree:N[:B], grid:RxC, stretched:N:D",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Graph {
        s.parse::<GraphFamily>().unwrap().generate().unwrap()
    }

    #[test]
    fn line_shape() {
        let g = gen("line:100");
        assert_eq!(g.num_edges(), 99);
        assert_eq!(g.diameter(), 99);
        assert_eq!(g.shortest_path_lengths(0)[..5], [0, 1, 2, 3, 4]);
    }

    #[test]
    fn complete_and_circle() {
        let g = gen("complete:5");
        assert_eq!(g.num_edges(), 10);
        assert_eq!(g.diameter(), 1);
        assert_eq!(gen("circle:10").diameter(), 5);
    }

    #[test]
    fn grid_shape() {
        let g = gen("grid:10x10");
        assert_eq!(g.num_nodes(), 100);
        assert_eq!(g.num_edges(), 180);
        assert_eq!(g.shortest_path_lengths(0)[99], 18);
    }

    #[test]
    fn star_distances() {
        let g = gen("star:5");
        let d = g.shortest_path_lengths(1);
        assert_eq!(d, vec![1, 0, 2, 2, 2]);
        assert_eq!(g.diameter(), 2);
    }

    #[test]
    fn single_node() {
        let g = gen("line:1");
        assert_eq!(g.diameter(), 0);
        assert_eq!(g.neighbors(0), &[0]);
    }

    #[test]
    fn tree_parent_rule() {
        let g = gen("tree:7:2");
        assert_eq!(g.neighbors(0), &[0, 1, 2]);
        assert_eq!(g.neighbors(2), &[0, 2, 5, 6]);
        assert_eq!(g.diameter(), 4);
    }

    #[test]
    fn stretched_exact_diameter() {
        assert_eq!(gen("stretched:50:10").diameter(), 10);
        assert_eq!(gen("stretched:50:10").num_nodes(), 50);
        assert_eq!(gen("stretched:10:9").diameter(), 9);
        assert_eq!(gen("stretched:10:1").diameter(), 1);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            GraphFamily::Line { nodes: 0 }.generate(),
            Err(GraphError::InvalidParameter(_))
        ));
        assert!(GraphFamily::Grid { rows: 0, cols: 3 }.generate().is_err());
        assert!(GraphFamily::Stretched { nodes: 5, diameter: 5 }.generate().is_err());
        assert!("grid:10".parse::<GraphFamily>().is_err());
        assert!("hexagon:3".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let text = "# demo\nnodes 4\n0 1\n1 2\n\n2 3\n1 0\n";
        let g = Graph::load_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.num_edges(), 3);
        assert_eq!(Graph::load_edge_list(g.to_edge_list().as_bytes()).unwrap(), g);

        let err = Graph::load_edge_list("nodes 4\n0 1\n2 3\n".as_bytes()).unwrap_err();
        assert_eq!(err, GraphError::Disconnected { node: 2 });

        let err = Graph::load_edge_list("nodes 3\n0 1\n1 7\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GraphError::NodeOutOfRange { line: 3, node: 7, .. }));

        let err = Graph::load_edge_list("nodes 3\n0 1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));

        let err = Graph::load_edge_list("0 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn hop_table_paths() {
        let g = gen("grid:3x3");
        let table = HopTable::new(&g);
        assert_eq!(table.path(&g, 0, 8), vec![0, 1, 2, 5, 8]);
        assert_eq!(table.diameter(), 4);
        assert!(g.is_admissible(&table.path(&g, 6, 2)));
    }
}
