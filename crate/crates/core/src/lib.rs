//! Graph bandits: an agent walks an undirected graph, collecting a random
//! reward at every node it visits, and learns where to go.

pub mod cli;
pub mod env;
pub mod experiments;
pub mod graph;
pub mod learners;
pub mod planning;
