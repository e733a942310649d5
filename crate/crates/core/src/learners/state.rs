use crate::graph::NodeId;

/// Sample counts and running means, plus the per-episode counters used by
/// the doubling rules.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    counts: Vec<u64>,
    sums: Vec<f64>,
    t: u64,
    episode: usize,
    episode_counts: Vec<u64>,
}

impl LearnerState {
    pub fn new(num_nodes: usize) -> Self {
        LearnerState {
            counts: vec![0; num_nodes],
            sums: vec![0.0; num_nodes],
            t: 0,
            episode: 0,
            episode_counts: vec![0; num_nodes],
        }
    }

    /// Replays a history of (node, reward) observations.
    pub fn from_history(num_nodes: usize, nodes: &[NodeId], rewards: &[f64]) -> Self {
        let mut state = LearnerState::new(num_nodes);
        for (&s, &r) in nodes.iter().zip(rewards) {
            state.observe(s, r);
        }
        state
    }

    pub fn observe(&mut self, s: NodeId, reward: f64) {
        self.counts[s] += 1;
        self.sums[s] += reward;
        self.episode_counts[s] += 1;
        self.t += 1;
    }

    pub fn num_nodes(&self) -> usize {
        self.counts.len()
    }

    /// `n(s)`.
    pub fn count(&self, s: NodeId) -> u64 {
        self.counts[s]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Empirical mean; `None` before the first sample.
    pub fn mean(&self, s: NodeId) -> Option<f64> {
        (self.counts[s] > 0).then(|| self.sums[s] / self.counts[s] as f64)
    }

    pub fn sum(&self, s: NodeId) -> f64 {
        self.sums[s]
    }

    /// Total samples so far, `sum_s n(s)`.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn episode(&self) -> usize {
        self.episode
    }

    /// `c(s)`: samples of `s` in the current episode.
    pub fn episode_count(&self, s: NodeId) -> u64 {
        self.episode_counts[s]
    }

    pub fn begin_episode(&mut self) {
        self.episode += 1;
        self.episode_counts.iter_mut().for_each(|c| *c = 0);
    }

    pub fn all_sampled(&self) -> bool {
        self.counts.iter().all(|&n| n > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clock_is_total_count() {
        let s = LearnerState::from_history(3, &[0, 1, 1, 2, 1], &[1.0, 2.0, 4.0, 0.0, 3.0]);
        assert_eq!(s.t(), s.counts().iter().sum::<u64>());
        assert_eq!(s.mean(1), Some(3.0));
        assert!(s.all_sampled());
        assert_eq!(LearnerState::new(2).mean(0), None);
    }

    #[test]
    fn episode_counters_reset() {
        let mut s = LearnerState::new(2);
        s.observe(0, 1.0);
        s.begin_episode();
        assert_eq!(s.episode_count(0), 0);
        s.observe(0, 1.0);
        assert_eq!(s.episode_count(0), 1);
        assert_eq!(s.count(0), 2);
        assert_eq!(s.episode(), 1);
    }
}
