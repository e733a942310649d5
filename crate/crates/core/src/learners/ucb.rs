use super::{LearnerError, LearnerState};
use crate::graph::{Graph, NodeId};

/// Which confidence radius to add to the empirical mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UcbSpec {
    /// `sqrt(2 ln t / n)`.
    GUcb,
    /// `sqrt(7 ln(|S| A t / delta) / (2 n))` with `A = max_s |N_s|`.
    Ucrl2 { delta: f64 },
}

/// A [`UcbSpec`] bound to a graph and a bonus scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcbRule {
    pub spec: UcbSpec,
    pub scale: f64,
    pub num_nodes: usize,
    pub num_actions: usize,
}

impl UcbRule {
    pub fn new(spec: UcbSpec, graph: &Graph, scale: f64) -> Self {
        UcbRule {
            spec,
            scale,
            num_nodes: graph.num_nodes(),
            num_actions: graph.max_degree(),
        }
    }

    /// Radius for `n >= 1` samples at clock `t` (natural log).
    pub fn bonus(&self, n: u64, t: u64) -> f64 {
        let (n, t) = (n as f64, t as f64);
        let radical = match self.spec {
            UcbSpec::GUcb => 2.0 * t.ln() / n,
            UcbSpec::Ucrl2 { delta } => {
                7.0 * (self.num_nodes as f64 * self.num_actions as f64 * t / delta).ln() / (2.0 * n)
            }
        };
        self.scale * radical.max(0.0).sqrt()
    }

    pub fn value(&self, state: &LearnerState, s: NodeId) -> Result<f64, LearnerError> {
        let mean = state.mean(s).ok_or(LearnerError::Uninitialized(s))?;
        Ok(mean + self.bonus(state.count(s), state.t()))
    }

    pub fn values(&self, state: &LearnerState) -> Result<Vec<f64>, LearnerError> {
        (0..state.num_nodes()).map(|s| self.value(state, s)).collect()
    }
}

pub fn ucb_value(state: &LearnerState, s: NodeId, rule: &UcbRule) -> Result<f64, LearnerError> {
    rule.value(state, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn rule(spec: UcbSpec) -> UcbRule {
        let g = GraphFamily::Grid { rows: 3, cols: 3 }.generate().unwrap();
        UcbRule::new(spec, &g, 1.0)
    }

    #[test]
    fn g_ucb_exact_value() {
        // mean 0.5, n = 8, t = e^4: 0.5 + sqrt(2 * 4 / 8) = 1.5
        let r = rule(UcbSpec::GUcb);
        let n = 8.0;
        let t = 4f64.exp();
        let value = 0.5 + r.scale * (2.0 * t.ln() / n).sqrt();
        assert!((value - 1.5).abs() < 1e-12);
        // through the state: one node, 8 samples of 0.5, clock forced to 8
        let s = LearnerState::from_history(1, &[0; 8], &[0.5; 8]);
        let direct = 0.5 + (2.0 * 8f64.ln() / 8.0).sqrt();
        assert!((r.value(&s, 0).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn bonus_vanishes_and_orders() {
        let r = rule(UcbSpec::GUcb);
        assert!(r.bonus(1_000_000_000, 100) < 1e-3);
        assert!(r.bonus(3, 100) > r.bonus(4, 100));
    }

    #[test]
    fn ucrl2_bonus_dominates() {
        let g = rule(UcbSpec::GUcb);
        let u = rule(UcbSpec::Ucrl2 { delta: 1.0 });
        for n in [1, 2, 10, 1000] {
            for t in [2, 10, 10_000] {
                assert!(u.bonus(n, t) > g.bonus(n, t));
            }
        }
    }

    #[test]
    fn uninitialized_node() {
        let r = rule(UcbSpec::GUcb);
        let s = LearnerState::new(9);
        assert_eq!(r.value(&s, 4), Err(LearnerError::Uninitialized(4)));
    }
}
