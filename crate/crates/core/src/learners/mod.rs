//! Online learners for the graph bandit.
//!
//! The episodic learners ([`g_ucb_run`], [`ucrl2_run`]) share one engine
//! parameterized by UCB rule, planner, transit rule and doubling scheme, so
//! every ablation is a configuration change. The myopic and model-free
//! benchmarks live in [`local`] and [`qlearning`].

pub mod audit;
mod episodic;
pub mod local;
pub mod qlearning;
mod state;
mod ucb;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::env::{EnvError, RegretTrace, RewardModel};
use crate::graph::NodeId;
use crate::planning::PlanningError;

pub use audit::{audit_run, Violation, ViolationKind};
pub use episodic::{g_ucb_run, initialization_walk, ucrl2_run, EpisodeLog, EpisodeRecord};
pub use local::{local_ts_run, local_ucb_run};
pub use qlearning::{ql_eps_run, ql_ucbh_run, QlConfig};
pub use state::LearnerState;
pub use ucb::{ucb_value, UcbRule, UcbSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnerError {
    #[error("node {0} has no samples yet")]
    Uninitialized(NodeId),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Planning(#[from] PlanningError),
    #[error("invalid learner configuration: {0}")]
    Config(String),
}

/// How the exploration bonus is scaled for rewards outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BonusScale {
    /// `r_max - r_min` of the declared reward range.
    RewardRange,
    /// Widest support of any single node. This is the sub-Gaussian scale the
    /// concentration argument actually needs, so it is the default.
    SupportWidth,
    Fixed(f64),
}

impl BonusScale {
    pub const NAMES: [&'static str; 3] = ["support-width", "reward-range", "fixed:<c>"];

    pub fn resolve(&self, model: &RewardModel) -> f64 {
        match *self {
            BonusScale::RewardRange => model.width(),
            BonusScale::SupportWidth => model.max_support_width(),
            BonusScale::Fixed(c) => c,
        }
    }
}

impl fmt::Display for BonusScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BonusScale::RewardRange => write!(f, "reward-range"),
            BonusScale::SupportWidth => write!(f, "support-width"),
            BonusScale::Fixed(c) => write!(f, "fixed:{c}"),
        }
    }
}

impl FromStr for BonusScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reward-range" => Ok(BonusScale::RewardRange),
            "support-width" => Ok(BonusScale::SupportWidth),
            _ => match s.strip_prefix("fixed:").map(str::parse::<f64>) {
                Some(Ok(c)) if c >= 0.0 && c.is_finite() => Ok(BonusScale::Fixed(c)),
                _ => Err(format!("unknown bonus scale '{s}' (expected {})", Self::NAMES.join(", "))),
            },
        }
    }
}

impl Default for BonusScale {
    fn default() -> Self {
        BonusScale::SupportWidth
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Planner {
    #[default]
    ShortestPath,
    /// Value iteration with threshold `1 / sqrt(t_m)`.
    ValueIteration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Transit {
    /// Execute the planned policy until a maximal-UCB node is reached.
    #[default]
    FollowPolicy,
    /// Walk a minimum-hop path to the maximal-UCB node.
    DirectShortestLength,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Doubling {
    /// The episode ends once the destination's sample count doubles.
    #[default]
    Destination,
    /// The episode ends as soon as any node's count doubles.
    AnyNode,
}

pub const DEFAULT_DELTA: f64 = 0.05;

/// Settings shared by all learners; each learner reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Steps after initialization.
    pub horizon: usize,
    /// Seed for the learner's own randomization.
    pub seed: u64,
    pub bonus: BonusScale,
    /// Keep the initialization walk in the regret trace.
    pub include_init: bool,
    pub planner: Planner,
    pub transit: Transit,
    pub doubling: Doubling,
    pub ucb: UcbSpec,
    /// Confidence parameter for the UCRL2 bonus.
    pub delta: f64,
    pub ql: QlConfig,
}

impl RunConfig {
    pub fn new(horizon: usize) -> Self {
        RunConfig {
            horizon,
            seed: 0,
            bonus: BonusScale::default(),
            include_init: false,
            planner: Planner::default(),
            transit: Transit::default(),
            doubling: Doubling::default(),
            ucb: UcbSpec::GUcb,
            delta: DEFAULT_DELTA,
            ql: QlConfig::default(),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), LearnerError> {
        if self.horizon == 0 {
            return Err(LearnerError::Config("horizon must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(LearnerError::Config(format!("delta {} not in (0, 1]", self.delta)));
        }
        if let UcbSpec::Ucrl2 { delta } = self.ucb {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(LearnerError::Config(format!("delta {delta} not in (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Result of one learner run.
#[derive(Debug, Clone)]
pub struct LearnerRun {
    pub trace: RegretTrace,
    /// Every visited node, starting with the initial placement.
    pub trajectory: Vec<NodeId>,
    /// Rewards aligned with `trajectory`.
    pub rewards: Vec<f64>,
    /// Episode bookkeeping for the episodic learners.
    pub episodes: Option<EpisodeLog>,
}
