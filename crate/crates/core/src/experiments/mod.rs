//! Multi-seed experiment harness.
//!
//! Simulation `i` draws its means from seed `base_seed + i`, builds one
//! reward model and hands every algorithm an environment with the same
//! seed, so all algorithms see the same k-th sample at every node.
//! Simulations run in parallel; results are folded in simulation order, so
//! the output does not depend on the thread count.

mod fit;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::env::{sample_means, EnvError, NodeReward, RewardModel};
use crate::graph::{Graph, GraphError, GraphFamily, NodeId};
use crate::learners::{
    audit_run, g_ucb_run, local_ts_run, local_ucb_run, ql_eps_run, ql_ucbh_run, ucrl2_run, BonusScale,
    Doubling, EpisodeLog, LearnerError, LearnerRun, QlConfig, RunConfig, Transit, UcbSpec, Violation,
    DEFAULT_DELTA,
};

pub use fit::{loglog_slope, sublinearity_check, MIN_FIT_POINTS};
pub use suites::{
    ablation_suite, sensitivity_suite, AblationKind, AblationReport, SensitivityKind, SensitivityRow,
    SensitivityTable,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("{algorithm} failed in simulation {sim}: {source}")]
    Learner {
        algorithm: Algorithm,
        sim: usize,
        source: LearnerError,
    },
    #[error("cannot fit: {0}")]
    Fit(String),
}

/// Learners and learner variants that can be put in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    GUcb,
    /// G-UCB with the UCRL2 confidence radius.
    GUcbUcrl2Bonus,
    /// G-UCB ending episodes when any node doubles.
    GUcbAnyNode,
    /// G-UCB walking minimum-hop paths to the maximal-UCB node.
    GUcbDirect,
    Ucrl2Gb,
    LocalUcb,
    LocalTs,
    QlEps,
    QlUcbH,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::GUcb,
        Algorithm::GUcbUcrl2Bonus,
        Algorithm::GUcbAnyNode,
        Algorithm::GUcbDirect,
        Algorithm::Ucrl2Gb,
        Algorithm::LocalUcb,
        Algorithm::LocalTs,
        Algorithm::QlEps,
        Algorithm::QlUcbH,
    ];

    /// The benchmark line-up of the grid comparison.
    pub const BENCHMARK: [Algorithm; 6] = [
        Algorithm::GUcb,
        Algorithm::Ucrl2Gb,
        Algorithm::LocalUcb,
        Algorithm::LocalTs,
        Algorithm::QlEps,
        Algorithm::QlUcbH,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::GUcb => "g-ucb",
            Algorithm::GUcbUcrl2Bonus => "g-ucb-ucrl2-bonus",
            Algorithm::GUcbAnyNode => "g-ucb-any-node",
            Algorithm::GUcbDirect => "g-ucb-direct",
            Algorithm::Ucrl2Gb => "ucrl2-gb",
            Algorithm::LocalUcb => "local-ucb",
            Algorithm::LocalTs => "local-ts",
            Algorithm::QlEps => "ql-eps",
            Algorithm::QlUcbH => "ql-ucb-h",
        }
    }

    /// Whether the algorithm is a G-UCB variant (and so subject to every
    /// episodic invariant).
    pub fn is_g_ucb(&self) -> bool {
        matches!(
            self,
            Algorithm::GUcb | Algorithm::GUcbUcrl2Bonus | Algorithm::GUcbAnyNode | Algorithm::GUcbDirect
        )
    }

    pub fn run(&self, env: &mut crate::env::Environment<'_>, base: &RunConfig) -> Result<LearnerRun, LearnerError> {
        let mut config = base.clone();
        match self {
            Algorithm::GUcb => g_ucb_run(env, &config),
            Algorithm::GUcbUcrl2Bonus => {
                config.ucb = UcbSpec::Ucrl2 { delta: config.delta };
                g_ucb_run(env, &config)
            }
            Algorithm::GUcbAnyNode => {
                config.doubling = Doubling::AnyNode;
                g_ucb_run(env, &config)
            }
            Algorithm::GUcbDirect => {
                config.transit = Transit::DirectShortestLength;
                g_ucb_run(env, &config)
            }
            Algorithm::Ucrl2Gb => ucrl2_run(env, &config),
            Algorithm::LocalUcb => local_ucb_run(env, &config),
            Algorithm::LocalTs => local_ts_run(env, &config),
            Algorithm::QlEps => ql_eps_run(env, &config),
            Algorithm::QlUcbH => ql_ucbh_run(env, &config),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!("unknown algorithm '{s}' (expected one of {})", names.join(", "))
            })
    }
}

/// How the node means of each simulation are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanInit {
    /// I.i.d. uniform on `(lo, hi)`, redrawn per simulation.
    Uniform { lo: f64, hi: f64 },
    /// The same means in every simulation.
    Fixed(Vec<f64>),
    /// First node `best`, last node `best - gap`, every other node a
    /// deterministic zero reward.
    Gap { best: f64, gap: f64 },
}

impl MeanInit {
    pub fn means(&self, seed: u64, num_nodes: usize) -> Vec<f64> {
        match self {
            MeanInit::Uniform { lo, hi } => sample_means(seed, num_nodes, *lo, *hi),
            MeanInit::Fixed(mu) => mu.clone(),
            MeanInit::Gap { best, gap } => {
                let mut mu = vec![0.0; num_nodes];
                mu[0] = *best;
                if num_nodes > 1 {
                    mu[num_nodes - 1] = best - gap;
                }
                mu
            }
        }
    }

    fn validate(&self, num_nodes: usize) -> Result<(), String> {
        match self {
            MeanInit::Uniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(format!("mean range ({lo}, {hi}) is empty"))
            }
            MeanInit::Fixed(mu) if mu.len() != num_nodes => {
                Err(format!("{} fixed means for {num_nodes} nodes", mu.len()))
            }
            MeanInit::Fixed(mu) if mu.iter().any(|m| !m.is_finite()) => Err("fixed means must be finite".into()),
            MeanInit::Gap { gap, .. } if !(*gap > 0.0) => Err(format!("gap must be positive, got {gap}")),
            MeanInit::Gap { .. } if num_nodes < 2 => Err("gap instance needs at least two nodes".into()),
            _ => Ok(()),
        }
    }
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub graph: GraphFamily,
    pub means: MeanInit,
    /// Rewards are uniform on `[mu - w, mu + w]`; `0` means deterministic.
    pub half_width: f64,
    pub algorithms: Vec<Algorithm>,
    /// Steps after initialization.
    pub horizon: usize,
    pub num_sims: usize,
    pub base_seed: u64,
    /// Keep every `stride`-th point of the regret curves.
    pub stride: usize,
    pub start: NodeId,
    pub bonus: BonusScale,
    pub include_init: bool,
    pub delta: f64,
    pub ql: QlConfig,
}

impl ExperimentSpec {
    pub const DEFAULT_HORIZON: usize = 5000;
    pub const DEFAULT_SIMS: usize = 20;
    pub const DEFAULT_STRIDE: usize = 10;

    /// The grid comparison at desk scale.
    pub fn grid_benchmark() -> Self {
        ExperimentSpec {
            graph: GraphFamily::Grid { rows: 10, cols: 10 },
            means: MeanInit::Uniform { lo: 0.5, hi: 9.5 },
            half_width: 0.5,
            algorithms: Algorithm::BENCHMARK.to_vec(),
            horizon: Self::DEFAULT_HORIZON,
            num_sims: Self::DEFAULT_SIMS,
            base_seed: 0,
            stride: Self::DEFAULT_STRIDE,
            start: 0,
            bonus: BonusScale::default(),
            include_init: false,
            delta: DEFAULT_DELTA,
            ql: QlConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<Graph, ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidSpec(m));
        if self.num_sims == 0 {
            return bad("num_sims must be at least 1".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if !(self.half_width >= 0.0 && self.half_width.is_finite()) {
            return bad(format!("half_width {} must be a finite non-negative number", self.half_width));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad(format!("delta {} not in (0, 1]", self.delta));
        }
        let graph = self.graph.generate()?;
        if self.start >= graph.num_nodes() {
            return bad(format!("start node {} out of range", self.start));
        }
        self.means.validate(graph.num_nodes()).map_err(ExperimentError::InvalidSpec)?;
        Ok(graph)
    }

    /// Reward model of simulation `sim`.
    pub fn reward_model(&self, sim: usize) -> Result<RewardModel, EnvError> {
        let n = self.graph.num_nodes();
        let mu = self.means.means(self.sim_seed(sim), n);
        let nodes = mu
            .iter()
            .enumerate()
            .map(|(s, &m)| {
                let zero_filler = matches!(self.means, MeanInit::Gap { .. }) && s != 0 && s != n - 1;
                if zero_filler || self.half_width == 0.0 {
                    NodeReward::Constant(m)
                } else {
                    NodeReward::Uniform {
                        lo: m - self.half_width,
                        hi: m + self.half_width,
                    }
                }
            })
            .collect();
        RewardModel::new(nodes)
    }

    pub fn sim_seed(&self, sim: usize) -> u64 {
        self.base_seed.wrapping_add(sim as u64)
    }

    pub fn run_config(&self, sim: usize) -> RunConfig {
        let mut config = RunConfig::new(self.horizon);
        config.seed = self.sim_seed(sim);
        config.bonus = self.bonus;
        config.include_init = self.include_init;
        config.delta = self.delta;
        config.ql = self.ql;
        config
    }

    /// `t_k = min((k + 1) stride, T)` for `k < ceil(T / stride)`.
    pub fn sample_times(&self) -> Vec<usize> {
        let points = self.horizon.div_ceil(self.stride);
        (0..points).map(|k| ((k + 1) * self.stride).min(self.horizon)).collect()
    }
}

/// One (simulation, algorithm) run.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub sim: usize,
    pub algorithm: Algorithm,
    /// Cumulative regret at [`ExperimentSpec::sample_times`].
    pub curve: Vec<f64>,
    pub final_regret: f64,
    pub violations: Vec<Violation>,
    pub episodes: Option<EpisodeLog>,
    pub seconds: f64,
}

/// Mean and sample standard deviation curves of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSummary {
    pub algorithm: Algorithm,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl CurveSummary {
    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("non-empty curve")
    }

    pub fn final_std(&self) -> f64 {
        *self.std.last().expect("non-empty curve")
    }
}

#[derive(Debug, Clone)]
pub struct AggregateResult {
    pub spec: ExperimentSpec,
    pub times: Vec<usize>,
    pub summaries: Vec<CurveSummary>,
    /// Simulation-major, algorithms in spec order.
    pub runs: Vec<SimRun>,
}

/// Two algorithms compared at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub mean_a: f64,
    pub mean_b: f64,
    pub std_a: f64,
    pub std_b: f64,
}

impl Comparison {
    /// `mean_b - mean_a`: positive when `a` has lower regret.
    pub fn advantage(&self) -> f64 {
        self.mean_b - self.mean_a
    }

    /// `sqrt((s_a^2 + s_b^2) / 2)`.
    pub fn pooled_std(&self) -> f64 {
        pooled_std(self.std_a, self.std_b)
    }

    /// Advantage in units of pooled standard deviation.
    pub fn margin(&self) -> f64 {
        let p = self.pooled_std();
        if p > 0.0 {
            self.advantage() / p
        } else if self.advantage() > 0.0 {
            f64::INFINITY
        } else if self.advantage() < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    }
}

pub fn pooled_std(a: f64, b: f64) -> f64 {
    ((a * a + b * b) / 2.0).sqrt()
}

impl AggregateResult {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&CurveSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }

    /// Final-regret comparison of `a` against `b`.
    pub fn compare(&self, a: Algorithm, b: Algorithm) -> Option<Comparison> {
        let (sa, sb) = (self.summary(a)?, self.summary(b)?);
        Some(Comparison {
            mean_a: sa.final_mean(),
            mean_b: sb.final_mean(),
            std_a: sa.final_std(),
            std_b: sb.final_std(),
        })
    }

    pub fn final_regrets(&self, algorithm: Algorithm) -> Vec<f64> {
        self.runs
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| r.final_regret)
            .collect()
    }

    /// Every violation as (algorithm, simulation, violation).
    pub fn violations(&self) -> Vec<(Algorithm, usize, &Violation)> {
        self.runs
            .iter()
            .flat_map(|r| r.violations.iter().map(move |v| (r.algorithm, r.sim, v)))
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.runs.iter().all(|r| r.violations.is_empty())
    }

    pub const RESULTS_HEADER: &'static str = "algorithm,sim,t,cumulative_regret";
    pub const AGGREGATE_HEADER: &'static str = "algorithm,t,mean_regret,std_regret";
    pub const EPISODES_HEADER: &'static str = "algorithm,sim,m,t_m,h_m,dest_m,n_m_dest,completed";
    pub const TIMINGS_HEADER: &'static str = "algorithm,sim,seconds";

    /// Long-format per-run curves.
    pub fn results_csv(&self) -> String {
        let mut out = format!("{}\n", Self::RESULTS_HEADER);
        for run in &self.runs {
            for (t, r) in self.times.iter().zip(&run.curve) {
                out.push_str(&format!("{},{},{},{}\n", run.algorithm, run.sim, t, r));
            }
        }
        out
    }

    pub fn aggregate_csv(&self) -> String {
        let mut out = format!("{}\n", Self::AGGREGATE_HEADER);
        for s in &self.summaries {
            for ((t, m), sd) in self.times.iter().zip(&s.mean).zip(&s.std) {
                out.push_str(&format!("{},{},{},{}\n", s.algorithm, t, m, sd));
            }
        }
        out
    }

    pub fn episodes_csv(&self) -> String {
        let mut out = format!("{}\n", Self::EPISODES_HEADER);
        for run in &self.runs {
            if let Some(log) = &run.episodes {
                for row in log.csv_rows() {
                    out.push_str(&format!("{},{},{}\n", run.algorithm, run.sim, row));
                }
            }
        }
        out
    }

    /// Wall-clock seconds per run. Not deterministic.
    pub fn timings_csv(&self) -> String {
        let mut out = format!("{}\n", Self::TIMINGS_HEADER);
        for run in &self.runs {
            out.push_str(&format!("{},{},{:.6}\n", run.algorithm, run.sim, run.seconds));
        }
        out
    }
}

/// Running mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Sample standard deviation, `0` for a single observation.
    fn std(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64).sqrt()
        }
    }
}

fn run_one(
    spec: &ExperimentSpec,
    graph: &Graph,
    model: &RewardModel,
    sim: usize,
    algorithm: Algorithm,
    times: &[usize],
) -> Result<SimRun, ExperimentError> {
    let started = Instant::now();
    let mut env = crate::env::Environment::new(graph, model.clone(), spec.start, spec.sim_seed(sim))?;
    let run = algorithm
        .run(&mut env, &spec.run_config(sim))
        .map_err(|source| ExperimentError::Learner { algorithm, sim, source })?;
    let seconds = started.elapsed().as_secs_f64();
    let offset = run.trace.len() - spec.horizon;
    let curve: Vec<f64> = times
        .iter()
        .map(|&t| run.trace.regret_of(offset + t).expect("sample time within trace"))
        .collect();
    let violations = audit_run(graph, model, &run);
    Ok(SimRun {
        sim,
        algorithm,
        final_regret: *curve.last().expect("horizon >= 1"),
        curve,
        violations,
        episodes: run.episodes,
        seconds,
    })
}

/// Runs every algorithm of `spec` on every simulation and aggregates.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<AggregateResult, ExperimentError> {
    let graph = spec.validate()?;
    let times = spec.sample_times();
    let per_sim: Vec<Result<Vec<SimRun>, ExperimentError>> = (0..spec.num_sims)
        .into_par_iter()
        .map(|sim| {
            let model = spec.reward_model(sim)?;
            spec.algorithms
                .iter()
                .map(|&a| run_one(spec, &graph, &model, sim, a, &times))
                .collect()
        })
        .collect();
    let mut runs = Vec::with_capacity(spec.num_sims * spec.algorithms.len());
    for sim_runs in per_sim {
        runs.extend(sim_runs?);
    }
    let summaries = spec
        .algorithms
        .iter()
        .map(|&algorithm| {
            let mut moments = vec![Moments::default(); times.len()];
            for run in runs.iter().filter(|r| r.algorithm == algorithm) {
                for (m, &x) in moments.iter_mut().zip(&run.curve) {
                    m.push(x);
                }
            }
            CurveSummary {
                algorithm,
                mean: moments.iter().map(|m| m.mean).collect(),
                std: moments.iter().map(Moments::std).collect(),
            }
        })
        .collect();
    Ok(AggregateResult {
        spec: spec.clone(),
        times,
        summaries,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentSpec {
        ExperimentSpec {
            graph: GraphFamily::Grid { rows: 3, cols: 3 },
            horizon: 400,
            num_sims: 4,
            stride: 7,
            algorithms: Algorithm::ALL.to_vec(),
            ..ExperimentSpec::grid_benchmark()
        }
    }

    #[test]
    fn sample_times_cover_horizon() {
        let spec = small();
        let t = spec.sample_times();
        assert_eq!(t.len(), 400usize.div_ceil(7));
        assert_eq!(*t.last().unwrap(), 400);
        assert_eq!(t[0], 7);
    }

    #[test]
    fn single_sim_constant_rewards_has_zero_std() {
        let spec = ExperimentSpec {
            num_sims: 1,
            half_width: 0.0,
            ..small()
        };
        let res = run_experiment(&spec).unwrap();
        for s in &res.summaries {
            assert!(s.std.iter().all(|&x| x == 0.0));
            assert_eq!(s.mean.len(), spec.sample_times().len());
        }
    }

    #[test]
    fn rerun_is_identical() {
        let spec = small();
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.results_csv(), b.results_csv());
        assert_eq!(a.aggregate_csv(), b.aggregate_csv());
        assert_eq!(a.episodes_csv(), b.episodes_csv());
        assert!(a.is_clean(), "{:?}", a.violations());
    }

    #[test]
    fn aggregate_matches_two_pass() {
        let res = run_experiment(&small()).unwrap();
        for s in &res.summaries {
            let runs: Vec<_> = res.runs.iter().filter(|r| r.algorithm == s.algorithm).collect();
            for k in 0..res.times.len() {
                let xs: Vec<f64> = runs.iter().map(|r| r.curve[k]).collect();
                let n = xs.len() as f64;
                let mean = xs.iter().sum::<f64>() / n;
                let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
                let tol = 1e-10 * mean.abs().max(1.0);
                assert!((s.mean[k] - mean).abs() <= tol);
                assert!((s.std[k] - var.sqrt()).abs() <= 1e-10 * var.sqrt().max(1.0));
            }
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("g_ucb".parse::<Algorithm>().is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(ExperimentSpec { num_sims: 0, ..small() }.validate().is_err());
        assert!(ExperimentSpec { horizon: 0, ..small() }.validate().is_err());
        assert!(ExperimentSpec {
            means: MeanInit::Gap { best: 9.5, gap: 0.0 },
            ..small()
        }
        .validate()
        .is_err());
    }
}
