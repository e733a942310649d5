//! Configuration: JSON file, command-line flags, defaults.
//!
//! Both sources are read into a [`Partial`] of optional values; flags win
//! over the file, the file wins over `GRAPH_BANDIT_SEED`, which wins over
//! built-in defaults. Every problem found is reported, not just the first.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::experiments::{AblationKind, Algorithm, ExperimentSpec, SensitivityKind};
use crate::learners::BonusScale;

pub const SEED_ENV: &str = "GRAPH_BANDIT_SEED";

/// Subcommands that take an experiment configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Suite,
    Sensitivity,
    Ablation,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Suite => "suite",
            Command::Sensitivity => "sensitivity",
            Command::Ablation => "ablation",
        }
    }
}

/// Optional values from one configuration source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partial {
    pub command: Option<String>,
    pub graph: Option<String>,
    pub graph_file: Option<PathBuf>,
    pub means: Option<PathBuf>,
    pub mean_lo: Option<f64>,
    pub mean_hi: Option<f64>,
    pub half_width: Option<f64>,
    pub algorithms: Option<Vec<String>>,
    pub horizon: Option<usize>,
    pub sims: Option<usize>,
    pub seed: Option<u64>,
    pub stride: Option<usize>,
    pub start: Option<usize>,
    pub bonus: Option<String>,
    pub include_init: Option<bool>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub q_init: Option<f64>,
    pub ucbh_c: Option<f64>,
    pub ql_horizon: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
    pub timings: Option<bool>,
    pub graphs: Option<Vec<String>>,
    pub kind: Option<String>,
    pub grid: Option<Vec<f64>>,
    pub which: Option<String>,
}

macro_rules! take_first {
    ($a:ident, $b:ident, $($f:ident),*) => {
        Partial { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Partial {
    /// Field-wise `self` if set, else `other`.
    pub fn or(self, other: Partial) -> Partial {
        let (a, b) = (self, other);
        take_first!(
            a, b, command, graph, graph_file, means, mean_lo, mean_hi, half_width, algorithms, horizon, sims,
            seed, stride, start, bonus, include_init, delta, epsilon, q_init, ucbh_c, ql_horizon, out, format,
            threads, timings, graphs, kind, grid, which
        )
    }

    /// Reads a JSON object, collecting every unknown key and type error.
    pub fn from_json(text: &str) -> Result<Partial, Vec<String>> {
        let value: Value = serde_json::from_str(text).map_err(|e| vec![format!("invalid JSON: {e}")])?;
        let Value::Object(map) = value else {
            return Err(vec!["configuration must be a JSON object".into()]);
        };
        let mut errors = Vec::new();
        let mut p = Partial::default();
        let mut r = Reader {
            map: &map,
            errors: &mut errors,
        };
        p.command = r.string("command");
        p.graph = r.string("graph");
        p.graph_file = r.string("graph_file").map(PathBuf::from);
        p.means = r.string("means").map(PathBuf::from);
        p.mean_lo = r.float("mean_lo");
        p.mean_hi = r.float("mean_hi");
        p.half_width = r.float("half_width");
        p.algorithms = r.strings("algorithms");
        p.horizon = r.count("horizon");
        p.sims = r.count("sims");
        p.seed = r.unsigned("seed");
        p.stride = r.count("stride");
        p.start = r.count("start");
        p.bonus = r.string("bonus");
        p.include_init = r.boolean("include_init");
        p.delta = r.float("delta");
        p.epsilon = r.float("epsilon");
        p.q_init = r.float("q_init");
        p.ucbh_c = r.float("ucbh_c");
        p.ql_horizon = r.count("ql_horizon");
        p.out = r.string("out").map(PathBuf::from);
        p.format = r.string("format");
        p.threads = r.count("threads");
        p.timings = r.boolean("timings");
        p.graphs = r.strings("graphs");
        p.kind = r.string("kind");
        p.grid = r.floats("grid");
        p.which = r.string("which");
        for key in map.keys() {
            if !KEYS.contains(&key.as_str()) {
                errors.push(format!("unknown key `{key}`"));
            }
        }
        if errors.is_empty() {
            Ok(p)
        } else {
            Err(errors)
        }
    }
}

const KEYS: [&str; 28] = [
    "command",
    "graph",
    "graph_file",
    "means",
    "mean_lo",
    "mean_hi",
    "half_width",
    "algorithms",
    "horizon",
    "sims",
    "seed",
    "stride",
    "start",
    "bonus",
    "include_init",
    "delta",
    "epsilon",
    "q_init",
    "ucbh_c",
    "ql_horizon",
    "out",
    "format",
    "threads",
    "timings",
    "graphs",
    "kind",
    "grid",
    "which",
];

struct Reader<'a> {
    map: &'a Map<String, Value>,
    errors: &'a mut Vec<String>,
}

impl Reader<'_> {
    /// `None` for a missing or null key.
    fn get(&self, key: &str) -> Option<&Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn mismatch<T>(&mut self, key: &str, expected: &str, got: &Value) -> Option<T> {
        self.errors.push(format!("`{key}`: expected {expected}, got {got}"));
        None
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.get(key)? {
            Value::String(s) => Some(s.clone()),
            v => {
                let v = v.clone();
                self.mismatch(key, "a string", &v)
            }
        }
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Number(n) => n.as_f64(),
            v => {
                let v = v.clone();
                self.mismatch(key, "a number", &v)
            }
        }
    }

    fn unsigned(&mut self, key: &str) -> Option<u64> {
        match self.get(key)? {
            Value::Number(n) if n.as_u64().is_some() => n.as_u64(),
            v => {
                let v = v.clone();
                self.mismatch(key, "a non-negative integer", &v)
            }
        }
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        self.unsigned(key).map(|n| n as usize)
    }

    fn boolean(&mut self, key: &str) -> Option<bool> {
        match self.get(key)? {
            Value::Bool(b) => Some(*b),
            v => {
                let v = v.clone();
                self.mismatch(key, "true or false", &v)
            }
        }
    }

    fn strings(&mut self, key: &str) -> Option<Vec<String>> {
        match self.get(key)? {
            Value::Array(items) if items.iter().all(Value::is_string) => {
                Some(items.iter().filter_map(|v| v.as_str().map(String::from)).collect())
            }
            v => {
                let v = v.clone();
                self.mismatch(key, "an array of strings", &v)
            }
        }
    }

    fn floats(&mut self, key: &str) -> Option<Vec<f64>> {
        match self.get(key)? {
            Value::Array(items) if items.iter().all(Value::is_number) => {
                Some(items.iter().filter_map(Value::as_f64).collect())
            }
            v => {
                let v = v.clone();
                self.mismatch(key, "an array of numbers", &v)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved configuration. Serializes to a file that [`Partial::from_json`]
/// reads back to the same configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub command: String,
    pub graph: Option<String>,
    pub graph_file: Option<PathBuf>,
    pub means: Option<PathBuf>,
    pub mean_lo: f64,
    pub mean_hi: f64,
    pub half_width: f64,
    pub algorithms: Vec<String>,
    pub horizon: usize,
    pub sims: usize,
    pub seed: u64,
    pub stride: usize,
    pub start: usize,
    pub bonus: String,
    pub include_init: bool,
    pub delta: f64,
    pub epsilon: f64,
    pub q_init: Option<f64>,
    pub ucbh_c: f64,
    pub ql_horizon: Option<usize>,
    pub out: PathBuf,
    pub format: Format,
    pub threads: Option<usize>,
    pub timings: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
}

pub const DEFAULT_SUITE_GRAPHS: [&str; 6] = ["complete:100", "line:100", "circle:100", "star:100", "tree:100", "grid:10x10"];

pub fn default_sensitivity_grid(kind: SensitivityKind) -> Vec<f64> {
    match kind {
        SensitivityKind::NumNodes => vec![5.0, 10.0, 20.0, 50.0, 100.0, 200.0],
        SensitivityKind::Diameter => (2..=49).map(f64::from).collect(),
        SensitivityKind::Gap => vec![2.0, 1.0, 0.5],
    }
}

/// Reads the optional config file, overlays `flags` and fills defaults.
pub fn load_config(command: Command, file: Option<&Path>, flags: Partial) -> Result<Config, Vec<String>> {
    let from_file = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| vec![format!("cannot read config {}: {e}", path.display())])?;
            Partial::from_json(&text)?
        }
        None => Partial::default(),
    };
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => return Err(vec![format!("{SEED_ENV}=`{s}` is not a non-negative integer")]),
        },
        Err(_) => None,
    };
    resolve(command, flags.or(from_file), env_seed)
}

/// Fills defaults and validates every field.
pub fn resolve(command: Command, p: Partial, env_seed: Option<u64>) -> Result<Config, Vec<String>> {
    let mut errors = Vec::new();
    if let Some(c) = &p.command {
        if c != command.name() {
            errors.push(format!("config is for `{c}` but the command is `{}`", command.name()));
        }
    }
    if p.graph.is_some() && p.graph_file.is_some() {
        errors.push("give either `graph` or `graph_file`, not both".into());
    }
    let default_horizon = match command {
        Command::Sensitivity => 1000,
        _ => ExperimentSpec::DEFAULT_HORIZON,
    };
    let default_algorithms: Vec<String> = match command {
        Command::Suite => Algorithm::BENCHMARK.iter().map(|a| a.name().to_string()).collect(),
        _ => vec![Algorithm::GUcb.name().to_string()],
    };
    let graph = match (command, &p.graph, &p.graph_file) {
        (Command::Run | Command::Ablation, None, None) => Some("grid:10x10".to_string()),
        _ => p.graph.clone(),
    };
    let cfg = Config {
        command: command.name().to_string(),
        graph,
        graph_file: p.graph_file,
        means: p.means,
        mean_lo: p.mean_lo.unwrap_or(0.5),
        mean_hi: p.mean_hi.unwrap_or(9.5),
        half_width: p.half_width.unwrap_or(0.5),
        algorithms: p.algorithms.unwrap_or(default_algorithms),
        horizon: p.horizon.unwrap_or(default_horizon),
        sims: p.sims.unwrap_or(ExperimentSpec::DEFAULT_SIMS),
        seed: p.seed.or(env_seed).unwrap_or(0),
        stride: p.stride.unwrap_or(ExperimentSpec::DEFAULT_STRIDE),
        start: p.start.unwrap_or(0),
        bonus: p.bonus.unwrap_or_else(|| BonusScale::default().to_string()),
        include_init: p.include_init.unwrap_or(false),
        delta: p.delta.unwrap_or(crate::learners::DEFAULT_DELTA),
        epsilon: p.epsilon.unwrap_or(0.1),
        q_init: p.q_init,
        ucbh_c: p.ucbh_c.unwrap_or(1.0),
        ql_horizon: p.ql_horizon,
        out: p.out.unwrap_or_else(|| PathBuf::from("results")),
        format: match p.format.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => {
                errors.push(format!("`format`: expected csv or json, got `{other}`"));
                Format::Csv
            }
        },
        threads: p.threads,
        timings: p.timings.unwrap_or(false),
        graphs: match command {
            Command::Suite => Some(
                p.graphs
                    .unwrap_or_else(|| DEFAULT_SUITE_GRAPHS.iter().map(|s| s.to_string()).collect()),
            ),
            _ => None,
        },
        kind: match command {
            Command::Sensitivity => p.kind.or_else(|| {
                errors.push("missing required field `kind` (num_nodes, diameter or gap)".into());
                None
            }),
            _ => None,
        },
        grid: None,
        which: match command {
            Command::Ablation => p.which.or_else(|| {
                errors.push("missing required field `which` (ucb_definition, doubling_scheme or transit)".into());
                None
            }),
            _ => None,
        },
    };
    let mut cfg = cfg;
    if command == Command::Sensitivity {
        match cfg.kind.as_deref().map(str::parse::<SensitivityKind>) {
            Some(Ok(kind)) => cfg.grid = Some(p.grid.unwrap_or_else(|| default_sensitivity_grid(kind))),
            Some(Err(e)) => errors.push(format!("`kind`: {e}")),
            None => {}
        }
    }
    if let Some(Err(e)) = cfg.which.as_deref().map(str::parse::<AblationKind>) {
        errors.push(format!("`which`: {e}"));
    }
    for a in &cfg.algorithms {
        if let Err(e) = a.parse::<Algorithm>() {
            errors.push(format!("`algorithms`: {e}"));
        }
    }
    if cfg.algorithms.is_empty() {
        errors.push("`algorithms`: at least one algorithm is required".into());
    }
    if let Err(e) = cfg.bonus.parse::<BonusScale>() {
        errors.push(format!("`bonus`: {e}"));
    }
    if cfg.horizon == 0 {
        errors.push("`horizon` must be at least 1".into());
    }
    if cfg.sims == 0 {
        errors.push("`sims` must be at least 1".into());
    }
    if cfg.stride == 0 {
        errors.push("`stride` must be at least 1".into());
    }
    if cfg.threads == Some(0) {
        errors.push("`threads` must be at least 1".into());
    }
    if !(cfg.mean_lo.is_finite() && cfg.mean_hi.is_finite() && cfg.mean_lo < cfg.mean_hi) {
        errors.push(format!("mean range ({}, {}) is empty", cfg.mean_lo, cfg.mean_hi));
    }
    if !(cfg.half_width >= 0.0 && cfg.half_width.is_finite()) {
        errors.push(format!("`half_width` must be non-negative, got {}", cfg.half_width));
    }
    if !(cfg.delta > 0.0 && cfg.delta <= 1.0) {
        errors.push(format!("`delta` must lie in (0, 1], got {}", cfg.delta));
    }
    if !(0.0..=1.0).contains(&cfg.epsilon) {
        errors.push(format!("`epsilon` must lie in [0, 1], got {}", cfg.epsilon));
    }
    if let Some(graphs) = &cfg.graphs {
        if graphs.is_empty() {
            errors.push("`graphs`: at least one graph is required".into());
        }
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(errors)
    }
}
