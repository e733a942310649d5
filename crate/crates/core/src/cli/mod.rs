//! The `graph-bandit` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error,
//! 3 invariant-audit failure. Output files are written to a temporary file
//! in the output directory and renamed into place.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::experiments::{
    ablation_suite, run_experiment, sensitivity_suite, AblationKind, AggregateResult, Algorithm, ExperimentError,
    ExperimentSpec, MeanInit, SensitivityKind,
};
use crate::graph::{Graph, GraphFamily};
use crate::learners::{BonusScale, QlConfig};
use crate::planning::{shortest_path_plan, ShortestPathMethod};

pub use config::{
    default_sensitivity_grid, load_config, resolve, Command, Config, Format, Partial, DEFAULT_SUITE_GRAPHS,
    SEED_ENV,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, graph or means file.
    Config(Vec<String>),
    /// Runs finished but broke a runtime invariant.
    Audit(Vec<String>),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Audit(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }

    fn config(msg: impl Into<String>) -> Self {
        CliError::Config(vec![msg.into()])
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(errs) => {
                writeln!(f, "configuration error:")?;
                for e in errs {
                    writeln!(f, "  - {e}")?;
                }
                Ok(())
            }
            CliError::Audit(v) => {
                writeln!(f, "invariant audit failed ({} violations):", v.len())?;
                for e in v.iter().take(20) {
                    writeln!(f, "  - {e}")?;
                }
                Ok(())
            }
            CliError::Runtime(e) => writeln!(f, "error: {e}"),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidSpec(_) | ExperimentError::Graph(_) | ExperimentError::Env(_) => {
                CliError::config(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "graph-bandit", version, about = "Graph bandit planning, learning and regret experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Run one experiment: every selected algorithm on paired seeds.
    Run(ExperimentArgs),
    /// Run the benchmark line-up on a list of graphs.
    Suite {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Graphs to run, comma separated [default: the six standard topologies].
        #[arg(long, value_delimiter = ',')]
        graphs: Vec<String>,
    },
    /// Sweep |S|, the diameter or the gap and report regret at the horizon.
    Sensitivity {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// num_nodes, diameter or gap.
        #[arg(long)]
        kind: Option<String>,
        /// Parameter values, comma separated.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
    },
    /// Paired comparison of G-UCB against one of its variants.
    Ablation {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// ucb_definition, doubling_scheme or transit.
        #[arg(long)]
        which: Option<String>,
    },
    /// Print the shortest-path policy and cost table for known means.
    Plan {
        #[command(flatten)]
        graph: GraphArgs,
        /// CSV with header `node,mu`.
        #[arg(long)]
        means: PathBuf,
        /// dijkstra or bellman-ford.
        #[arg(long, default_value = "dijkstra")]
        method: String,
    },
    /// Check that a graph loads and is connected.
    ValidateGraph(GraphArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph family, e.g. grid:10x10, line:100, star:50, tree:100:2, stretched:50:10.
    #[arg(long)]
    pub graph: Option<String>,
    /// Edge-list file: a `nodes N` line, then one `u v` pair per line.
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Graph family [default: grid:10x10].
    #[arg(long)]
    pub graph: Option<String>,
    /// Edge-list file instead of a family.
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
    /// Fixed node means, CSV with header `node,mu`.
    #[arg(long)]
    pub means: Option<PathBuf>,
    /// Lower end of the uniform mean range [default: 0.5].
    #[arg(long)]
    pub mean_lo: Option<f64>,
    /// Upper end of the uniform mean range [default: 9.5].
    #[arg(long)]
    pub mean_hi: Option<f64>,
    /// Rewards are uniform on [mu - w, mu + w] [default: 0.5].
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Algorithms, comma separated: g-ucb, ucrl2-gb, local-ucb, local-ts, ql-eps, ql-ucb-h,
    /// g-ucb-ucrl2-bonus, g-ucb-any-node, g-ucb-direct.
    #[arg(long = "algo", value_delimiter = ',')]
    pub algorithms: Vec<String>,
    /// Steps after the initialization walk [default: 5000; 1000 for sensitivity].
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Number of simulations [default: 20].
    #[arg(long)]
    pub sims: Option<usize>,
    /// Base seed; simulation i uses seed + i [default: $GRAPH_BANDIT_SEED, else 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Keep every stride-th point of the regret curves [default: 10].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Start node [default: 0].
    #[arg(long)]
    pub start: Option<usize>,
    /// Exploration bonus scale: support-width, reward-range or fixed:<c> [default: support-width].
    #[arg(long)]
    pub bonus: Option<String>,
    /// Count the initialization walk in the regret.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub include_init: Option<bool>,
    /// Confidence parameter of the UCRL2 radius [default: 0.05].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Exploration rate of ql-eps [default: 0.1].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Initial Q value of ql-eps [default: r_max * |S|].
    #[arg(long)]
    pub q_init: Option<f64>,
    /// Bonus constant of ql-ucb-h [default: 1].
    #[arg(long)]
    pub ucbh_c: Option<f64>,
    /// Effective horizon of both Q-learners [default: 2 D].
    #[arg(long)]
    pub ql_horizon: Option<usize>,
    /// Output directory [default: results].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json [default: csv].
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads [default: number of processors].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write wall-clock seconds per run (not reproducible).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub timings: Option<bool>,
}

impl ExperimentArgs {
    fn to_partial(&self) -> Partial {
        Partial {
            command: None,
            graph: self.graph.clone(),
            graph_file: self.graph_file.clone(),
            means: self.means.clone(),
            mean_lo: self.mean_lo,
            mean_hi: self.mean_hi,
            half_width: self.half_width,
            algorithms: (!self.algorithms.is_empty()).then(|| self.algorithms.clone()),
            horizon: self.horizon,
            sims: self.sims,
            seed: self.seed,
            stride: self.stride,
            start: self.start,
            bonus: self.bonus.clone(),
            include_init: self.include_init,
            delta: self.delta,
            epsilon: self.epsilon,
            q_init: self.q_init,
            ucbh_c: self.ucbh_c,
            ql_horizon: self.ql_horizon,
            out: self.out.clone(),
            format: self.format.clone(),
            threads: self.threads,
            timings: self.timings,
            graphs: None,
            kind: None,
            grid: None,
            which: None,
        }
    }
}

/// Parses `node,mu` rows (header required). Every node must appear once.
pub fn read_means_csv<R: BufRead>(reader: R) -> Result<Vec<f64>, String> {
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim() == "node,mu" => {}
        Some((_, Ok(h))) => return Err(format!("line 1: expected header `node,mu`, found `{}`", h.trim())),
        Some((_, Err(e))) => return Err(format!("line 1: {e}")),
        None => return Err("empty means file".into()),
    }
    let mut pairs = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| format!("line {lineno}: {e}"))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (node, mu) = line
            .split_once(',')
            .ok_or_else(|| format!("line {lineno}: expected `node,mu`"))?;
        let node: usize = node
            .trim()
            .parse()
            .map_err(|_| format!("line {lineno}: bad node `{}`", node.trim()))?;
        let mu: f64 = mu
            .trim()
            .parse()
            .ok()
            .filter(|m: &f64| m.is_finite())
            .ok_or_else(|| format!("line {lineno}: bad mean `{}`", mu.trim()))?;
        pairs.push((lineno, node, mu));
    }
    let n = pairs.len();
    let mut means = vec![None; n];
    for (lineno, node, mu) in pairs {
        match means.get_mut(node) {
            None => return Err(format!("line {lineno}: node {node} out of range for {n} rows")),
            Some(Some(_)) => return Err(format!("line {lineno}: node {node} listed twice")),
            Some(slot) => *slot = Some(mu),
        }
    }
    Ok(means.into_iter().map(|m| m.expect("each of n nodes filled once")).collect())
}

pub fn write_means_csv(means: &[f64]) -> String {
    let mut out = String::from("node,mu\n");
    for (s, m) in means.iter().enumerate() {
        let _ = writeln!(out, "{s},{m}");
    }
    out
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", target.display())))?;
    tmp.persist(&target)
        .map_err(|e| CliError::Runtime(format!("renaming into {}: {e}", target.display())))?;
    Ok(target)
}

fn load_graph(graph: Option<&str>, graph_file: Option<&Path>) -> Result<GraphFamily, CliError> {
    match (graph, graph_file) {
        (Some(_), Some(_)) => Err(CliError::config("give either --graph or --graph-file, not both")),
        (Some(g), None) => {
            let family: GraphFamily = g.parse().map_err(|e| CliError::config(format!("--graph: {e}")))?;
            family.generate().map_err(|e| CliError::config(format!("--graph: {e}")))?;
            Ok(family)
        }
        (None, Some(path)) => {
            let file = File::open(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            let graph = Graph::load_edge_list(BufReader::new(file))
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            Ok(GraphFamily::Custom {
                nodes: graph.num_nodes(),
                edges: graph.edges().collect(),
            })
        }
        (None, None) => Err(CliError::config("missing required field: --graph or --graph-file")),
    }
}

fn load_means(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    read_means_csv(BufReader::new(file)).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Builds the experiment described by `cfg` on `family`.
pub fn experiment_spec(cfg: &Config, family: GraphFamily) -> Result<ExperimentSpec, CliError> {
    let means = match &cfg.means {
        Some(path) => {
            let mu = load_means(path)?;
            if mu.len() != family.num_nodes() {
                return Err(CliError::config(format!(
                    "{}: {} means for a graph with {} nodes",
                    path.display(),
                    mu.len(),
                    family.num_nodes()
                )));
            }
            MeanInit::Fixed(mu)
        }
        None => MeanInit::Uniform {
            lo: cfg.mean_lo,
            hi: cfg.mean_hi,
        },
    };
    let algorithms = cfg
        .algorithms
        .iter()
        .map(|a| a.parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::config)?;
    let spec = ExperimentSpec {
        graph: family,
        means,
        half_width: cfg.half_width,
        algorithms,
        horizon: cfg.horizon,
        num_sims: cfg.sims,
        base_seed: cfg.seed,
        stride: cfg.stride,
        start: cfg.start,
        bonus: cfg.bonus.parse::<BonusScale>().map_err(CliError::config)?,
        include_init: cfg.include_init,
        delta: cfg.delta,
        ql: QlConfig {
            epsilon: cfg.epsilon,
            q_init: cfg.q_init,
            ucbh_c: cfg.ucbh_c,
            effective_horizon: cfg.ql_horizon,
        },
    };
    spec.validate()?;
    Ok(spec)
}

fn prepare_out(cfg: &Config) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::config(format!("output directory {}: {e}", cfg.out.display())))?;
    let resolved = serde_json::to_string_pretty(cfg).expect("config serializes") + "\n";
    write_atomic(&cfg.out, "config.resolved.json", &resolved)?;
    Ok(())
}

fn aggregate_json(res: &AggregateResult) -> String {
    let summaries: Vec<_> = res
        .summaries
        .iter()
        .map(|s| {
            serde_json::json!({
                "algorithm": s.algorithm.name(),
                "mean_regret": s.mean,
                "std_regret": s.std,
            })
        })
        .collect();
    let runs: Vec<_> = res
        .runs
        .iter()
        .map(|r| {
            serde_json::json!({
                "algorithm": r.algorithm.name(),
                "sim": r.sim,
                "final_regret": r.final_regret,
                "violations": r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "t": res.times,
        "algorithms": summaries,
        "runs": runs,
    }))
    .expect("json serializes")
        + "\n"
}

fn write_experiment(dir: &Path, cfg: &Config, res: &AggregateResult) -> Result<(), CliError> {
    match cfg.format {
        Format::Csv => {
            write_atomic(dir, "results.csv", &res.results_csv())?;
            write_atomic(dir, "aggregate.csv", &res.aggregate_csv())?;
        }
        Format::Json => {
            write_atomic(dir, "aggregate.json", &aggregate_json(res))?;
        }
    }
    write_atomic(dir, "episodes.csv", &res.episodes_csv())?;
    if cfg.timings {
        write_atomic(dir, "timings.csv", &res.timings_csv())?;
    }
    Ok(())
}

fn audit_messages(res: &AggregateResult, context: &str) -> Vec<String> {
    res.violations()
        .into_iter()
        .map(|(a, sim, v)| format!("{context}{a}, sim {sim}: {v}"))
        .collect()
}

fn summary_line(res: &AggregateResult) -> String {
    res.summaries
        .iter()
        .map(|s| format!("{} {:.1} +- {:.1}", s.algorithm, s.final_mean(), s.final_std()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}"))),
    }
}

fn graph_dir_name(graph: &str) -> String {
    graph
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn cmd_run(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let family = load_graph(cfg.graph.as_deref(), cfg.graph_file.as_deref())?;
    let spec = experiment_spec(cfg, family)?;
    prepare_out(cfg)?;
    let res = with_threads(cfg.threads, || run_experiment(&spec))??;
    write_experiment(&cfg.out, cfg, &res)?;
    let _ = writeln!(out, "regret at T = {}: {}", cfg.horizon, summary_line(&res));
    let violations = audit_messages(&res, "");
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Audit(violations))
    }
}

fn cmd_suite(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let graphs = cfg.graphs.clone().unwrap_or_default();
    let mut errors = Vec::new();
    let mut specs = Vec::new();
    for g in &graphs {
        match load_graph(Some(g), None).and_then(|f| experiment_spec(cfg, f)) {
            Ok(spec) => specs.push((g.clone(), spec)),
            Err(CliError::Config(e)) => errors.extend(e),
            Err(other) => return Err(other),
        }
    }
    if !errors.is_empty() {
        return Err(CliError::Config(errors));
    }
    prepare_out(cfg)?;
    let mut violations = Vec::new();
    for (name, spec) in specs {
        let res = with_threads(cfg.threads, || run_experiment(&spec))??;
        let dir = cfg.out.join(graph_dir_name(&name));
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
        write_experiment(&dir, cfg, &res)?;
        let _ = writeln!(out, "{name}: {}", summary_line(&res));
        violations.extend(audit_messages(&res, &format!("{name}, ")));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Audit(violations))
    }
}

fn cmd_sensitivity(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let kind: SensitivityKind = cfg
        .kind
        .as_deref()
        .unwrap_or_default()
        .parse()
        .map_err(CliError::config)?;
    let grid = cfg.grid.clone().unwrap_or_else(|| default_sensitivity_grid(kind));
    if cfg.means.is_some() {
        return Err(CliError::config("sensitivity sweeps draw their own means; drop `means`"));
    }
    // the family is replaced per grid value
    let base = experiment_spec(cfg, GraphFamily::Line { nodes: 10 })?;
    for &p in &grid {
        kind.spec_for(&base, p)?;
    }
    prepare_out(cfg)?;
    let table = with_threads(cfg.threads, || sensitivity_suite(kind, &grid, &base))??;
    write_atomic(&cfg.out, "sensitivity.csv", &table.to_csv())?;
    for r in &table.rows {
        let _ = writeln!(out, "{} = {}: {} {:.1} +- {:.1}", kind, r.param, r.algorithm, r.mean, r.std);
    }
    let violations: Vec<String> = table
        .results
        .iter()
        .zip(&grid)
        .flat_map(|(res, p)| audit_messages(res, &format!("{kind} = {p}, ")))
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Audit(violations))
    }
}

fn cmd_ablation(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let which: AblationKind = cfg
        .which
        .as_deref()
        .unwrap_or_default()
        .parse()
        .map_err(CliError::config)?;
    let family = load_graph(cfg.graph.as_deref(), cfg.graph_file.as_deref())?;
    let spec = experiment_spec(cfg, family)?;
    prepare_out(cfg)?;
    let report = with_threads(cfg.threads, || ablation_suite(which, &spec))??;
    write_atomic(&cfg.out, "ablation.csv", &report.to_csv())?;
    write_experiment(&cfg.out, cfg, &report.result)?;
    let c = report.comparison;
    let _ = writeln!(
        out,
        "{which}: {} {:.1} +- {:.1}, {} {:.1} +- {:.1}, difference {:.1} ({:.2} pooled std)",
        report.baseline,
        c.mean_a,
        c.std_a,
        report.variant,
        c.mean_b,
        c.std_b,
        c.advantage(),
        c.margin()
    );
    let violations = audit_messages(&report.result, "");
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Audit(violations))
    }
}

fn cmd_plan(args: &GraphArgs, means: &Path, method: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let family = load_graph(args.graph.as_deref(), args.graph_file.as_deref())?;
    let graph = family.generate().map_err(|e| CliError::config(e.to_string()))?;
    let mu = load_means(means)?;
    if mu.len() != graph.num_nodes() {
        return Err(CliError::config(format!(
            "{}: {} means for a graph with {} nodes",
            means.display(),
            mu.len(),
            graph.num_nodes()
        )));
    }
    let method = match method {
        "dijkstra" => ShortestPathMethod::Dijkstra,
        "bellman-ford" => ShortestPathMethod::BellmanFord,
        other => return Err(CliError::config(format!("--method: unknown `{other}`"))),
    };
    let plan = shortest_path_plan(&graph, &mu, method);
    let mut text = format!("destination {}\nnode,mu,cost,cost_to_go,next\n", plan.destination);
    for s in 0..graph.num_nodes() {
        let _ = writeln!(
            text,
            "{s},{},{},{},{}",
            mu[s],
            plan.node_costs[s],
            plan.cost_to_go[s],
            plan.policy.next(s)
        );
    }
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn cmd_validate(args: &GraphArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let family = load_graph(args.graph.as_deref(), args.graph_file.as_deref())?;
    let graph = family.generate().map_err(|e| CliError::config(e.to_string()))?;
    let _ = writeln!(
        out,
        "ok: {} nodes, {} edges, diameter {}, max neighborhood {}",
        graph.num_nodes(),
        graph.num_edges(),
        graph.diameter(),
        graph.max_degree()
    );
    Ok(())
}

fn experiment_config(command: Command, exp: &ExperimentArgs, extra: Partial) -> Result<Config, CliError> {
    let flags = extra.or(exp.to_partial());
    load_config(command, exp.config.as_deref(), flags).map_err(CliError::Config)
}

/// Runs a parsed command line, writing the human-readable report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        CliCommand::Run(exp) => {
            let cfg = experiment_config(Command::Run, &exp, Partial::default())?;
            cmd_run(&cfg, out)
        }
        CliCommand::Suite { exp, graphs } => {
            let extra = Partial {
                graphs: (!graphs.is_empty()).then_some(graphs),
                ..Partial::default()
            };
            let cfg = experiment_config(Command::Suite, &exp, extra)?;
            cmd_suite(&cfg, out)
        }
        CliCommand::Sensitivity { exp, kind, grid } => {
            let extra = Partial {
                kind,
                grid: (!grid.is_empty()).then_some(grid),
                ..Partial::default()
            };
            let cfg = experiment_config(Command::Sensitivity, &exp, extra)?;
            cmd_sensitivity(&cfg, out)
        }
        CliCommand::Ablation { exp, which } => {
            let extra = Partial {
                which,
                ..Partial::default()
            };
            let cfg = experiment_config(Command::Ablation, &exp, extra)?;
            cmd_ablation(&cfg, out)
        }
        CliCommand::Plan { graph, means, method } => cmd_plan(&graph, &means, &method, out),
        CliCommand::ValidateGraph(graph) => cmd_validate(&graph, out),
    }
}

/// Parses `args` (program name first), runs, prints diagnostics to standard
/// error and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprint!("{e}");
            e.exit_code()
        }
    }
}
