//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use graph_bandit::experiments::{
    ablation_suite, pooled_std, run_experiment, sensitivity_suite, sublinearity_check, AblationKind,
    AggregateResult, Algorithm, ExperimentSpec, MeanInit, SensitivityKind, SensitivityTable,
};
use graph_bandit::graph::{Graph, GraphFamily};
use graph_bandit::learners::Violation;
use graph_bandit::planning::{
    check_sp_optimality, path_value, sp_policy, sufficient_horizon, verify_radius_inequality, vi_policy,
    OptimalityCheck,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 0.25 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("spanning tree keeps it connected")
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Graph, Vec<f64>) {
    let n = rng.random_range(2..=10);
    let g = random_connected_graph(rng, n);
    let mu = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
    (g, mu)
}

fn criterion_1() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    for i in 0..50 {
        let (g, mu) = random_instance(&mut rng);
        let check = check_sp_optimality(&g, &mu);
        if !matches!(check, OptimalityCheck::Holds { .. }) {
            failures.push(format!("instance {i}: {check:?}"));
        }
    }
    (failures.is_empty(), format!("50 instances, failures: {failures:?}"))
}

fn criterion_2() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for i in 0..50 {
        let (g, mu) = random_instance(&mut rng);
        let horizon = sufficient_horizon(&g, &mu).unwrap_or(0) + g.num_nodes();
        let sp = sp_policy(&g, &mu);
        match vi_policy(&g, &mu, 1e-9) {
            Ok(vi) => {
                for s in 0..g.num_nodes() {
                    let a = path_value(&mu, &sp.rollout(s, horizon));
                    let b = path_value(&mu, &vi.rollout(s, horizon));
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                }
            }
            Err(e) => errors.push(format!("instance {i}: {e}")),
        }
    }
    (
        errors.is_empty() && worst <= 1e-9,
        format!("50 instances, max relative value gap {worst:.3e}, errors {errors:?}"),
    )
}

fn criterion_4() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for _ in 0..10_000 {
        let len = rng.random_range(1..=60);
        let mut total = 0.0f64;
        let mut z = Vec::with_capacity(len);
        for _ in 0..len {
            let cap = total.max(1.0);
            let zk = match rng.random_range(0..4) {
                0 => cap,
                1 => 0.0,
                _ => rng.random_range(0.0..=cap),
            };
            z.push(zk);
            total += zk;
        }
        if !verify_radius_inequality(&z).unwrap_or(false) {
            bad += 1;
        }
    }
    (bad == 0, format!("10000 sequences, {bad} violations"))
}

fn grid_spec() -> ExperimentSpec {
    ExperimentSpec::grid_benchmark()
}

fn g_ucb_violations(res: &AggregateResult) -> Vec<String> {
    res.violations()
        .into_iter()
        .filter(|(a, _, _)| a.is_g_ucb())
        .map(|(a, sim, v): (Algorithm, usize, &Violation)| format!("{a} sim {sim}: {v}"))
        .collect()
}

fn criterion_5(res: &AggregateResult) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (other, need_std) in [
        (Algorithm::Ucrl2Gb, false),
        (Algorithm::LocalUcb, true),
        (Algorithm::LocalTs, true),
        (Algorithm::QlEps, true),
    ] {
        let c = res.compare(Algorithm::GUcb, other).expect("benchmark ran");
        let ok = if need_std { c.margin() >= 1.0 } else { c.advantage() > 0.0 };
        pass &= ok;
        parts.push(format!(
            "{other} {:.0}+-{:.0} (margin {:.2} std{})",
            c.mean_b,
            c.std_b,
            c.margin(),
            if ok { "" } else { ", FAIL" }
        ));
    }
    let g = res.summary(Algorithm::GUcb).unwrap();
    (
        pass,
        format!("g-ucb {:.0}+-{:.0}; {}", g.final_mean(), g.final_std(), parts.join("; ")),
    )
}

fn criterion_6() -> (bool, String, AggregateResult) {
    let r = ablation_suite(AblationKind::UcbDefinition, &grid_spec()).expect("ablation runs");
    let c = r.comparison;
    (
        c.margin() >= 1.0,
        format!(
            "own bonus {:.0}+-{:.0}, ucrl2 bonus {:.0}+-{:.0}, margin {:.2} std",
            c.mean_a,
            c.std_a,
            c.mean_b,
            c.std_b,
            c.margin()
        ),
        r.result,
    )
}

fn criterion_7() -> (bool, String, AggregateResult) {
    let r = ablation_suite(AblationKind::DoublingScheme, &grid_spec()).expect("ablation runs");
    let c = r.comparison;
    let ratio = c.advantage().abs() / c.pooled_std();
    (
        ratio <= 2.0,
        format!(
            "destination {:.0}+-{:.0}, any-node {:.0}+-{:.0}, |diff| = {:.2} pooled std",
            c.mean_a, c.std_a, c.mean_b, c.std_b, ratio
        ),
        r.result,
    )
}

/// Line with a local bump next to the start and the peak at the far end.
/// The walk starts at node 3: trying unvisited neighbors lowest index first
/// leads to the bump, and the low nodes in between keep it there.
fn deceptive_line_spec() -> ExperimentSpec {
    ExperimentSpec {
        graph: GraphFamily::Line { nodes: 10 },
        means: MeanInit::Fixed(vec![6.0, 7.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 9.0]),
        start: 3,
        algorithms: vec![Algorithm::LocalUcb, Algorithm::GUcb],
        ..grid_spec()
    }
}

fn criterion_8(grid: &AggregateResult, line: &AggregateResult) -> (bool, String) {
    let g = grid.summary(Algorithm::GUcb).unwrap();
    let l = line.summary(Algorithm::LocalUcb).unwrap();
    let eg = sublinearity_check(&grid.times, &g.mean);
    let el = sublinearity_check(&line.times, &l.mean);
    match (eg, el) {
        (Ok(eg), Ok(el)) => (
            eg < 0.8 && el > 0.9,
            format!("g-ucb grid exponent {eg:.3} (< 0.8), local-ucb line exponent {el:.3} (> 0.9)"),
        ),
        (a, b) => (false, format!("fit failed: {a:?} {b:?}")),
    }
}

fn sensitivity_base() -> ExperimentSpec {
    ExperimentSpec {
        algorithms: vec![Algorithm::GUcb],
        horizon: 1000,
        ..grid_spec()
    }
}

/// `next >= prev - 2 pooled std` for every adjacent pair.
fn non_decreasing(table: &SensitivityTable) -> Vec<String> {
    let rows = table.series(Algorithm::GUcb);
    rows.windows(2)
        .filter(|w| w[1].mean < w[0].mean - 2.0 * pooled_std(w[0].std, w[1].std))
        .map(|w| format!("{} -> {}: {:.1} -> {:.1}", w[0].param, w[1].param, w[0].mean, w[1].mean))
        .collect()
}

fn criterion_9() -> (bool, String, Vec<String>) {
    let base = sensitivity_base();
    let diameters: Vec<f64> = (2..=49).map(f64::from).collect();
    let d = sensitivity_suite(SensitivityKind::Diameter, &diameters, &base).expect("diameter sweep");
    let gaps = [2.0, 1.0, 0.5];
    let g = sensitivity_suite(SensitivityKind::Gap, &gaps, &base).expect("gap sweep");
    let sizes = [5.0, 10.0, 20.0, 50.0, 100.0, 200.0];
    let s = sensitivity_suite(SensitivityKind::NumNodes, &sizes, &base).expect("size sweep");

    let d_bad = non_decreasing(&d);
    let g_bad = non_decreasing(&g);
    let s_rows = s.series(Algorithm::GUcb);
    let x: Vec<f64> = s_rows.iter().map(|r| r.param).collect();
    let y: Vec<f64> = s_rows.iter().map(|r| r.mean).collect();
    let exponent = graph_bandit::experiments::loglog_slope(&x, &y);
    let exp_ok = matches!(exponent, Ok(e) if e > 0.0 && e < 1.0);

    let d_means = d.series(Algorithm::GUcb);
    let detail = format!(
        "diameter D=2: {:.0}, D=25: {:.0}, D=49: {:.0}, violating pairs {:?}; gap means {:?}, violating pairs {:?}; size exponent {:?}",
        d_means[0].mean,
        d_means[23].mean,
        d_means[47].mean,
        d_bad,
        g.series(Algorithm::GUcb).iter().map(|r| r.mean.round()).collect::<Vec<_>>(),
        g_bad,
        exponent.map(|e| (e * 1000.0).round() / 1000.0),
    );
    let violations = [&d, &g, &s]
        .iter()
        .flat_map(|t| t.results.iter().flat_map(g_ucb_violations))
        .collect();
    (d_bad.is_empty() && g_bad.is_empty() && exp_ok, detail, violations)
}

fn criterion_10(first: &AggregateResult) -> (bool, String) {
    let again = run_experiment(&grid_spec()).expect("rerun");
    let same = first.results_csv() == again.results_csv()
        && first.aggregate_csv() == again.aggregate_csv()
        && first.episodes_csv() == again.episodes_csv();
    let single_thread = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&grid_spec()).expect("rerun"));
    let same_serial = first.aggregate_csv() == single_thread.aggregate_csv()
        && first.results_csv() == single_thread.results_csv();
    (
        same && same_serial,
        format!("rerun identical: {same}, single-thread rerun identical: {same_serial}"),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() -> ExitCode {
    let mut outcomes: Vec<(u32, Outcome)> = Vec::new();
    let mut record = |id: u32, (pass, detail): (bool, String), elapsed: Duration, limit: Option<u64>| {
        outcomes.push((
            id,
            Outcome {
                pass,
                detail,
                elapsed,
                limit: limit.map(Duration::from_secs),
            },
        ));
    };

    let (r, e) = timed(criterion_1);
    record(1, r, e, Some(10));
    let (r, e) = timed(criterion_2);
    record(2, r, e, Some(10));
    let (r, e) = timed(criterion_4);
    record(4, r, e, Some(5));

    let ((grid, line), e5) = timed(|| {
        (
            run_experiment(&grid_spec()).expect("grid benchmark"),
            run_experiment(&deceptive_line_spec()).expect("deceptive line"),
        )
    });
    record(5, criterion_5(&grid), e5, Some(600));
    let ((p6, d6, r6), e6) = timed(criterion_6);
    record(6, (p6, d6), e6, Some(600));
    let ((p7, d7, r7), e7) = timed(criterion_7);
    record(7, (p7, d7), e7, Some(600));
    let (r, _) = timed(|| criterion_8(&grid, &line));
    record(8, r, e5, Some(600));
    let ((p9, d9, v9), e9) = timed(criterion_9);
    record(9, (p9, d9), e9, Some(900));

    let mut violations: Vec<String> = [&grid, &line, &r6, &r7].iter().flat_map(|r| g_ucb_violations(r)).collect();
    violations.extend(v9);
    let g_ucb_runs: usize = [&grid, &line, &r6, &r7]
        .iter()
        .map(|r| r.runs.iter().filter(|x| x.algorithm.is_g_ucb()).count())
        .sum();
    record(
        3,
        (
            violations.is_empty(),
            format!(
                "{g_ucb_runs} G-UCB runs in the benchmark and ablation suites plus every sensitivity run, {} violations {:?}",
                violations.len(),
                violations.iter().take(5).collect::<Vec<_>>()
            ),
        ),
        Duration::ZERO,
        None,
    );

    let (r, e) = timed(|| criterion_10(&grid));
    record(10, r, e, None);

    outcomes.sort_by_key(|(id, _)| *id);
    let mut all = true;
    for (id, o) in &outcomes {
        let in_time = o.limit.is_none_or(|l| o.elapsed <= l);
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {id:>2}: {} ({:.1}s{}) {}",
            if pass { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time limit" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
