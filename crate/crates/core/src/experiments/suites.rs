//! Parameter sweeps and paired ablations built on [`run_experiment`].

use std::fmt;
use std::str::FromStr;

use super::{run_experiment, AggregateResult, Algorithm, Comparison, ExperimentError, ExperimentSpec, MeanInit};
use crate::graph::GraphFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityKind {
    /// Star graphs of the given size.
    NumNodes,
    /// Stretched graphs on [`SensitivityKind::DIAMETER_NODES`] nodes.
    Diameter,
    /// The 10-node line gap instance.
    Gap,
}

impl SensitivityKind {
    pub const DIAMETER_NODES: usize = 50;
    pub const GAP_LINE_NODES: usize = 10;
    pub const GAP_BEST_MEAN: f64 = 9.5;

    pub fn name(&self) -> &'static str {
        match self {
            SensitivityKind::NumNodes => "num_nodes",
            SensitivityKind::Diameter => "diameter",
            SensitivityKind::Gap => "gap",
        }
    }

    /// Specializes `base` to parameter value `p`.
    pub fn spec_for(&self, base: &ExperimentSpec, p: f64) -> Result<ExperimentSpec, ExperimentError> {
        let integer = |lo: usize, hi: usize| -> Result<usize, ExperimentError> {
            if p.fract() == 0.0 && p >= lo as f64 && p <= hi as f64 {
                Ok(p as usize)
            } else {
                Err(ExperimentError::InvalidSpec(format!(
                    "{} value {p} must be an integer in [{lo}, {hi}]",
                    self.name()
                )))
            }
        };
        let mut spec = base.clone();
        spec.start = 0;
        match self {
            SensitivityKind::NumNodes => {
                spec.graph = GraphFamily::Star { nodes: integer(1, 1 << 20)? };
            }
            SensitivityKind::Diameter => {
                let n = Self::DIAMETER_NODES;
                spec.graph = GraphFamily::Stretched {
                    nodes: n,
                    diameter: integer(1, n - 1)?,
                };
            }
            SensitivityKind::Gap => {
                if !(p > 0.0 && p.is_finite()) {
                    return Err(ExperimentError::InvalidSpec(format!("gap must be positive, got {p}")));
                }
                spec.graph = GraphFamily::Line {
                    nodes: Self::GAP_LINE_NODES,
                };
                spec.means = MeanInit::Gap {
                    best: Self::GAP_BEST_MEAN,
                    gap: p,
                };
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for SensitivityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensitivityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "num_nodes" | "num-nodes" => Ok(SensitivityKind::NumNodes),
            "diameter" => Ok(SensitivityKind::Diameter),
            "gap" => Ok(SensitivityKind::Gap),
            _ => Err(format!("unknown sensitivity kind '{s}' (expected num_nodes, diameter, gap)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRow {
    pub param: f64,
    pub algorithm: Algorithm,
    pub mean: f64,
    pub std: f64,
    pub violations: usize,
}

#[derive(Debug, Clone)]
pub struct SensitivityTable {
    pub kind: SensitivityKind,
    pub rows: Vec<SensitivityRow>,
    /// One experiment per parameter value, in grid order.
    pub results: Vec<AggregateResult>,
}

impl SensitivityTable {
    pub const CSV_HEADER: &'static str = "kind,param,algorithm,mean_regret,std_regret,violations";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.kind, r.param, r.algorithm, r.mean, r.std, r.violations
            ));
        }
        out
    }

    /// Rows of one algorithm in grid order.
    pub fn series(&self, algorithm: Algorithm) -> Vec<&SensitivityRow> {
        self.rows.iter().filter(|r| r.algorithm == algorithm).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.rows.iter().all(|r| r.violations == 0)
    }
}

/// Regret at the horizon for every value in `grid`.
pub fn sensitivity_suite(
    kind: SensitivityKind,
    grid: &[f64],
    base: &ExperimentSpec,
) -> Result<SensitivityTable, ExperimentError> {
    if grid.is_empty() {
        return Err(ExperimentError::InvalidSpec("empty parameter grid".into()));
    }
    let specs = grid
        .iter()
        .map(|&p| kind.spec_for(base, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (&p, spec) in grid.iter().zip(&specs) {
        let res = run_experiment(spec)?;
        for s in &res.summaries {
            rows.push(SensitivityRow {
                param: p,
                algorithm: s.algorithm,
                mean: s.final_mean(),
                std: s.final_std(),
                violations: res
                    .runs
                    .iter()
                    .filter(|r| r.algorithm == s.algorithm)
                    .map(|r| r.violations.len())
                    .sum(),
            });
        }
        results.push(res);
    }
    Ok(SensitivityTable { kind, rows, results })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AblationKind {
    UcbDefinition,
    DoublingScheme,
    Transit,
}

impl AblationKind {
    pub fn name(&self) -> &'static str {
        match self {
            AblationKind::UcbDefinition => "ucb_definition",
            AblationKind::DoublingScheme => "doubling_scheme",
            AblationKind::Transit => "transit",
        }
    }

    /// (baseline, variant).
    pub fn pair(&self) -> (Algorithm, Algorithm) {
        match self {
            AblationKind::UcbDefinition => (Algorithm::GUcb, Algorithm::GUcbUcrl2Bonus),
            AblationKind::DoublingScheme => (Algorithm::GUcb, Algorithm::GUcbAnyNode),
            AblationKind::Transit => (Algorithm::GUcb, Algorithm::GUcbDirect),
        }
    }
}

impl fmt::Display for AblationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AblationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ucb_definition" | "ucb-definition" => Ok(AblationKind::UcbDefinition),
            "doubling_scheme" | "doubling-scheme" => Ok(AblationKind::DoublingScheme),
            "transit" => Ok(AblationKind::Transit),
            _ => Err(format!(
                "unknown ablation '{s}' (expected ucb_definition, doubling_scheme, transit)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AblationReport {
    pub kind: AblationKind,
    pub baseline: Algorithm,
    pub variant: Algorithm,
    /// Baseline versus variant at the horizon.
    pub comparison: Comparison,
    pub result: AggregateResult,
}

impl AblationReport {
    pub const CSV_HEADER: &'static str =
        "ablation,baseline,variant,mean_baseline,mean_variant,std_baseline,std_variant,difference,pooled_std";

    pub fn to_csv(&self) -> String {
        let c = &self.comparison;
        format!(
            "{}\n{},{},{},{},{},{},{},{},{}\n",
            Self::CSV_HEADER,
            self.kind,
            self.baseline,
            self.variant,
            c.mean_a,
            c.mean_b,
            c.std_a,
            c.std_b,
            c.advantage(),
            c.pooled_std()
        )
    }
}

/// Runs the baseline and the variant on shared seeds. The algorithm list of
/// `spec` is replaced by the pair.
pub fn ablation_suite(kind: AblationKind, spec: &ExperimentSpec) -> Result<AblationReport, ExperimentError> {
    let (baseline, variant) = kind.pair();
    let mut spec = spec.clone();
    spec.algorithms = vec![baseline, variant];
    let result = run_experiment(&spec)?;
    let comparison = result.compare(baseline, variant).expect("both algorithms were run");
    Ok(AblationReport {
        kind,
        baseline,
        variant,
        comparison,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentSpec {
        ExperimentSpec {
            algorithms: vec![Algorithm::GUcb],
            horizon: 200,
            num_sims: 2,
            stride: 50,
            ..ExperimentSpec::grid_benchmark()
        }
    }

    #[test]
    fn gap_must_be_positive() {
        assert!(sensitivity_suite(SensitivityKind::Gap, &[1.0, 0.0], &tiny()).is_err());
        assert!(sensitivity_suite(SensitivityKind::Gap, &[-0.5], &tiny()).is_err());
    }

    #[test]
    fn diameter_bounds() {
        assert!(SensitivityKind::Diameter.spec_for(&tiny(), 50.0).is_err());
        assert!(SensitivityKind::Diameter.spec_for(&tiny(), 2.5).is_err());
        let s = SensitivityKind::Diameter.spec_for(&tiny(), 49.0).unwrap();
        assert_eq!(s.graph.generate().unwrap().diameter(), 49);
    }

    #[test]
    fn gap_instance_shape() {
        let s = SensitivityKind::Gap.spec_for(&tiny(), 2.0).unwrap();
        let m = s.reward_model(0).unwrap();
        assert_eq!(m.means(), vec![9.5, 0., 0., 0., 0., 0., 0., 0., 0., 7.5]);
        assert_eq!(m.node(4).support(), (0.0, 0.0));
    }

    #[test]
    fn sweep_rows_in_grid_order() {
        let t = sensitivity_suite(SensitivityKind::NumNodes, &[3.0, 5.0], &tiny()).unwrap();
        let params: Vec<f64> = t.rows.iter().map(|r| r.param).collect();
        assert_eq!(params, vec![3.0, 5.0]);
        assert!(t.is_clean());
        assert_eq!(t.to_csv().lines().count(), 3);
    }

    #[test]
    fn ablation_pairs() {
        for kind in [AblationKind::UcbDefinition, AblationKind::DoublingScheme, AblationKind::Transit] {
            let r = ablation_suite(kind, &tiny()).unwrap();
            assert_eq!(r.result.spec.algorithms, vec![r.baseline, r.variant]);
            assert!(r.result.is_clean());
            assert_eq!(kind.name().parse::<AblationKind>().unwrap(), kind);
        }
    }
}
