//! The JSON experiment configuration.
//!
//! ```json
//! {
//!   "name": "line-over-loop",
//!   "base": { "vertices": 1, "edges": [[0, 0]] },
//!   "action": { "provider": "zd", "dim": 1 },
//!   "voltage": { "0": "g1" },
//!   "task": "cover-spectrum",
//!   "solver": { "radius_schedule": [10, 100, 1000], "stop_early": false },
//!   "seed": 7
//! }
//! ```
//!
//! Edges are `[u, v]` or `[u, v, weight]`; `voltage` maps an edge index to
//! a generator word (unlisted edges carry the identity). Unknown keys are
//! rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use spectral_cover::{BaseGraph, DeckAction, Edge, TestFunction, Voltage};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: BaseSpec,
    pub action: ActionSpec,
    #[serde(default)]
    pub voltage: BTreeMap<usize, String>,
    pub task: Task,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum Task {
    Spectrum,
    CoverSpectrum,
    Folner,
    PushdownCheck,
    PullupDemo,
    VerifyAll,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub vertices: usize,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dirichlet: Vec<usize>,
    #[serde(default)]
    pub base_point: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeSpec {
    Unit(usize, usize),
    Weighted(usize, usize, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "provider", rename_all = "lowercase", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial { sheets: u32 },
    Zd { dim: u16 },
    Free { rank: u16 },
    Lamplighter,
    Heisenberg,
    /// `permutations[g][i]` is the image of state `i` under generator `g`.
    Schreier { labels: Vec<String>, permutations: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Named(NamedFunction),
    /// Sparse `{vertex: value}` map on the base graph.
    Values(BTreeMap<usize, f64>),
}

// Untagged enums buffer their input, and buffered object keys stay strings,
// so the vertex indices are parsed by hand.
impl<'de> Deserialize<'de> for FunctionSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Named(NamedFunction),
            Values(BTreeMap<String, f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Named(n) => Ok(FunctionSpec::Named(n)),
            Raw::Values(m) => m
                .into_iter()
                .map(|(k, x)| k.parse().map(|v| (v, x)).map_err(|_| D::Error::custom(format!("function key {k:?} is not a vertex"))))
                .collect::<Result<_, _>>()
                .map(FunctionSpec::Values),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedFunction {
    /// The base ground state from the dense solver.
    GroundState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    /// Residual tolerance of finite eigensolves.
    pub tol: f64,
    /// Trace-delta tolerance of exhaustion.
    pub trace_tol: f64,
    pub dense_limit: usize,
    pub radius_schedule: Vec<usize>,
    pub stop_early: bool,
    /// Cover window vertex budget.
    pub budget: usize,
    /// Følner search state budget.
    pub state_budget: usize,
    /// Følner parameters; `pullup-demo` runs them in order.
    pub epsilon: Vec<f64>,
    /// Følner words; all generators and inverses when empty.
    pub words: Vec<String>,
    /// Plateau radius for `pullup-demo`; derived from the support when absent.
    pub r: Option<usize>,
    /// Random test functions for `pushdown-check`.
    pub samples: usize,
    /// Window radius for `pushdown-check`.
    pub window_radius: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            tol: 1e-8,
            trace_tol: 1e-3,
            dense_limit: 512,
            radius_schedule: vec![2, 4, 8, 16],
            stop_early: true,
            budget: spectral_cover::cover::DEFAULT_VERTEX_BUDGET,
            state_budget: 100_000,
            epsilon: vec![0.1],
            words: Vec::new(),
            r: None,
            samples: 1000,
            window_radius: 6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A check on one report metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    /// Only evaluated when this task runs; every task when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub metric: String,
    pub op: Op,
    pub value: f64,
    #[serde(default)]
    pub tol: f64,
    pub basis: Basis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    /// `actual ≤ value + tol`
    Le,
    /// `actual ≥ value − tol`
    Ge,
    /// `|actual − value| ≤ tol`
    Approx,
}

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Follows from the definitions with no computation.
    Exact,
    /// Computed independently; the string names the method.
    Oracle(String),
}

impl Assertion {
    pub fn check(&self, actual: f64) -> bool {
        match self.op {
            Op::Le => actual <= self.value + self.tol,
            Op::Ge => actual >= self.value - self.tol,
            Op::Approx => (actual - self.value).abs() <= self.tol,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow::anyhow!("config line {} column {}: {e}", e.line(), e.column()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn base_graph(&self) -> spectral_cover::Result<BaseGraph> {
        let b = &self.base;
        let edges = b
            .edges
            .iter()
            .map(|e| match *e {
                EdgeSpec::Unit(u, v) => Edge { u, v, weight: 1.0 },
                EdgeSpec::Weighted(u, v, weight) => Edge { u, v, weight },
            })
            .collect();
        BaseGraph::new(
            b.vertices,
            edges,
            b.measure.clone().unwrap_or_else(|| vec![1.0; b.vertices]),
            b.potential.clone().unwrap_or_else(|| vec![0.0; b.vertices]),
            &b.dirichlet,
            b.base_point,
        )
    }

    pub fn deck_action(&self) -> spectral_cover::Result<DeckAction> {
        match &self.action {
            ActionSpec::Trivial { sheets } => DeckAction::trivial(*sheets),
            ActionSpec::Zd { dim } => DeckAction::zd(*dim),
            ActionSpec::Free { rank } => DeckAction::free(*rank),
            ActionSpec::Lamplighter => Ok(DeckAction::lamplighter()),
            ActionSpec::Heisenberg => Ok(DeckAction::heisenberg()),
            ActionSpec::Schreier { labels, permutations } => DeckAction::schreier(labels.clone(), permutations.clone()),
        }
    }

    pub fn voltage(&self, base: &BaseGraph, action: &DeckAction) -> spectral_cover::Result<Voltage> {
        let entries: Vec<(usize, &str)> = self.voltage.iter().map(|(e, w)| (*e, w.as_str())).collect();
        Voltage::parse(base, action, &entries)
    }

    pub fn sparse_function(&self) -> Option<spectral_cover::Result<TestFunction>> {
        match &self.function {
            Some(FunctionSpec::Values(map)) => Some(TestFunction::from_pairs(map.iter().map(|(v, x)| (*v, *x)))),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "name": "sample",
        "base": { "vertices": 4, "edges": [[0, 1], [1, 2, 0.5], [2, 3], [3, 0]],
                  "potential": [0, 1, 0, -1], "base_point": 0 },
        "action": { "provider": "schreier", "labels": ["s"], "permutations": [[1, 2, 0]] },
        "voltage": { "3": "s^-1" },
        "task": "pullup-demo",
        "solver": { "epsilon": [0.5, 0.1], "r": 2, "stop_early": false },
        "seed": 11,
        "output": { "path": "out.json", "format": "csv" },
        "function": { "0": 1.0, "2": -0.25 },
        "assertions": [ { "metric": "lambda0", "op": "approx", "value": 0.1, "tol": 1e-9,
                          "basis": { "oracle": "closed form" } } ]
    }"#;

    #[test]
    fn round_trip() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        let again = ExperimentConfig::parse(&c.to_json()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.solver.samples, 1000);
        assert_eq!(c.sparse_function().unwrap().unwrap().get(2), -0.25);
        let named = ExperimentConfig::parse(&SAMPLE.replace(r#"{ "0": 1.0, "2": -0.25 }"#, r#""ground-state""#)).unwrap();
        assert_eq!(named.function, Some(FunctionSpec::Named(NamedFunction::GroundState)));
        assert!(ExperimentConfig::parse(&SAMPLE.replace(r#""2": -0.25"#, r#""two": -0.25"#)).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for (from, to) in [
            (r#""seed": 11"#, r#""seed": 11, "colour": 1"#),
            (r#""r": 2"#, r#""r": 2, "radius": 3"#),
            (r#""provider": "schreier""#, r#""provider": "schreier", "extra": 0"#),
            (r#""tol": 1e-9"#, r#""tol": 1e-9, "why": "x""#),
        ] {
            assert!(ExperimentConfig::parse(&SAMPLE.replace(from, to)).is_err(), "{to}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = ExperimentConfig::parse("{\n  \"task\": 3\n}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn builds_domain_objects() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        let base = c.base_graph().unwrap();
        let action = c.deck_action().unwrap();
        let v = c.voltage(&base, &action).unwrap();
        assert_eq!(action.format_word(v.word(3)), "s^-1");
        assert_eq!(base.edges()[1].weight, 0.5);
    }
}
