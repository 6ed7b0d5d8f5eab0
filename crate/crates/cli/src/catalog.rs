//! Built-in examples. Each entry is a complete configuration whose
//! assertions say what the run must reproduce and where the expected value
//! comes from.

use serde::Serialize;
use serde_json::json;

use crate::config::{Assertion, ExperimentConfig};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

impl CatalogEntry {
    pub fn expected(&self) -> &[Assertion] {
        &self.config.assertions
    }
}

fn entry(name: &'static str, description: &'static str, mut config: serde_json::Value) -> CatalogEntry {
    config["name"] = json!(name);
    let config: ExperimentConfig = serde_json::from_value(config).unwrap_or_else(|e| panic!("catalog entry {name}: {e}"));
    CatalogEntry {
        name,
        description,
        config,
    }
}

fn wedge(loops: usize) -> serde_json::Value {
    json!({ "vertices": 1, "edges": vec![[0, 0]; loops] })
}

/// C₄ with every edge doubled: vertices (0,0), (1,0), (1,1), (0,1); the
/// second copy of each edge carries a ℤ² translation, so the cover is the
/// square grid.
fn doubled_c4() -> serde_json::Value {
    json!({
        "vertices": 4,
        "edges": [[0, 1], [3, 2], [0, 3], [1, 2], [1, 0], [2, 3], [3, 0], [2, 1]],
        "potential": [0.0, 1.0, 0.0, -1.0]
    })
}

pub fn catalog() -> Vec<CatalogEntry> {
    let sqrt5 = 5f64.sqrt();
    let tree_limit = 4.0 - 2.0 * 3f64.sqrt();
    vec![
        entry(
            "c4-potential",
            "4-cycle with potential (0, 1, 0, -1); bottom of the 4x4 Schrödinger matrix",
            json!({
                "base": { "vertices": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]], "potential": [0.0, 1.0, 0.0, -1.0] },
                "action": { "provider": "trivial", "sheets": 1 },
                "task": "spectrum",
                "assertions": [
                    { "task": "spectrum", "metric": "lambda0", "op": "approx", "value": 2.0 - sqrt5, "tol": 1e-10,
                      "basis": { "oracle": "characteristic polynomial of [[2,-1,0,-1],[-1,3,-1,0],[0,-1,2,-1],[-1,0,-1,1]]; smallest root 2 - sqrt 5" } }
                ]
            }),
        ),
        entry(
            "line-over-loop",
            "Z-cover of a single loop: the integer line, bottom 0",
            json!({
                "base": wedge(1),
                "action": { "provider": "zd", "dim": 1 },
                "voltage": { "0": "g1" },
                "task": "cover-spectrum",
                "solver": { "radius_schedule": [10, 50, 100, 250, 500, 1000], "stop_early": false },
                "assertions": [
                    { "task": "cover-spectrum", "metric": "gap", "op": "le", "value": 1e-3,
                      "basis": { "oracle": "Dirichlet path eigenvalue 2 - 2cos(pi/(2R+2)) at R = 1000" } },
                    { "task": "cover-spectrum", "metric": "base_lambda0", "op": "approx", "value": 0.0, "tol": 1e-12, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "trace_monotone", "op": "approx", "value": 1.0, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "tree-over-wedge",
            "free(2) cover of the two-loop wedge: the 4-regular tree, bottom 4 - 2 sqrt 3",
            json!({
                "base": wedge(2),
                "action": { "provider": "free", "rank": 2 },
                "voltage": { "0": "a", "1": "b" },
                "task": "cover-spectrum",
                "solver": { "radius_schedule": [2, 4, 6, 8, 10, 12], "stop_early": false },
                "assertions": [
                    { "task": "cover-spectrum", "metric": "lambda0", "op": "ge", "value": 0.53,
                      "basis": { "oracle": "radial reduction of tree balls, dense solve; limit 4 - 2 sqrt 3" } },
                    { "task": "cover-spectrum", "metric": "lambda0", "op": "le", "value": 0.65,
                      "basis": { "oracle": "radial reduction of tree balls, dense solve: 0.61242 at R = 12" } },
                    { "task": "cover-spectrum", "metric": "lambda0", "op": "ge", "value": tree_limit,
                      "basis": { "oracle": "regular-tree bottom d - 2 sqrt(d - 1) is a lower bound for every ball" } },
                    { "task": "cover-spectrum", "metric": "base_lambda0", "op": "approx", "value": 0.0, "tol": 1e-12, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "trace_monotone", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "folner", "metric": "found", "op": "approx", "value": 0.0, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "z2-over-c4-potential",
            "Z^2 grid over the doubled 4-cycle with potential (0, 1, 0, -1); amenable, so the bottoms agree",
            json!({
                "base": doubled_c4(),
                "action": { "provider": "zd", "dim": 2 },
                "voltage": { "4": "g1", "5": "g1", "6": "g2", "7": "g2" },
                "task": "cover-spectrum",
                "function": "ground-state",
                "solver": {
                    "radius_schedule": [5, 10, 20, 30, 40, 50, 60], "stop_early": false,
                    "epsilon": [0.5, 0.1, 0.02], "r": 2, "state_budget": 1000000
                },
                "assertions": [
                    { "task": "spectrum", "metric": "lambda0", "op": "approx", "value": -0.1231056256176605, "tol": 1e-10,
                      "basis": { "oracle": "numpy eigvalsh of the 4x4 matrix with doubled edges" } },
                    { "task": "cover-spectrum", "metric": "gap", "op": "le", "value": 0.05,
                      "basis": { "oracle": "amenable cover: the exhaustion decreases to the base bottom" } },
                    { "task": "cover-spectrum", "metric": "min_trace_gap", "op": "ge", "value": -1e-9, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "trace_monotone", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "pullup-demo", "metric": "excess_nonincreasing", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "pullup-demo", "metric": "final_excess_ratio", "op": "le", "value": 0.05,
                      "basis": { "oracle": "pull-up estimate: excess tends to 0 with epsilon" } }
                ]
            }),
        ),
        entry(
            "z-over-c3",
            "Z-cover of the triangle through one edge: the infinite ladder of triangles unrolled into a line",
            json!({
                "base": { "vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]] },
                "action": { "provider": "zd", "dim": 1 },
                "voltage": { "2": "g1" },
                "task": "cover-spectrum",
                "solver": { "radius_schedule": [4, 8, 16, 32, 64], "stop_early": false, "window_radius": 20 },
                "assertions": [
                    { "task": "cover-spectrum", "metric": "trace_monotone", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "gap", "op": "le", "value": 1e-2,
                      "basis": { "oracle": "cover is the line: 2 - 2cos(pi/(2R+2)) with R about 64" } },
                    { "task": "pushdown-check", "metric": "violations", "op": "approx", "value": 0.0, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "trivial-c3-two-sheets",
            "Two disjoint copies of a triangle with potential; push-down is exact on sheet-symmetric functions",
            json!({
                "base": { "vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]], "potential": [0.4, -0.3, 0.0] },
                "action": { "provider": "trivial", "sheets": 2 },
                "task": "pushdown-check",
                "assertions": [
                    { "task": "pushdown-check", "metric": "violations", "op": "approx", "value": 0.0, "basis": "exact" },
                    { "task": "pushdown-check", "metric": "max_mass_rel_error", "op": "le", "value": 1e-12, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "gap", "op": "approx", "value": 0.0, "tol": 1e-10, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "lamplighter-over-wedge",
            "Lamplighter group over the two-loop wedge (t moves, a toggles); amenable of exponential growth",
            json!({
                "base": wedge(2),
                "action": { "provider": "lamplighter" },
                "voltage": { "0": "t", "1": "a" },
                "task": "folner",
                "solver": { "epsilon": [0.2], "state_budget": 100000 },
                "assertions": [
                    { "task": "folner", "metric": "found", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "folner", "metric": "reverified", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "folner", "metric": "max_defect", "op": "le", "value": 0.2, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "heisenberg-over-wedge",
            "Discrete Heisenberg group over the two-loop wedge; polynomial growth, balls are Følner",
            json!({
                "base": wedge(2),
                "action": { "provider": "heisenberg" },
                "voltage": { "0": "x", "1": "y" },
                "task": "folner",
                "solver": { "epsilon": [0.3], "state_budget": 200000, "radius_schedule": [2, 4, 6, 8] },
                "assertions": [
                    { "task": "folner", "metric": "found", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "folner", "metric": "reverified", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "cover-spectrum", "metric": "min_trace_gap", "op": "ge", "value": -1e-9, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "schreier-over-wedge",
            "Five-sheet cover of the two-loop wedge from a transitive permutation action; finite, bottom 0",
            json!({
                "base": wedge(2),
                "action": { "provider": "schreier", "labels": ["s", "u"],
                            "permutations": [[1, 2, 3, 4, 0], [1, 0, 2, 4, 3]] },
                "voltage": { "0": "s", "1": "u" },
                "task": "cover-spectrum",
                "solver": { "radius_schedule": [1, 2, 3, 4] },
                "assertions": [
                    { "task": "cover-spectrum", "metric": "lambda0", "op": "approx", "value": 0.0, "tol": 1e-10,
                      "basis": "exact" },
                    { "task": "folner", "metric": "max_defect", "op": "approx", "value": 0.0, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "z2-unit-moves",
            "Z^2 acting on itself with the four unit moves; squares and diamonds are Følner",
            json!({
                "base": wedge(2),
                "action": { "provider": "zd", "dim": 2 },
                "voltage": { "0": "g1", "1": "g2" },
                "task": "folner",
                "solver": { "epsilon": [0.1], "words": ["g1", "g1^-1", "g2", "g2^-1"] },
                "assertions": [
                    { "task": "folner", "metric": "found", "op": "approx", "value": 1.0, "basis": "exact" },
                    { "task": "folner", "metric": "max_defect", "op": "le", "value": 0.1, "basis": "exact" },
                    { "task": "folner", "metric": "reverified", "op": "approx", "value": 1.0, "basis": "exact" }
                ]
            }),
        ),
        entry(
            "free2-folner",
            "free(2) acting on itself: no Følner set exists, the search must report exhaustion",
            json!({
                "base": wedge(2),
                "action": { "provider": "free", "rank": 2 },
                "voltage": { "0": "a", "1": "b" },
                "task": "folner",
                "solver": { "epsilon": [0.3], "state_budget": 100000, "words": ["a", "b", "a^-1", "b^-1"] },
                "assertions": [
                    { "task": "folner", "metric": "found", "op": "approx", "value": 0.0, "basis": "exact" },
                    { "task": "folner", "metric": "min_candidate_defect", "op": "ge", "value": 0.5,
                      "basis": { "oracle": "a finite set in the 4-regular tree keeps at most |F| - 1 edges inside, so some generator moves half of it out" } }
                ]
            }),
        ),
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}
