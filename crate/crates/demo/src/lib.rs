//! Three operations for the browser page in `www/`: an exhaustion trace,
//! the pull-up cutoff profile on the ℤ² grid, and the Følner defect curve of
//! orbit balls. Each returns a JSON string; errors come back as
//! `{"error": "..."}` so the page can show them.

use serde_json::{json, Value};
use spectral_cover::folner::defects;
use spectral_cover::spectral::ground_state;
use spectral_cover::{
    build_cover, displacement_set, lambda0_exhaustion, lambda0_finite, orbit_ball, pullup, search_folner, BaseGraph,
    DeckAction, Error, ExhaustionOptions, SolverOptions, Voltage, Word,
};
use wasm_bindgen::prelude::*;

type Problem = (BaseGraph, Voltage, DeckAction);

fn wedge(loops: usize) -> BaseGraph {
    BaseGraph::unweighted(1, &vec![(0, 0); loops]).unwrap()
}

fn example(name: &str) -> Result<Problem, String> {
    let (base, action, words): (BaseGraph, DeckAction, Vec<(usize, &str)>) = match name {
        "line" => (wedge(1), DeckAction::zd(1).unwrap(), vec![(0, "g1")]),
        "tree" => (wedge(2), DeckAction::free(2).unwrap(), vec![(0, "a"), (1, "b")]),
        "heisenberg" => (wedge(2), DeckAction::heisenberg(), vec![(0, "x"), (1, "y")]),
        "lamplighter" => (wedge(2), DeckAction::lamplighter(), vec![(0, "t"), (1, "a")]),
        "z2" => {
            let edges = [(0, 1), (3, 2), (0, 3), (1, 2), (1, 0), (2, 3), (3, 0), (2, 1)];
            let base = BaseGraph::unweighted(4, &edges).unwrap().with_potential(vec![0.0, 1.0, 0.0, -1.0]).unwrap();
            (base, DeckAction::zd(2).unwrap(), vec![(4, "g1"), (5, "g1"), (6, "g2"), (7, "g2")])
        }
        other => return Err(format!("unknown example {other}")),
    };
    let voltage = Voltage::parse(&base, &action, &words).map_err(|e| e.to_string())?;
    Ok((base, voltage, action))
}

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Largest radius each example may use; the tree doubles its window size
/// three times per step.
fn radius_cap(name: &str) -> usize {
    match name {
        "tree" | "lamplighter" => 8,
        "heisenberg" => 10,
        _ => 200,
    }
}

pub fn exhaustion_trace_json(name: &str, max_radius: usize) -> Result<Value, String> {
    let (base, voltage, action) = example(name)?;
    let max_radius = max_radius.clamp(1, radius_cap(name));
    let schedule: Vec<usize> = (1..=max_radius).collect();
    let mut opts = ExhaustionOptions::new(schedule);
    opts.stop_early = false;
    let est = match lambda0_exhaustion(&base, &voltage, &action, &opts) {
        Ok(e) => e,
        Err(Error::NotConverged { estimate, .. }) => *estimate,
        Err(e) => return Err(e.to_string()),
    };
    let base_value = lambda0_finite(&base, &SolverOptions::default()).map_err(|e| e.to_string())?.value;
    Ok(json!({
        "example": name,
        "base_lambda0": base_value,
        "trace": est.trace.iter().map(|t| [t.radius as f64, t.value]).collect::<Vec<_>>(),
    }))
}

/// Pull-up of the ℤ²-over-C₄ ground state at plateau radius 2: the report
/// and the cutoff `χ` at the lifts of the base point along the first axis.
pub fn pullup_profile_json(epsilon: f64) -> Result<Value, String> {
    let (base, voltage, action) = example("z2")?;
    let r = 2;
    let (_, f) = ground_state(&base, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let start = 2 * (2 * r + 2);
    let g = displacement_set(&build_cover(&base, &voltage, &action, start).map_err(|e| e.to_string())?, r)
        .map_err(|e| e.to_string())?;
    let search = search_folner(&action, &g, epsilon, 200_000).map_err(|e| e.to_string())?;
    let cert = search.certificate.ok_or_else(|| format!("no Følner set found, best defect {}", search.best_max_defect))?;
    let mut radius = start;
    loop {
        let cover = build_cover(&base, &voltage, &action, radius).map_err(|e| e.to_string())?;
        match pullup(&f, &cover, &cert, r) {
            Ok(out) => {
                let g1 = Word(vec![action.letters()[0]]);
                let mut state = action.basepoint();
                // walk back to the edge of F, then across it
                while cover.vertex_of(0, &state).is_some_and(|z| out.cutoff.get(z) > 0.0) {
                    state = action.act_word(&state, &g1.inverse());
                }
                let mut profile = Vec::new();
                for k in 0.. {
                    let chi = cover.vertex_of(0, &state).map_or(0.0, |z| out.cutoff.get(z));
                    profile.push([k as f64, chi]);
                    if k > 0 && chi == 0.0 {
                        break;
                    }
                    state = action.act_word(&state, &g1);
                }
                let report = serde_json::to_value(&out.report).map_err(|e| e.to_string())?;
                return Ok(json!({ "report": report, "profile": profile }));
            }
            Err(Error::WindowTooSmall(_) | Error::InsufficientMargin(_)) => radius *= 2,
            Err(e) => return Err(e.to_string()),
        }
    }
}

/// Largest defect of the orbit ball of each radius under the generators
/// and their inverses.
pub fn folner_defects_json(name: &str, max_radius: usize) -> Result<Value, String> {
    let (_, _, action) = example(name)?;
    let max_radius = max_radius.clamp(1, radius_cap(name) + 4);
    let words: Vec<Word> = action.letters().into_iter().map(|l| Word(vec![l])).collect();
    let window = orbit_ball(&action, max_radius + 1, 2_000_000).map_err(|e| e.to_string())?;
    let mut curve = Vec::new();
    for rho in 0..=max_radius {
        let ball: Vec<usize> = (0..window.len()).filter(|&i| window.depth(i) <= rho).collect();
        let d = defects(&window, &ball, &words).map_err(|e| e.to_string())?;
        curve.push(json!({ "radius": rho, "size": ball.len(), "max_defect": d.iter().copied().fold(0.0, f64::max) }));
    }
    Ok(json!({ "example": name, "curve": curve }))
}

#[wasm_bindgen]
pub fn exhaustion_trace(name: &str, max_radius: u32) -> String {
    respond(exhaustion_trace_json(name, max_radius as usize))
}

#[wasm_bindgen]
pub fn pullup_profile(epsilon: f64) -> String {
    respond(pullup_profile_json(epsilon))
}

#[wasm_bindgen]
pub fn folner_defects(name: &str, max_radius: u32) -> String {
    respond(folner_defects_json(name, max_radius as usize))
}
