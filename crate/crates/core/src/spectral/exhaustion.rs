//! Dirichlet exhaustion of an infinite cover.
//!
//! The estimate at radius `R` is the Dirichlet λ₀ of the window of radius
//! `R + 1` with every boundary vertex (one missing a lifted neighbor)
//! pinned to zero. The windows of a schedule are nested, so the trace is
//! nonincreasing. Only the largest window is built; smaller ones are read off
//! it through the layer depths, which agree because vertices are numbered
//! layer by layer.

use std::collections::HashMap;

use super::{smallest_eigenpair, Method, SolverOptions, SpectralEstimate, SymmetricOperator, TracePoint};
use crate::action::DeckAction;
use crate::cover::{build_cover_with_budget, CoverGraph, DEFAULT_VERTEX_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{BaseGraph, Graph, Voltage};

#[derive(Clone, Debug)]
pub struct ExhaustionOptions {
    pub schedule: Vec<usize>,
    /// Trace-delta tolerance.
    pub tol: f64,
    pub stop_early: bool,
    pub budget: usize,
    pub solver: SolverOptions,
}

impl ExhaustionOptions {
    pub fn new(schedule: Vec<usize>) -> Self {
        ExhaustionOptions {
            schedule,
            tol: 1e-3,
            stop_early: true,
            budget: DEFAULT_VERTEX_BUDGET,
            solver: SolverOptions::default(),
        }
    }
}

/// Whether `z` is a free vertex of the window of radius `outer` read inside
/// the larger window `cover`.
fn free_in(cover: &CoverGraph, z: usize, outer: usize) -> bool {
    if cover.is_dirichlet(z) || cover.depth(z) > outer {
        return false;
    }
    if cover.depth(z) < outer {
        // every neighbor sits at depth <= outer and the stencil is complete
        return cover.is_interior(z);
    }
    cover.is_interior(z) && cover.neighbors(z).all(|(w, _)| cover.depth(w) <= outer)
}

pub fn lambda0_exhaustion(
    base: &BaseGraph,
    voltage: &Voltage,
    action: &DeckAction,
    opts: &ExhaustionOptions,
) -> Result<SpectralEstimate> {
    let schedule = &opts.schedule;
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty radius schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("radius schedule must be strictly increasing".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("trace tolerance must be positive".into()));
    }
    let largest = *schedule.last().unwrap() + 1;
    let cover = build_cover_with_budget(base, voltage, action, largest, opts.budget)?;

    let mut trace: Vec<TracePoint> = Vec::new();
    let mut warm: HashMap<usize, f64> = HashMap::new();
    let mut delta = f64::INFINITY;
    for &radius in schedule {
        let outer = radius + 1;
        let op = SymmetricOperator::assemble(&cover, |z| !free_in(&cover, z, outer))?;
        let start: Vec<f64> = op.free_vertices().iter().map(|z| warm.get(z).copied().unwrap_or(0.0)).collect();
        let pair = smallest_eigenpair(&op, Some(&start), &opts.solver)?;
        warm = op.free_vertices().iter().copied().zip(pair.vector.iter().copied()).collect();
        if let Some(prev) = trace.last() {
            delta = (prev.value - pair.value).abs();
        }
        trace.push(TracePoint {
            radius,
            value: pair.value,
            residual: pair.residual,
        });
        if opts.stop_early && delta < opts.tol {
            break;
        }
    }
    let last = *trace.last().unwrap();
    let estimate = SpectralEstimate {
        value: last.value,
        residual: last.residual,
        method: Method::Exhaustion,
        trace,
    };
    // a finished window has nothing left to exhaust
    if delta < opts.tol || cover.is_complete() {
        Ok(estimate)
    } else {
        Err(Error::NotConverged {
            delta,
            estimate: Box::new(estimate),
        })
    }
}
