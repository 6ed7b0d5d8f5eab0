//! Følner cutoff of a lifted base function.
//!
//! With `P` the window fiber points whose states lie in the certificate's
//! `F`, the cutoff is `χ = Σ_{y ∈ P} φ_y` and the competitor is `χ·(f∘π)`.
//! Every window edge is booked to the Voronoi cell of its stored tail, so
//! the cell energies add up to the energy of the competitor. A cell `D_y`
//! in `Q` (the competitor does not vanish on its stencil) is clean when it is
//! a transversal of interior vertices and `χ = 1` on the lifted support of
//! `f` throughout its stencil; a clean cell then carries exactly the base
//! energy and mass.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::displacement::G_CONSTRUCTION;
use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::folner::FolnerCertificate;
use crate::function::TestFunction;
use crate::graph::{ball, graph_distance, Graph};
use crate::spectral::{energy, mass, rayleigh};

#[derive(Clone, Debug, Serialize)]
pub struct PullupReport {
    pub r: usize,
    pub epsilon: f64,
    #[serde(rename = "F_size")]
    pub f_size: usize,
    #[serde(rename = "G_size")]
    pub g_size: usize,
    /// `ball_multiplicity(2r + 1)`
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Q_minus")]
    pub q_minus: usize,
    #[serde(rename = "Q_plus")]
    pub q_plus: usize,
    /// Largest cell energy over `Q₋`, computed with `|V|` in place of `V`.
    #[serde(rename = "C")]
    pub c: f64,
    /// `max |V|` on the support of the base function.
    #[serde(rename = "C0")]
    pub c0: f64,
    /// `|G| · N`
    #[serde(rename = "D")]
    pub d: f64,
    /// `εD`; the bound below is vacuous once this reaches 1.
    pub epsilon_d: f64,
    pub rayleigh_base: f64,
    pub rayleigh_lifted: f64,
    pub excess: f64,
    /// `εCD / ((1 − εD)·mass(f))`, plus `|R(f)|·εD/(1 − εD)` when `R(f) < 0`;
    /// absent when `εD ≥ 1`.
    pub excess_bound: Option<f64>,
    /// The same estimate with the measured `|Q₋|`, `|Q₊|` in place of `εD|F|`.
    pub measured_bound: Option<f64>,
    /// `ε |F| |G| N`, compared with `Q_minus`.
    pub q_minus_bound: f64,
    pub q_minus_within_bound: bool,
    /// Largest deviation of a clean cell's energy or mass from the base values.
    pub clean_cell_deviation: f64,
    pub mass_base: f64,
    pub mass_lifted: f64,
    pub energy_base: f64,
    pub energy_lifted: f64,
    pub g_construction: String,
}

pub struct Pullup {
    pub function: TestFunction,
    pub cutoff: TestFunction,
    pub report: PullupReport,
}

pub fn pullup(base_f: &TestFunction, cover: &CoverGraph, cert: &FolnerCertificate, r: usize) -> Result<Pullup> {
    let base = cover.base();
    if base_f.is_zero() {
        return Err(Error::EmptyCompetitor);
    }
    base_f.check_admissible(base)?;
    let x = base.base_point();
    let dist = graph_distance(base, x, r)?;
    if let Some(v) = base_f.support().find(|&v| dist[v].is_none()) {
        return Err(Error::InsufficientMargin(format!("base vertex {v} of the support is farther than r = {r}")));
    }
    let reach = 2 * r + 2;
    if !cover.is_complete() && cover.window_radius() < 2 * reach {
        return Err(Error::InsufficientMargin(format!(
            "pull-up at r = {r} needs window radius >= {}, have {}",
            2 * reach,
            cover.window_radius()
        )));
    }
    if cert.states.is_empty() {
        return Err(Error::InvalidParameter("empty Følner set".into()));
    }

    // P: lifts of the base point over F
    let mut p = Vec::with_capacity(cert.states.len());
    for s in &cert.states {
        let y = cover.vertex_of(x, s).ok_or_else(|| {
            Error::WindowTooSmall(format!("Følner state {} lies outside the window", cover.action().describe(s)))
        })?;
        // every fiber point that can share a vertex with B(y, r+1) must be present
        if !cover.is_complete() && cover.depth(y) + 2 * r + 2 > cover.window_radius() {
            return Err(Error::InsufficientMargin(format!(
                "Følner state {} sits at depth {}; the window needs radius >= {}",
                cover.action().describe(s),
                cover.depth(y),
                cover.depth(y) + 2 * r + 2
            )));
        }
        p.push(y);
    }

    // χ(z) = #{y ∈ P : d(z,y) ≤ r} / #{y ∈ fiber : d(z,y) ≤ r}; both counts
    // are only needed near P
    let mut in_p: HashMap<usize, u32> = HashMap::new();
    for &y in &p {
        for (z, _) in ball(cover, y, r) {
            *in_p.entry(z).or_default() += 1;
        }
    }
    let near: BTreeSet<usize> = p.iter().flat_map(|&y| ball(cover, y, 2 * r).into_iter().map(|(z, _)| z)).collect();
    let mut all: HashMap<usize, u32> = HashMap::new();
    for &y in near.iter().filter(|&&z| cover.project(z) == x) {
        for (z, _) in ball(cover, y, r) {
            if in_p.contains_key(&z) {
                *all.entry(z).or_default() += 1;
            }
        }
    }
    let chi_of = |z: usize| in_p.get(&z).map_or(0.0, |&k| k as f64 / all[&z] as f64);
    let cutoff = TestFunction::from_pairs(in_p.keys().map(|&z| (z, chi_of(z))))?;
    let h = TestFunction::from_pairs(in_p.keys().map(|&z| (z, chi_of(z) * base_f.get(cover.project(z)))))?;
    if h.is_zero() {
        return Err(Error::EmptyCompetitor);
    }
    h.check_admissible(cover)?;

    let report = classify(cover, base_f, &h, &cutoff, cert, r)?;
    Ok(Pullup {
        function: h,
        cutoff,
        report,
    })
}

fn classify(
    cover: &CoverGraph,
    base_f: &TestFunction,
    h: &TestFunction,
    chi: &TestFunction,
    cert: &FolnerCertificate,
    r: usize,
) -> Result<PullupReport> {
    let base = cover.base();
    let domains = cover.fundamental_domains()?;
    let fiber = cover.marked_fiber();
    let nb = base.vertex_count();

    // cells that can meet the stencil of supp h
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    for z in h.support() {
        touched.insert(domains.owner_of(z));
        for (w, _) in cover.neighbors(z) {
            touched.insert(domains.owner_of(w));
        }
    }
    let cells = {
        let mut cells: BTreeMap<usize, Vec<usize>> = touched.iter().map(|&c| (c, Vec::new())).collect();
        // the cells near the support are small; scan only their neighborhood
        let mut frontier: BTreeSet<usize> = touched.iter().map(|&c| fiber[c]).collect();
        let mut seen = frontier.clone();
        while !frontier.is_empty() {
            let mut next = BTreeSet::new();
            for &z in &frontier {
                if let Some(list) = cells.get_mut(&domains.owner_of(z)) {
                    list.push(z);
                    for (w, _) in cover.neighbors(z) {
                        if touched.contains(&domains.owner_of(w)) && seen.insert(w) {
                            next.insert(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        cells
    };

    let energy_base = energy(base, base_f);
    let mass_base = mass(base, base_f);
    let rayleigh_base = energy_base / mass_base;
    let mut q_minus = 0usize;
    let mut q_plus = 0usize;
    let mut c: f64 = 0.0;
    let mut c_mass: f64 = 0.0;
    let mut clean_dev: f64 = 0.0;
    let mut energy_sum = 0.0;
    let mut mass_sum = 0.0;
    for members in cells.values() {
        let mut e = 0.0;
        let mut e_abs = 0.0;
        let mut m = 0.0;
        let mut nonzero = false;
        let mut cut = false;
        let mut over = vec![0u32; nb];
        let mut interior = true;
        for &z in members {
            let hz = h.get(z);
            let mz = cover.measure(z) * hz * hz;
            m += mz;
            e += cover.potential(z) * mz;
            e_abs += cover.potential(z).abs() * mz;
            over[cover.project(z)] += 1;
            interior &= cover.is_interior(z);
            nonzero |= hz != 0.0;
            cut |= base_f.get(cover.project(z)) != 0.0 && chi.get(z) < 1.0;
            let weights = cover.neighbors(z);
            for ((w, weight), (_, _, forward)) in weights.zip(cover.half_edges(z)) {
                if !forward {
                    continue;
                }
                let d = hz - h.get(w);
                e += weight * d * d;
                e_abs += weight * d * d;
                nonzero |= h.get(w) != 0.0;
                cut |= base_f.get(cover.project(w)) != 0.0 && chi.get(w) < 1.0;
            }
        }
        if !nonzero {
            continue;
        }
        energy_sum += e;
        mass_sum += m;
        let transversal = over.iter().all(|&k| k == 1);
        if cut || !transversal || !interior {
            q_minus += 1;
            c = c.max(e_abs);
            c_mass = c_mass.max(m);
        } else {
            q_plus += 1;
            let scale = 1.0 + energy_base.abs() + mass_base;
            clean_dev = clean_dev.max((e - energy_base).abs() / scale).max((m - mass_base).abs() / scale);
        }
    }

    let energy_lifted = energy(cover, h);
    let mass_lifted = mass(cover, h);
    let scale = 1.0 + energy_lifted.abs();
    if (energy_sum - energy_lifted).abs() > 1e-9 * scale || (mass_sum - mass_lifted).abs() > 1e-9 * (1.0 + mass_lifted) {
        return Err(Error::InvalidGraph(format!(
            "cell bookkeeping lost energy: {energy_sum} vs {energy_lifted}"
        )));
    }
    let rayleigh_lifted = rayleigh(cover, h)?;
    let n = cover.ball_multiplicity(2 * r + 1)?;
    let g_size = cert.words.len();
    let d = (g_size * n) as f64;
    let eps = cert.epsilon;
    let c0 = base_f.support().map(|v| base.potential(v).abs()).fold(0.0, f64::max);
    let negative = (-rayleigh_base).max(0.0);
    let excess_bound = (eps * d < 1.0).then(|| {
        eps * d * (c + negative * c_mass) / ((1.0 - eps * d) * mass_base)
    });
    let measured_bound = (q_plus > 0).then(|| q_minus as f64 * (c + negative * c_mass) / (q_plus as f64 * mass_base));
    let q_minus_bound = eps * (cert.states.len() * g_size * n) as f64;
    Ok(PullupReport {
        r,
        epsilon: eps,
        f_size: cert.states.len(),
        g_size,
        n,
        q_minus,
        q_plus,
        c,
        c0,
        d,
        epsilon_d: eps * d,
        rayleigh_base,
        rayleigh_lifted,
        excess: rayleigh_lifted - rayleigh_base,
        excess_bound,
        measured_bound,
        q_minus_bound,
        q_minus_within_bound: q_minus as f64 <= q_minus_bound,
        clean_cell_deviation: clean_dev,
        mass_base,
        mass_lifted,
        energy_base,
        energy_lifted,
        g_construction: G_CONSTRUCTION.to_string(),
    })
}
