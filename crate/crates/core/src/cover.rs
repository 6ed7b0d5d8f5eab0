//! Window-truncated covering graphs built from a voltage assignment into a
//! deck action.
//!
//! A window is the hop ball of radius `window_radius` around the lifts of the
//! base point over the action's root states. Vertices are numbered layer by
//! layer, and within a layer by base vertex id then fiber encoding, so two
//! builds from identical inputs are identical.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::action::{DeckAction, State, Word};
use crate::error::{Error, Result};
use crate::graph::{ball, BaseGraph, Graph, Voltage};

pub const DEFAULT_VERTEX_BUDGET: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: BaseGraph,
    action: DeckAction,
    voltage: Voltage,
    window_radius: usize,
    vertices: Vec<(u32, State)>,
    index: HashMap<(u32, State), u32>,
    depth: Vec<u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    // base edge id << 1 | forward
    half: Vec<u32>,
    interior: Vec<bool>,
    seeds: Vec<usize>,
    marked_fiber: Vec<usize>,
    complete: bool,
}

impl CoverGraph {
    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn action(&self) -> &DeckAction {
        &self.action
    }

    pub fn voltage(&self) -> &Voltage {
        &self.voltage
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    /// π: cover vertex → base vertex.
    pub fn project(&self, z: usize) -> usize {
        self.vertices[z].0 as usize
    }

    pub fn state(&self, z: usize) -> &State {
        &self.vertices[z].1
    }

    pub fn vertex_of(&self, base_vertex: usize, state: &State) -> Option<usize> {
        // the map is keyed by owned states; this clone is cheap (inline bytes)
        self.index.get(&(base_vertex as u32, state.clone())).map(|&i| i as usize)
    }

    /// Hop distance from the seed set (the marked basepoint lifts).
    pub fn depth(&self, z: usize) -> usize {
        self.depth[z] as usize
    }

    /// Whether every lifted half-edge at `z` lands inside the window.
    pub fn is_interior(&self, z: usize) -> bool {
        self.interior[z]
    }

    /// True when the window has no boundary, i.e. it is the whole cover.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    /// Window vertices over the base point, sorted by fiber encoding.
    pub fn marked_fiber(&self) -> &[usize] {
        &self.marked_fiber
    }

    /// `(neighbor, base edge id, forward)` for every half-edge at `z`.
    pub fn half_edges(&self, z: usize) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        (self.offsets[z]..self.offsets[z + 1]).map(move |k| {
            let h = self.half[k];
            (self.targets[k] as usize, (h >> 1) as usize, h & 1 == 1)
        })
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Window vertices projecting to base vertex `v`, sorted by fiber encoding.
    pub fn fiber(&self, v: usize) -> Result<Vec<usize>> {
        if v >= self.base.vertex_count() {
            return Err(Error::InvalidVertex(v));
        }
        let mut out: Vec<usize> = (0..self.vertices.len()).filter(|&z| self.project(z) == v).collect();
        out.sort_by(|&a, &b| self.state(a).cmp(self.state(b)));
        Ok(out)
    }

    /// Sorted vertex and edge lists, one per line; used for golden tests.
    pub fn canonical_serialization(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "window_radius {}", self.window_radius);
        for (z, (v, s)) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "v {z} {v} {} {}", s.to_hex(), self.depth[z]);
        }
        for z in 0..self.vertices.len() {
            for (w, e, fwd) in self.half_edges(z) {
                if fwd {
                    let _ = writeln!(out, "e {z} {w} {e}");
                }
            }
        }
        out
    }

    /// Checks the covering property: every interior vertex carries exactly
    /// one lift of each base half-edge at its projection, landing over the
    /// right endpoint; boundary vertices carry a sub-multiset.
    pub fn check_covering(&self) -> Result<()> {
        for z in 0..self.vertices.len() {
            let v = self.project(z);
            let mut expected: Vec<(usize, usize, bool)> = self
                .base
                .half_edges(v)
                .iter()
                .map(|h| (h.to, h.edge, h.forward))
                .collect();
            expected.sort_unstable();
            let mut got: Vec<(usize, usize, bool)> =
                self.half_edges(z).map(|(w, e, f)| (self.project(w), e, f)).collect();
            got.sort_unstable();
            let ok = if self.interior[z] {
                got == expected
            } else {
                got.iter().all(|h| expected.binary_search(h).is_ok()) && got.len() < expected.len()
            };
            if !ok {
                return Err(Error::InvalidGraph(format!("covering property fails at cover vertex {z}")));
            }
        }
        Ok(())
    }

    /// Partition of the window into Voronoi cells of the marked fiber.
    pub fn fundamental_domains(&self) -> Result<FundamentalDomainAssignment> {
        if self.marked_fiber.is_empty() {
            return Err(Error::InvalidParameter("marked fiber is empty".into()));
        }
        let n = self.vertices.len();
        let mut owner = vec![u32::MAX; n];
        let mut distance = vec![u32::MAX; n];
        let mut tie_broken = vec![false; n];
        let mut layer = Vec::with_capacity(self.marked_fiber.len());
        for (i, &y) in self.marked_fiber.iter().enumerate() {
            owner[y] = i as u32;
            distance[y] = 0;
            layer.push(y);
        }
        let mut d = 0u32;
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &u in &layer {
                for (w, _) in self.neighbors(u) {
                    if distance[w] == u32::MAX {
                        distance[w] = d + 1;
                        owner[w] = owner[u];
                        next.push(w);
                    } else if distance[w] == d + 1 && owner[w] != owner[u] {
                        // marked_fiber is sorted by encoding: smaller index wins
                        tie_broken[w] = true;
                        owner[w] = owner[w].min(owner[u]);
                    }
                }
            }
            layer = next;
            d += 1;
        }
        if owner.iter().any(|&o| o == u32::MAX) {
            return Err(Error::InvalidGraph("window component without a marked fiber point".into()));
        }
        Ok(FundamentalDomainAssignment {
            owner,
            distance,
            tie_broken,
        })
    }

    /// Largest number of marked fiber points within hop distance `rho` of a
    /// single inner-window vertex. Requires `2·rho <= window_radius` unless
    /// the window is the whole cover.
    pub fn ball_multiplicity(&self, rho: usize) -> Result<usize> {
        if !self.complete && 2 * rho > self.window_radius {
            return Err(Error::WindowTooSmall(format!(
                "ball multiplicity at radius {rho} needs window radius >= {}, have {}",
                2 * rho,
                self.window_radius
            )));
        }
        let mut count = vec![0u32; self.vertices.len()];
        for &y in &self.marked_fiber {
            for (z, _) in ball(self, y, rho) {
                count[z] += 1;
            }
        }
        let inner = |z: usize| self.complete || self.depth(z) + rho <= self.window_radius;
        Ok((0..count.len()).filter(|&z| inner(z)).map(|z| count[z] as usize).max().unwrap_or(0))
    }
}

impl Graph for CoverGraph {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let edges = self.base.edges();
        (self.offsets[v]..self.offsets[v + 1])
            .map(move |k| (self.targets[k] as usize, edges[(self.half[k] >> 1) as usize].weight))
    }

    fn measure(&self, v: usize) -> f64 {
        self.base.measure(self.project(v))
    }

    fn potential(&self, v: usize) -> f64 {
        self.base.potential(self.project(v))
    }

    fn is_dirichlet(&self, v: usize) -> bool {
        self.base.is_dirichlet(self.project(v))
    }
}

/// Owner of each window vertex among the marked fiber (as an index into
/// [`CoverGraph::marked_fiber`]), with hop distance to it.
#[derive(Clone, Debug)]
pub struct FundamentalDomainAssignment {
    pub owner: Vec<u32>,
    pub distance: Vec<u32>,
    /// Set where several fiber points were equidistant and the smallest
    /// encoding won.
    pub tie_broken: Vec<bool>,
}

impl FundamentalDomainAssignment {
    pub fn owner_of(&self, z: usize) -> usize {
        self.owner[z] as usize
    }

    /// Cells as vertex lists, indexed like the marked fiber.
    pub fn cells(&self, fiber_len: usize) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); fiber_len];
        for (z, &o) in self.owner.iter().enumerate() {
            cells[o as usize].push(z);
        }
        cells
    }
}

pub fn build_cover(base: &BaseGraph, voltage: &Voltage, action: &DeckAction, window_radius: usize) -> Result<CoverGraph> {
    build_cover_with_budget(base, voltage, action, window_radius, DEFAULT_VERTEX_BUDGET)
}

pub fn build_cover_with_budget(
    base: &BaseGraph,
    voltage: &Voltage,
    action: &DeckAction,
    window_radius: usize,
    budget: usize,
) -> Result<CoverGraph> {
    voltage.check_against(action)?;
    if voltage.words().len() != base.edges().len() {
        return Err(Error::InvalidParameter("voltage does not match base edges".into()));
    }
    let half_words: Vec<Vec<Word>> = (0..base.vertex_count())
        .map(|v| base.half_edges(v).iter().map(|h| voltage.along(h)).collect())
        .collect();
    let x = base.base_point() as u32;

    let mut vertices: Vec<(u32, State)> = Vec::new();
    let mut index: HashMap<(u32, State), u32> = HashMap::new();
    let mut depth: Vec<u32> = Vec::new();
    let mut frontier: BTreeSet<(u32, State)> = action.roots().into_iter().map(|s| (x, s)).collect();
    let mut d = 0u32;
    loop {
        if vertices.len() + frontier.len() > budget {
            return Err(Error::WindowTooLarge { budget });
        }
        let start = vertices.len();
        for key in std::mem::take(&mut frontier) {
            index.insert(key.clone(), vertices.len() as u32);
            vertices.push(key);
            depth.push(d);
        }
        if d as usize == window_radius || start == vertices.len() {
            break;
        }
        for z in start..vertices.len() {
            let (v, ref s) = vertices[z];
            for (h, w) in base.half_edges(v as usize).iter().zip(&half_words[v as usize]) {
                let key = (h.to as u32, action.act_word(s, w));
                if !index.contains_key(&key) {
                    frontier.insert(key);
                }
            }
        }
        d += 1;
    }

    let n = vertices.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    let mut half = Vec::new();
    let mut interior = Vec::with_capacity(n);
    offsets.push(0);
    for (v, s) in &vertices {
        let hs = base.half_edges(*v as usize);
        let before = targets.len();
        for (h, w) in hs.iter().zip(&half_words[*v as usize]) {
            if let Some(&t) = index.get(&(h.to as u32, action.act_word(s, w))) {
                targets.push(t);
                half.push(((h.edge as u32) << 1) | h.forward as u32);
            }
        }
        interior.push(targets.len() - before == hs.len());
        offsets.push(targets.len());
    }
    let complete = interior.iter().all(|&i| i);
    let seeds: Vec<usize> = (0..n).filter(|&z| depth[z] == 0).collect();
    let mut marked_fiber: Vec<usize> = (0..n).filter(|&z| vertices[z].0 == x).collect();
    marked_fiber.sort_by(|&a, &b| vertices[a].1.cmp(&vertices[b].1));

    Ok(CoverGraph {
        base: base.clone(),
        action: action.clone(),
        voltage: voltage.clone(),
        window_radius,
        vertices,
        index,
        depth,
        offsets,
        targets,
        half,
        interior,
        seeds,
        marked_fiber,
        complete,
    })
}
