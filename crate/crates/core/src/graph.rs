//! Finite weighted base graphs and the read-only graph interface shared with
//! covering windows.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::action::{DeckAction, Word};
use crate::error::{Error, Result};

/// Read-only view of a weighted graph with vertex measure and potential.
///
/// Neighbors are reported per half-edge, so a vertex with parallel edges
/// lists the same neighbor several times and a loop contributes two
/// half-edges back to the vertex itself.
pub trait Graph {
    fn vertex_count(&self) -> usize;
    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_;
    fn measure(&self, v: usize) -> f64;
    fn potential(&self, v: usize) -> f64;
    fn is_dirichlet(&self, v: usize) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A finite weighted graph with vertex measure, potential, an optional
/// Dirichlet set and a marked base point.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseGraph {
    edges: Vec<Edge>,
    measure: Vec<f64>,
    potential: Vec<f64>,
    dirichlet: Vec<bool>,
    base_point: usize,
    // per vertex: (neighbor, edge index, true when the vertex is the edge's `u`)
    half_edges: Vec<Vec<HalfEdge>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub to: usize,
    pub edge: usize,
    pub forward: bool,
}

impl BaseGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        measure: Vec<f64>,
        potential: Vec<f64>,
        dirichlet: &[usize],
        base_point: usize,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if vertex_count == 0 {
            return bad("graph has no vertices".into());
        }
        if measure.len() != vertex_count || potential.len() != vertex_count {
            return bad("measure and potential need one entry per vertex".into());
        }
        if let Some(m) = measure.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return bad(format!("measure {m} is not positive and finite"));
        }
        if let Some(p) = potential.iter().find(|p| !p.is_finite()) {
            return bad(format!("potential {p} is not finite"));
        }
        let mut half_edges = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return bad(format!("edge {i} has an endpoint outside 0..{vertex_count}"));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return bad(format!("edge {i} has weight {} (must be positive and finite)", e.weight));
            }
            half_edges[e.u].push(HalfEdge { to: e.v, edge: i, forward: true });
            half_edges[e.v].push(HalfEdge { to: e.u, edge: i, forward: false });
        }
        let mut dir = vec![false; vertex_count];
        for &d in dirichlet {
            if d >= vertex_count {
                return bad(format!("dirichlet vertex {d} out of range"));
            }
            dir[d] = true;
        }
        if base_point >= vertex_count {
            return bad(format!("base point {base_point} out of range"));
        }
        if dir[base_point] {
            return bad("base point lies in the Dirichlet set".into());
        }
        let g = BaseGraph {
            edges,
            measure,
            potential,
            dirichlet: dir,
            base_point,
            half_edges,
        };
        let dist = graph_distance(&g, base_point, usize::MAX)?;
        if dist.iter().any(Option::is_none) {
            return bad("graph is not connected".into());
        }
        Ok(g)
    }

    /// Unit measure, zero potential, no Dirichlet set, base point 0.
    pub fn unweighted(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let edges = edges.iter().map(|&(u, v)| Edge { u, v, weight: 1.0 }).collect();
        Self::new(vertex_count, edges, vec![1.0; vertex_count], vec![0.0; vertex_count], &[], 0)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::unweighted(n, &edges)
    }

    pub fn with_potential(mut self, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != self.vertex_count() || potential.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGraph("potential needs one finite entry per vertex".into()));
        }
        self.potential = potential;
        Ok(self)
    }

    pub fn with_dirichlet(self, dirichlet: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        Self::new(n, self.edges, self.measure, self.potential, dirichlet, self.base_point)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potential
    }

    pub fn dirichlet_set(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.dirichlet[v]).collect()
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn half_edges(&self, v: usize) -> &[HalfEdge] {
        &self.half_edges[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.half_edges[v].len()
    }
}

impl Graph for BaseGraph {
    fn vertex_count(&self) -> usize {
        self.measure.len()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.half_edges[v].iter().map(|h| (h.to, self.edges[h.edge].weight))
    }

    fn measure(&self, v: usize) -> f64 {
        self.measure[v]
    }

    fn potential(&self, v: usize) -> f64 {
        self.potential[v]
    }

    fn is_dirichlet(&self, v: usize) -> bool {
        self.dirichlet[v]
    }
}

/// Assignment of a generator word to every base edge, oriented from `u` to
/// `v`. Traversing an edge backwards applies the inverse word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Voltage {
    words: Vec<Word>,
}

impl Voltage {
    /// Identity on every edge.
    pub fn identity(base: &BaseGraph) -> Self {
        Voltage {
            words: vec![Word::identity(); base.edges().len()],
        }
    }

    pub fn from_words(base: &BaseGraph, words: Vec<Word>) -> Result<Self> {
        if words.len() != base.edges().len() {
            return Err(Error::InvalidParameter(format!(
                "voltage has {} words for {} edges",
                words.len(),
                base.edges().len()
            )));
        }
        Ok(Voltage { words })
    }

    /// Builds a voltage from `(edge index, word text)` pairs; unlisted edges
    /// carry the identity.
    pub fn parse(base: &BaseGraph, action: &DeckAction, entries: &[(usize, &str)]) -> Result<Self> {
        let mut v = Self::identity(base);
        for &(edge, text) in entries {
            if edge >= v.words.len() {
                return Err(Error::InvalidParameter(format!("voltage on unknown edge {edge}")));
            }
            v.words[edge] = action.parse_word(text)?;
        }
        Ok(v)
    }

    /// Word read along the half-edge: the edge word forwards, its inverse
    /// backwards.
    pub fn along(&self, half: &HalfEdge) -> Word {
        if half.forward {
            self.words[half.edge].clone()
        } else {
            self.words[half.edge].inverse()
        }
    }

    pub fn word(&self, edge: usize) -> &Word {
        &self.words[edge]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Rejects words that reference generators the action does not have.
    pub fn check_against(&self, action: &DeckAction) -> Result<()> {
        let k = action.generator_count();
        for w in &self.words {
            if let Some(l) = w.0.iter().find(|l| l.generator as usize >= k) {
                return Err(Error::UnknownGenerator(format!("#{}", l.generator)));
            }
        }
        Ok(())
    }
}

/// Hop distances from `source`, `None` beyond `cap` or unreachable.
pub fn graph_distance<G: Graph>(g: &G, source: usize, cap: usize) -> Result<Vec<Option<usize>>> {
    if source >= g.vertex_count() {
        return Err(Error::InvalidVertex(source));
    }
    let mut dist = vec![None; g.vertex_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        if d == cap {
            continue;
        }
        for (w, _) in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Hop ball of radius `cap` around `source` as `(vertex, distance)` pairs in
/// BFS order. Cost is proportional to the ball, not the graph.
pub fn ball<G: Graph>(g: &G, source: usize, cap: usize) -> Vec<(usize, usize)> {
    let mut seen = HashMap::from([(source, 0usize)]);
    let mut order = vec![(source, 0)];
    let mut head = 0;
    while head < order.len() {
        let (u, d) = order[head];
        head += 1;
        if d == cap {
            continue;
        }
        for (w, _) in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                e.insert(d + 1);
                order.push((w, d + 1));
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_on_c4() {
        let c4 = BaseGraph::cycle(4).unwrap();
        let d = graph_distance(&c4, 0, usize::MAX).unwrap();
        assert_eq!(d[0], Some(0));
        assert_eq!(d[2], Some(2));
        let capped = graph_distance(&c4, 0, 1).unwrap();
        assert_eq!(capped[2], None);
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert!(BaseGraph::unweighted(3, &[(0, 1)]).is_err(), "disconnected");
        assert!(BaseGraph::unweighted(2, &[(0, 2)]).is_err(), "bad endpoint");
        let e = vec![Edge { u: 0, v: 1, weight: 0.0 }];
        assert!(BaseGraph::new(2, e, vec![1.0; 2], vec![0.0; 2], &[], 0).is_err());
        let e = vec![Edge { u: 0, v: 1, weight: 1.0 }];
        assert!(BaseGraph::new(2, e.clone(), vec![1.0, -1.0], vec![0.0; 2], &[], 0).is_err());
        assert!(BaseGraph::new(2, e, vec![1.0; 2], vec![0.0; 2], &[0], 0).is_err(), "base point in dirichlet set");
    }

    #[test]
    fn loops_and_parallel_edges_are_allowed() {
        let g = BaseGraph::unweighted(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(g.degree(0), 4);
        let g = BaseGraph::unweighted(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.neighbors(0).filter(|&(w, _)| w == 1).count(), 2);
    }

    #[test]
    fn ball_matches_distance() {
        let c = BaseGraph::cycle(9).unwrap();
        let d = graph_distance(&c, 3, 2).unwrap();
        let b = ball(&c, 3, 2);
        assert_eq!(b.len(), d.iter().filter(|x| x.is_some()).count());
        for (v, dv) in b {
            assert_eq!(d[v], Some(dv));
        }
    }
}
