use serde::Serialize;

use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::graph::{ball, Graph};

/// Width-one cutoff profile: 1 up to `r`, linear down to 0 at `r + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub r: usize,
}

impl Profile {
    pub fn value(&self, t: f64) -> f64 {
        (self.r as f64 + 1.0 - t).clamp(0.0, 1.0)
    }

    pub fn at_distance(&self, d: usize) -> f64 {
        self.value(d as f64)
    }
}

/// `φ_y = ψ_y / (ψ₁ + Σψ)` for every marked fiber point `y`, and the rest
/// `φ₁ = ψ₁ / (ψ₁ + Σψ)` with `ψ₁ = max(1 − Σψ, 0)`.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    pub profile: Profile,
    /// Sparse `φ_y`, indexed like [`CoverGraph::marked_fiber`].
    pub phi: Vec<Vec<(usize, f64)>>,
    /// Dense `φ₁` over the window.
    pub phi_rest: Vec<f64>,
    /// `ball_multiplicity(r + 1)`
    pub multiplicity: usize,
}

/// Largest per-edge differences of the partition functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeReport {
    pub max_phi_slope: f64,
    pub max_rest_slope: f64,
    pub phi_bound: f64,
    pub rest_bound: f64,
}

impl SlopeReport {
    pub fn holds(&self) -> bool {
        self.max_phi_slope <= self.phi_bound && self.max_rest_slope <= self.rest_bound
    }
}

pub fn partition_of_unity(cover: &CoverGraph, r: usize) -> Result<PartitionOfUnity> {
    if cover.marked_fiber().is_empty() {
        return Err(Error::InvalidParameter("marked fiber is empty".into()));
    }
    if !cover.is_complete() && 2 * (r + 1) > cover.window_radius() {
        return Err(Error::InsufficientMargin(format!(
            "partition at r = {r} needs window radius >= {}, have {}",
            2 * (r + 1),
            cover.window_radius()
        )));
    }
    let profile = Profile { r };
    let multiplicity = cover.ball_multiplicity(r + 1)?;
    let n = cover.vertex_count();
    let psi: Vec<Vec<(usize, f64)>> = cover
        .marked_fiber()
        .iter()
        .map(|&y| {
            ball(cover, y, r + 1)
                .into_iter()
                .map(|(z, d)| (z, profile.at_distance(d)))
                .filter(|&(_, p)| p > 0.0)
                .collect()
        })
        .collect();
    let mut total = vec![0.0; n];
    for list in &psi {
        for &(z, p) in list {
            total[z] += p;
        }
    }
    let rest: Vec<f64> = total.iter().map(|&s| (1.0 - s).max(0.0)).collect();
    let norm: Vec<f64> = total.iter().zip(&rest).map(|(s, p)| s + p).collect();
    let phi = psi
        .into_iter()
        .map(|list| list.into_iter().map(|(z, p)| (z, p / norm[z])).collect())
        .collect();
    let phi_rest = rest.iter().zip(&norm).map(|(p, s)| p / s).collect();
    Ok(PartitionOfUnity {
        profile,
        phi,
        phi_rest,
        multiplicity,
    })
}

impl PartitionOfUnity {
    /// Largest deviation of `φ₁ + Σφ_y` from 1 over the window.
    pub fn sum_deviation(&self) -> f64 {
        let mut sum = self.phi_rest.clone();
        for list in &self.phi {
            for &(z, p) in list {
                sum[z] += p;
            }
        }
        sum.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Checks that each `φ_y` lives in the closed ball `B(y, r + 1)` and
    /// takes values in `[0, 1]`.
    pub fn check_supports(&self, cover: &CoverGraph) -> Result<()> {
        for (i, list) in self.phi.iter().enumerate() {
            let y = cover.marked_fiber()[i];
            let reach: std::collections::HashMap<usize, usize> =
                ball(cover, y, self.profile.r + 1).into_iter().collect();
            for &(z, p) in list {
                if !reach.contains_key(&z) || !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidFunction(format!("φ for fiber point {y} misbehaves at {z}")));
                }
            }
        }
        if self.phi_rest.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidFunction("φ₁ leaves [0, 1]".into()));
        }
        Ok(())
    }

    pub fn slopes(&self, cover: &CoverGraph) -> SlopeReport {
        let n = cover.vertex_count();
        let mut dense = vec![0.0; n];
        let mut max_phi: f64 = 0.0;
        for list in &self.phi {
            for &(z, p) in list {
                dense[z] = p;
            }
            // edges leaving the support are seen from inside it
            for &(z, p) in list {
                for (w, _) in cover.neighbors(z) {
                    max_phi = max_phi.max((p - dense[w]).abs());
                }
            }
            for &(z, _) in list {
                dense[z] = 0.0;
            }
        }
        let mut max_rest: f64 = 0.0;
        for z in 0..n {
            for (w, _) in cover.neighbors(z) {
                max_rest = max_rest.max((self.phi_rest[z] - self.phi_rest[w]).abs());
            }
        }
        let big_n = self.multiplicity as f64;
        SlopeReport {
            max_phi_slope: max_phi,
            max_rest_slope: max_rest,
            phi_bound: 3.0 * big_n,
            rest_bound: 6.0 * big_n * big_n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DeckAction;
    use crate::cover::build_cover;
    use crate::graph::{graph_distance, BaseGraph, Voltage};

    #[test]
    fn profile_shape() {
        let p = Profile { r: 2 };
        assert_eq!(p.at_distance(0), 1.0);
        assert_eq!(p.at_distance(2), 1.0);
        assert_eq!(p.value(2.5), 0.5);
        assert_eq!(p.at_distance(3), 0.0);
        for t in 0..10 {
            assert!((p.at_distance(t) - p.at_distance(t + 1)).abs() <= 1.0);
        }
    }

    #[test]
    fn single_fiber_point() {
        // trivial one-sheet cover of a path: the fiber over the base point is one vertex
        let base = BaseGraph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let cover = build_cover(&base, &Voltage::identity(&base), &DeckAction::trivial(1).unwrap(), 10).unwrap();
        let pu = partition_of_unity(&cover, 1).unwrap();
        let y = cover.marked_fiber()[0];
        let d = graph_distance(&cover, y, 100).unwrap();
        for z in 0..cover.vertex_count() {
            let phi_y = pu.phi[0].iter().find(|e| e.0 == z).map_or(0.0, |e| e.1);
            if d[z].unwrap() <= 1 {
                assert_eq!((phi_y, pu.phi_rest[z]), (1.0, 0.0));
            } else {
                assert_eq!((phi_y, pu.phi_rest[z]), (0.0, 1.0));
            }
        }
    }

    #[test]
    fn z_over_triangle_ratios() {
        let base = BaseGraph::cycle(3).unwrap();
        let action = DeckAction::zd(1).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(2, "g1")]).unwrap();
        let cover = build_cover(&base, &voltage, &action, 20).unwrap();
        let pu = partition_of_unity(&cover, 2).unwrap();
        assert!(pu.sum_deviation() <= 1e-12);
        // brute force from BFS distances
        let fiber = cover.marked_fiber();
        let dists: Vec<Vec<Option<usize>>> = fiber.iter().map(|&y| graph_distance(&cover, y, 100).unwrap()).collect();
        let mut saw_shared = false;
        for z in (0..cover.vertex_count()).filter(|&z| cover.depth(z) <= 8) {
            let close: Vec<usize> = (0..fiber.len()).filter(|&i| dists[i][z].unwrap() <= 2).collect();
            saw_shared |= close.len() == 2;
            for (i, list) in pu.phi.iter().enumerate() {
                let got = list.iter().find(|e| e.0 == z).map_or(0.0, |e| e.1);
                let want = if close.contains(&i) { 1.0 / close.len() as f64 } else { 0.0 };
                assert!((got - want).abs() < 1e-15);
            }
        }
        assert!(saw_shared);
        assert!(pu.slopes(&cover).holds());
        pu.check_supports(&cover).unwrap();
    }

    #[test]
    fn margin_is_enforced() {
        let base = BaseGraph::cycle(3).unwrap();
        let action = DeckAction::zd(1).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(2, "g1")]).unwrap();
        let cover = build_cover(&base, &voltage, &action, 5).unwrap();
        assert!(matches!(partition_of_unity(&cover, 2), Err(Error::InsufficientMargin(_))));
    }
}
