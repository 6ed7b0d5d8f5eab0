use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::graph::Graph;

/// `f₀(x) = (Σ_{z ∈ π⁻¹(x)} f(z)²)^{1/2}`.
///
/// Mass and potential energy are preserved; on every base edge the lifted
/// differences satisfy the reverse triangle inequality in ℓ², so the edge
/// energy can only drop.
pub fn pushdown(cover: &CoverGraph, f: &TestFunction) -> Result<TestFunction> {
    f.check_admissible(cover)?;
    let mut sq = vec![0.0; cover.base().vertex_count()];
    for (z, x) in f.iter() {
        if !cover.is_interior(z) {
            return Err(Error::InsufficientMargin(format!(
                "support vertex {z} touches the window boundary"
            )));
        }
        sq[cover.project(z)] += x * x;
    }
    TestFunction::from_pairs(sq.into_iter().enumerate().filter(|&(_, s)| s > 0.0).map(|(v, s)| (v, s.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DeckAction;
    use crate::cover::build_cover;
    use crate::graph::{BaseGraph, Voltage};
    use crate::spectral::{mass, potential_energy, rayleigh};

    fn two_sheets() -> CoverGraph {
        let base = BaseGraph::cycle(3).unwrap().with_potential(vec![0.5, -0.2, 0.1]).unwrap();
        build_cover(&base, &Voltage::identity(&base), &DeckAction::trivial(2).unwrap(), 4).unwrap()
    }

    fn sheet(cover: &CoverGraph, v: usize, s: usize) -> usize {
        cover.fiber(v).unwrap()[s]
    }

    #[test]
    fn one_sheet_support() {
        let cover = two_sheets();
        let vals = [1.0, -2.0, 0.5];
        let f = TestFunction::from_pairs((0..3).map(|v| (sheet(&cover, v, 1), vals[v]))).unwrap();
        let f0 = pushdown(&cover, &f).unwrap();
        for v in 0..3 {
            assert_eq!(f0.get(v), vals[v].abs());
        }
        let (a, b) = (rayleigh(cover.base(), &f0).unwrap(), rayleigh(&cover, &f).unwrap());
        // |f| has no larger quotient than f; here f changes sign, so strictly smaller
        assert!(a <= b + 1e-12);
    }

    #[test]
    fn both_sheets_identical() {
        let cover = two_sheets();
        let vals = [1.0, 2.0, 0.5];
        let f = TestFunction::from_pairs((0..3).flat_map(|v| [(sheet(&cover, v, 0), vals[v]), (sheet(&cover, v, 1), vals[v])]))
            .unwrap();
        let f0 = pushdown(&cover, &f).unwrap();
        for v in 0..3 {
            assert!((f0.get(v) - 2f64.sqrt() * vals[v]).abs() < 1e-15);
        }
        let (a, b) = (rayleigh(cover.base(), &f0).unwrap(), rayleigh(&cover, &f).unwrap());
        assert!((a - b).abs() < 1e-14);
        assert!((mass(cover.base(), &f0) - mass(&cover, &f)).abs() < 1e-14);
        assert!((potential_energy(cover.base(), &f0) - potential_energy(&cover, &f)).abs() < 1e-14);
    }

    #[test]
    fn indicator_on_the_line() {
        let base = BaseGraph::unweighted(1, &[(0, 0)]).unwrap();
        let action = DeckAction::zd(1).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(0, "g1")]).unwrap();
        let cover = build_cover(&base, &voltage, &action, 5).unwrap();
        let zero = cover.seeds()[0];
        let one = cover.neighbors(zero).map(|(w, _)| w).max_by_key(|&w| cover.state(w).clone()).unwrap();
        let f = TestFunction::from_pairs([(zero, 1.0), (one, 1.0)]).unwrap();
        let f0 = pushdown(&cover, &f).unwrap();
        assert_eq!(f0.get(0), 2f64.sqrt());
        // two boundary edges of the pair, unit mass each
        assert_eq!(rayleigh(&cover, &f).unwrap(), 1.0);
        assert_eq!(rayleigh(cover.base(), &f0).unwrap(), 0.0);
    }

    #[test]
    fn boundary_support_is_rejected() {
        let cover = two_sheets();
        let base = BaseGraph::unweighted(1, &[(0, 0)]).unwrap();
        let action = DeckAction::zd(1).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(0, "g1")]).unwrap();
        let line = build_cover(&base, &voltage, &action, 2).unwrap();
        let edge = (0..line.vertex_count()).find(|&z| !line.is_interior(z)).unwrap();
        let f = TestFunction::from_pairs([(edge, 1.0)]).unwrap();
        assert!(matches!(pushdown(&line, &f), Err(Error::InsufficientMargin(_))));
        assert!(cover.is_complete());
    }
}
