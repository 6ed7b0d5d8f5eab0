// shared builders; not every test file uses all of them
#![allow(dead_code)]

use spectral_cover::{BaseGraph, DeckAction, Voltage};

pub fn line() -> (BaseGraph, Voltage, DeckAction) {
    let base = BaseGraph::unweighted(1, &[(0, 0)]).unwrap();
    let action = DeckAction::zd(1).unwrap();
    let voltage = Voltage::parse(&base, &action, &[(0, "g1")]).unwrap();
    (base, voltage, action)
}

pub fn tree() -> (BaseGraph, Voltage, DeckAction) {
    let base = BaseGraph::unweighted(1, &[(0, 0), (0, 0)]).unwrap();
    let action = DeckAction::free(2).unwrap();
    let voltage = Voltage::parse(&base, &action, &[(0, "a"), (1, "b")]).unwrap();
    (base, voltage, action)
}

/// ℤ² grid as a cover of C₄ with doubled edges; V = (0, 1, 0, −1).
pub fn z2_over_c4() -> (BaseGraph, Voltage, DeckAction) {
    let edges = [(0, 1), (3, 2), (0, 3), (1, 2), (1, 0), (2, 3), (3, 0), (2, 1)];
    let base = BaseGraph::unweighted(4, &edges).unwrap().with_potential(vec![0.0, 1.0, 0.0, -1.0]).unwrap();
    let action = DeckAction::zd(2).unwrap();
    let voltage = Voltage::parse(&base, &action, &[(4, "g1"), (5, "g1"), (6, "g2"), (7, "g2")]).unwrap();
    (base, voltage, action)
}

pub fn z_over_c3() -> (BaseGraph, Voltage, DeckAction) {
    let base = BaseGraph::cycle(3).unwrap();
    let action = DeckAction::zd(1).unwrap();
    let voltage = Voltage::parse(&base, &action, &[(2, "g1")]).unwrap();
    (base, voltage, action)
}

pub fn two_sheets() -> (BaseGraph, Voltage, DeckAction) {
    let base = BaseGraph::cycle(3).unwrap().with_potential(vec![0.4, -0.3, 0.0]).unwrap();
    (base.clone(), Voltage::identity(&base), DeckAction::trivial(2).unwrap())
}

pub fn heisenberg_over_wedge() -> (BaseGraph, Voltage, DeckAction) {
    let base = BaseGraph::unweighted(1, &[(0, 0), (0, 0)]).unwrap();
    let action = DeckAction::heisenberg();
    let voltage = Voltage::parse(&base, &action, &[(0, "x"), (1, "y")]).unwrap();
    (base, voltage, action)
}
