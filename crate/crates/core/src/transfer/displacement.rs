use std::collections::{BTreeMap, BTreeSet};

use crate::action::{State, Word};
use crate::cover::{CoverGraph, DEFAULT_VERTEX_BUDGET};
use crate::error::{Error, Result};
use crate::folner::orbit_ball;
use crate::graph::Graph;

/// How [`displacement_set`] builds `G`; copied into every pull-up report.
pub const G_CONSTRUCTION: &str = "voltages of closed base walks at the base point of length <= 2r+2, \
                                  freely reduced, one shortest word per action on the fiber states";

/// Group elements that move a fiber point by at most `2r + 2` hops, as
/// freely reduced voltage words of closed walks at the base point.
///
/// Any deck element `g` with `d(y, y·g) ≤ 2r + 2` is the voltage of the
/// projection of a shortest path from `y` to `y·g`, so this set contains
/// every such element. Words acting identically on the fiber states are
/// merged, keeping the shortest. Sorted by length, then by rendering.
pub fn displacement_set(cover: &CoverGraph, r: usize) -> Result<Vec<Word>> {
    let reach = 2 * r + 2;
    if !cover.is_complete() && cover.window_radius() < reach + 1 {
        return Err(Error::InsufficientMargin(format!(
            "displacement set at r = {r} needs window radius >= {}, have {}",
            reach + 1,
            cover.window_radius()
        )));
    }
    let base = cover.base();
    let x = base.base_point();
    let half_words: Vec<Vec<Word>> = (0..base.vertex_count())
        .map(|v| base.half_edges(v).iter().map(|h| cover.voltage().along(h)).collect())
        .collect();
    // (vertex, reduced word) pairs reachable by walks of the current length
    let mut layer: BTreeMap<(usize, Vec<(u16, bool)>), Word> = BTreeMap::new();
    layer.insert((x, Vec::new()), Word::identity());
    let mut seen = layer.clone();
    for _ in 0..reach {
        let mut next = BTreeMap::new();
        for ((v, _), w) in &layer {
            for (h, hw) in base.half_edges(*v).iter().zip(&half_words[*v]) {
                let mut word = w.clone();
                for &l in &hw.0 {
                    word.push_reduced(l);
                }
                let key = (h.to, word.0.iter().map(|l| (l.generator, l.inverse)).collect());
                if !seen.contains_key(&key) {
                    seen.insert(key.clone(), word.clone());
                    next.insert(key, word);
                }
            }
        }
        layer = next;
    }
    let action = cover.action();
    let mut words: Vec<Word> = seen.into_iter().filter(|((v, _), _)| *v == x).map(|(_, w)| w).collect();
    words.sort_by_cached_key(|w| (w.len(), action.format_word(w)));
    // keep the first word of each permutation of the fiber states; the
    // infinite providers act freely, so the basepoint image decides
    let probes: Vec<State> = if action.is_finite() {
        orbit_ball(action, usize::MAX, DEFAULT_VERTEX_BUDGET)?.states().to_vec()
    } else {
        vec![action.basepoint()]
    };
    let mut classes = BTreeSet::new();
    Ok(words
        .into_iter()
        .filter(|w| classes.insert(probes.iter().map(|s| action.act_word(s, w)).collect::<Vec<_>>()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DeckAction;
    use crate::cover::build_cover;
    use crate::graph::{BaseGraph, Voltage};

    #[test]
    fn line() {
        let base = BaseGraph::unweighted(1, &[(0, 0)]).unwrap();
        let action = DeckAction::zd(1).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(0, "g1")]).unwrap();
        let cover = build_cover(&base, &voltage, &action, 3).unwrap();
        let g: Vec<String> = displacement_set(&cover, 0).unwrap().iter().map(|w| action.format_word(w)).collect();
        assert_eq!(g, ["e", "g1", "g1^-1", "g1 g1", "g1^-1 g1^-1"]);
        assert!(displacement_set(&cover, 1).is_err());
    }

    #[test]
    fn tree() {
        let base = BaseGraph::unweighted(1, &[(0, 0), (0, 0)]).unwrap();
        let action = DeckAction::free(2).unwrap();
        let voltage = Voltage::parse(&base, &action, &[(0, "a"), (1, "b")]).unwrap();
        let cover = build_cover(&base, &voltage, &action, 3).unwrap();
        assert_eq!(displacement_set(&cover, 0).unwrap().len(), 17);
    }

    #[test]
    fn trivial() {
        let base = BaseGraph::cycle(4).unwrap();
        let cover = build_cover(&base, &Voltage::identity(&base), &DeckAction::trivial(1).unwrap(), 3).unwrap();
        assert_eq!(displacement_set(&cover, 1).unwrap(), vec![Word::identity()]);
    }
}
