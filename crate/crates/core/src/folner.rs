//! Følner sets for the right action of the deck group on fiber states.
//!
//! A set `F` is `(G, ε)`-Følner when `|F \ Fg| ≤ ε|F|` for every `g ∈ G`.
//! Since `s ↦ s·g` is injective, `|F \ Fg| = #{s ∈ F : s·g ∉ F}`, which is
//! what is counted here. Words act letter by letter through the explored
//! move table, so no word problem has to be solved.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize, Serializer};

use crate::action::{DeckAction, Letter, Provider, State, Word};
use crate::error::{Error, Result};

const UNEXPLORED: u32 = u32::MAX;

/// Explored part of the orbit of the basepoint, with the move table.
#[derive(Clone, Debug)]
pub struct ActionWindow {
    action: DeckAction,
    letters: Vec<Letter>,
    states: Vec<State>,
    index: HashMap<State, u32>,
    depth: Vec<u32>,
    // moves[s * letters + l]
    moves: Vec<u32>,
    radius: usize,
    closed: bool,
}

impl ActionWindow {
    pub fn action(&self) -> &DeckAction {
        &self.action
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// Word-length distance from the basepoint.
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i] as usize
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    /// States whose moves may leave the explored set.
    pub fn is_frontier(&self, i: usize) -> bool {
        !self.closed && self.depth[i] as usize == self.radius
    }

    /// True when the whole orbit has been explored.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn letter_slot(&self, l: Letter) -> usize {
        2 * l.generator as usize + l.inverse as usize
    }

    /// `i · l`, if explored.
    pub fn step(&self, i: usize, l: Letter) -> Option<usize> {
        let m = self.moves[i * self.letters.len() + self.letter_slot(l)];
        (m != UNEXPLORED).then_some(m as usize)
    }

    /// `i · w`, acting letter by letter; `None` once a move is unexplored.
    pub fn walk(&self, i: usize, w: &Word) -> Option<usize> {
        w.0.iter().try_fold(i, |s, &l| self.step(s, l))
    }

    /// Adds the next word-length layer.
    pub fn grow(&mut self, budget: usize) -> Result<()> {
        if self.closed {
            self.radius += 1;
            return Ok(());
        }
        let k = self.letters.len();
        let layer: Vec<usize> = (0..self.states.len()).filter(|&i| self.depth[i] as usize == self.radius).collect();
        let mut fresh = BTreeSet::new();
        for &i in &layer {
            for &l in &self.letters {
                let t = self.action.act(&self.states[i], l);
                if !self.index.contains_key(&t) {
                    fresh.insert(t);
                }
            }
        }
        if self.states.len() + fresh.len() > budget {
            return Err(Error::StateBudget { budget });
        }
        let d = self.radius as u32 + 1;
        for t in fresh {
            self.index.insert(t.clone(), self.states.len() as u32);
            self.states.push(t);
            self.depth.push(d);
            self.moves.extend(std::iter::repeat(UNEXPLORED).take(k));
        }
        self.radius += 1;
        // fill moves of the new layer and of the old frontier
        let mut new_frontier = false;
        for i in 0..self.states.len() {
            let di = self.depth[i];
            if di + 1 < self.radius as u32 {
                continue;
            }
            for (slot, &l) in self.letters.iter().enumerate() {
                if self.moves[i * k + slot] != UNEXPLORED {
                    continue;
                }
                match self.index.get(&self.action.act(&self.states[i], l)) {
                    Some(&t) => self.moves[i * k + slot] = t,
                    None => new_frontier = true,
                }
            }
        }
        self.closed = !new_frontier;
        Ok(())
    }
}

/// All states reachable from the basepoint by words of length `≤ radius`.
pub fn orbit_ball(action: &DeckAction, radius: usize, budget: usize) -> Result<ActionWindow> {
    let letters = action.letters();
    let start = action.basepoint();
    let mut w = ActionWindow {
        action: action.clone(),
        letters: letters.clone(),
        states: vec![start.clone()],
        index: HashMap::from([(start.clone(), 0)]),
        depth: vec![0],
        moves: vec![UNEXPLORED; letters.len()],
        radius: 0,
        closed: false,
    };
    let mut open = false;
    for (slot, &l) in letters.iter().enumerate() {
        if action.act(&start, l) == start {
            w.moves[slot] = 0;
        } else {
            open = true;
        }
    }
    w.closed = !open;
    if budget == 0 {
        return Err(Error::StateBudget { budget });
    }
    while w.radius < radius && !w.closed {
        w.grow(budget)?;
    }
    // a finite orbit is complete at every larger radius
    w.radius = w.radius.max(radius);
    Ok(w)
}

/// A verified `(G, ε)`-Følner set.
#[derive(Clone, Debug, PartialEq)]
pub struct FolnerCertificate {
    pub states: Vec<State>,
    pub words: Vec<Word>,
    /// `words` rendered with the action's labels.
    pub word_labels: Vec<String>,
    pub epsilon: f64,
    /// `|F \ Fg| / |F|` for each word, in order.
    pub defects: Vec<f64>,
}

impl FolnerCertificate {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().copied().fold(0.0, f64::max)
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    /// Rebuilds a certificate from its serialized record, re-parsing words
    /// against `action`. The defects are taken as recorded; call
    /// [`verify_folner`] to check them.
    pub fn from_record(record: &CertificateRecord, action: &DeckAction) -> Result<Self> {
        let states = record.states.iter().map(|h| State::from_hex(h)).collect::<Result<Vec<_>>>()?;
        for s in &states {
            action.validate_state(s)?;
        }
        let words = record.words.iter().map(|w| action.parse_word(w)).collect::<Result<Vec<_>>>()?;
        let defects = record
            .words
            .iter()
            .map(|w| {
                record
                    .defects
                    .get(w)
                    .copied()
                    .ok_or_else(|| Error::InvalidParameter(format!("no defect recorded for `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FolnerCertificate {
            word_labels: words.iter().map(|w| action.format_word(w)).collect(),
            states,
            words,
            epsilon: record.epsilon,
            defects,
        })
    }
}

/// JSON shape of a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateRecord {
    #[serde(rename = "F")]
    pub states: Vec<String>,
    #[serde(rename = "G")]
    pub words: Vec<String>,
    pub epsilon: f64,
    pub defects: BTreeMap<String, f64>,
}

impl From<&FolnerCertificate> for CertificateRecord {
    fn from(c: &FolnerCertificate) -> Self {
        CertificateRecord {
            states: c.states.iter().map(State::to_hex).collect(),
            words: c.word_labels.clone(),
            epsilon: c.epsilon,
            defects: c.word_labels.iter().cloned().zip(c.defects.iter().copied()).collect(),
        }
    }
}

impl Serialize for FolnerCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRecord::from(self).serialize(s)
    }
}

/// Outcome of [`verify_folner`].
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accepted(FolnerCertificate),
    Rejected { defects: Vec<f64> },
}

impl Verdict {
    pub fn defects(&self) -> &[f64] {
        match self {
            Verdict::Accepted(c) => &c.defects,
            Verdict::Rejected { defects } => defects,
        }
    }

    pub fn certificate(self) -> Option<FolnerCertificate> {
        match self {
            Verdict::Accepted(c) => Some(c),
            Verdict::Rejected { .. } => None,
        }
    }
}

/// Exact defects of `f` (window indices) for each word; a move leaving the
/// explored window is an error, not a defect.
pub fn defects(window: &ActionWindow, f: &[usize], words: &[Word]) -> Result<Vec<f64>> {
    let mut member = vec![false; window.len()];
    for &i in f {
        member[i] = true;
    }
    words
        .iter()
        .map(|w| {
            let mut exits = 0usize;
            for &i in f {
                let t = window.walk(i, w).ok_or_else(|| {
                    Error::WindowTooSmall(format!(
                        "move `{}` from state {} is unexplored",
                        window.action.format_word(w),
                        window.action.describe(&window.states[i])
                    ))
                })?;
                exits += usize::from(!member[t]);
            }
            Ok(exits as f64 / f.len() as f64)
        })
        .collect()
}

/// Checks one `(G, ε)` pair exactly.
pub fn verify_folner(window: &ActionWindow, f: &[State], g: &[Word], epsilon: f64) -> Result<Verdict> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let set: BTreeSet<&State> = f.iter().collect();
    if set.is_empty() {
        return Err(Error::InvalidParameter("empty Følner candidate".into()));
    }
    let idx = set
        .iter()
        .map(|s| {
            window
                .index_of(s)
                .ok_or_else(|| Error::WindowTooSmall(format!("state {} is unexplored", window.action.describe(s))))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = defects(window, &idx, g)?;
    if d.iter().all(|&x| x <= epsilon) {
        Ok(Verdict::Accepted(FolnerCertificate {
            states: set.into_iter().cloned().collect(),
            words: g.to_vec(),
            word_labels: g.iter().map(|w| window.action.format_word(w)).collect(),
            epsilon,
            defects: d,
        }))
    } else {
        Ok(Verdict::Rejected { defects: d })
    }
}

/// One set examined by [`search_folner`].
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub size: usize,
    pub max_defect: f64,
}

/// What [`search_folner`] saw, with the certificate when one was found.
#[derive(Clone, Debug, Serialize)]
pub struct FolnerSearch {
    pub certificate: Option<FolnerCertificate>,
    pub candidates: Vec<Candidate>,
    /// Lowest maximal defect seen, with its set (hex states) and per-word defects.
    pub best_max_defect: f64,
    pub best_states: Vec<String>,
    pub best_defects: BTreeMap<String, f64>,
    pub states_explored: usize,
    /// Word-length radius of the explored window; every candidate and its
    /// moves fit in the orbit ball of this radius.
    pub window_radius: usize,
    pub budget: usize,
}

impl FolnerSearch {
    pub fn found(&self) -> bool {
        self.certificate.is_some()
    }
}

struct Best {
    max: f64,
    states: Vec<usize>,
    defects: Vec<f64>,
}

/// Orbit balls of increasing radius, then a greedy peeling pass started from
/// the largest ball. The first set meeting `ε` is returned as a certificate;
/// otherwise the report lists every candidate tried.
pub fn search_folner(action: &DeckAction, g: &[Word], epsilon: f64, budget: usize) -> Result<FolnerSearch> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1]")));
    }
    if budget == 0 {
        return Err(Error::InvalidParameter("state budget must be positive".into()));
    }
    let words: Vec<Word> = {
        let mut seen = BTreeSet::new();
        g.iter().filter(|w| seen.insert(action.format_word(w))).cloned().collect()
    };
    let reach = words.iter().map(Word::len).max().unwrap_or(0);
    let mut window = orbit_ball(action, reach, budget)?;
    let mut candidates = Vec::new();
    let mut best = Best {
        max: f64::INFINITY,
        states: Vec::new(),
        defects: Vec::new(),
    };
    let mut record = |label: String, f: &[usize], d: Vec<f64>, best: &mut Best, window: &ActionWindow| {
        let max = d.iter().copied().fold(0.0, f64::max);
        candidates.push(Candidate {
            label,
            size: f.len(),
            max_defect: max,
        });
        if max < best.max {
            best.max = max;
            best.states = f.to_vec();
            best.defects = d.clone();
        }
        if max <= epsilon {
            let states: Vec<State> = f.iter().map(|&i| window.states[i].clone()).collect();
            return verify_folner(window, &states, &words, epsilon).map(Verdict::certificate);
        }
        Ok(None)
    };

    let mut rho = 0;
    let mut certificate = None;
    loop {
        let ball: Vec<usize> = (0..window.len()).filter(|&i| window.depth(i) <= rho).collect();
        let d = defects(&window, &ball, &words)?;
        if let Some(c) = record(format!("ball radius {rho}"), &ball, d, &mut best, &window)? {
            certificate = Some(c);
            break;
        }
        if window.is_closed() {
            if ball.len() == window.len() {
                break;
            }
            rho += 1;
            continue;
        }
        match window.grow(budget) {
            Ok(()) => rho += 1,
            Err(Error::StateBudget { .. }) => break,
            Err(e) => return Err(e),
        }
    }

    if certificate.is_none() && !window.is_closed() {
        let ball: Vec<usize> = (0..window.len()).filter(|&i| window.depth(i) <= rho).collect();
        let (f, d) = greedy_peel(&window, &ball, &words)?;
        if !f.is_empty() {
            certificate = record(format!("greedy from ball radius {rho}"), &f, d, &mut best, &window)?;
        }
    }

    // balls of an exponentially growing group are never Følner; boxes are
    if certificate.is_none() && matches!(action.provider(), Provider::Lamplighter) {
        for k in 1.. {
            let Some(f) = lamplighter_box(&window, k) else { break };
            let d = match defects(&window, &f, &words) {
                Ok(d) => d,
                Err(Error::WindowTooSmall(_)) => break,
                Err(e) => return Err(e),
            };
            certificate = record(format!("lamplighter box half-width {k}"), &f, d, &mut best, &window)?;
            if certificate.is_some() {
                break;
            }
        }
    }

    let labels: Vec<String> = words.iter().map(|w| action.format_word(w)).collect();
    let mut best_states: Vec<State> = best.states.iter().map(|&i| window.states[i].clone()).collect();
    best_states.sort();
    Ok(FolnerSearch {
        certificate,
        candidates,
        best_max_defect: best.max,
        best_states: best_states.iter().map(State::to_hex).collect(),
        best_defects: labels.into_iter().zip(best.defects).collect(),
        states_explored: window.len(),
        window_radius: window.radius(),
        budget,
    })
}

/// `{(p, c) : |p| ≤ k, supp c ⊆ [−k, k]}` as window indices, if explored.
fn lamplighter_box(window: &ActionWindow, k: i64) -> Option<Vec<usize>> {
    let t = Letter::new(0, false);
    let a = Letter::new(1, false);
    let width = 2 * k as usize + 1;
    let mut out = Vec::new();
    for mask in 0u64..1 << width {
        // start at −k, sweep right lighting the lamps in `mask`
        let mut word = vec![t.inv(); k as usize];
        for i in 0..width {
            if mask >> i & 1 == 1 {
                word.push(a);
            }
            if i + 1 < width {
                word.push(t);
            }
        }
        let right = window.walk(0, &Word(word))?;
        let mut s = right;
        out.push(s);
        for _ in 1..width {
            s = window.step(s, t.inv())?;
            out.push(s);
        }
    }
    out.sort_unstable();
    Some(out)
}

/// Repeatedly removes the member with the most exits (ties: fewest members
/// pointing at it, then smallest encoding) and keeps the best set seen.
fn greedy_peel(window: &ActionWindow, start: &[usize], words: &[Word]) -> Result<(Vec<usize>, Vec<f64>)> {
    let n = window.len();
    let k = words.len();
    let mut member = vec![false; n];
    for &i in start {
        member[i] = true;
    }
    // forward and backward images under every word, restricted to `start`
    let mut fwd = vec![u32::MAX; n * k];
    let mut back: HashMap<(usize, usize), usize> = HashMap::new();
    for &i in start {
        for (j, w) in words.iter().enumerate() {
            let t = window.walk(i, w).ok_or_else(|| Error::WindowTooSmall("greedy pass left the window".into()))?;
            fwd[i * k + j] = t as u32;
            if member[t] {
                back.insert((t, j), i);
            }
        }
    }
    let exits_of = |i: usize, member: &[bool]| (0..k).filter(|&j| !member[fwd[i * k + j] as usize]).count();
    let entries_of =
        |i: usize, member: &[bool]| (0..k).filter(|&j| back.get(&(i, j)).is_some_and(|&s| member[s])).count();
    let mut exits: Vec<usize> = vec![0; k];
    for &i in start {
        for (j, e) in exits.iter_mut().enumerate() {
            *e += usize::from(!member[fwd[i * k + j] as usize]);
        }
    }
    let mut size = start.len();
    let max_of = |exits: &[usize], size: usize| exits.iter().copied().max().unwrap_or(0) as f64 / size as f64;
    let mut best_max = max_of(&exits, size);
    let mut best_removed = 0usize;
    let mut removed: Vec<usize> = Vec::new();
    // keyed by (−exits, entries, index) so the first element is the next victim
    let mut queue: BTreeSet<(std::cmp::Reverse<usize>, usize, usize)> =
        start.iter().map(|&i| (std::cmp::Reverse(exits_of(i, &member)), entries_of(i, &member), i)).collect();
    let cap = start.len().saturating_sub(1);
    while removed.len() < cap {
        let Some(&(_, _, v)) = queue.iter().next() else { break };
        // neighbors whose keys change when v leaves
        let mut touched: Vec<usize> = Vec::new();
        for j in 0..k {
            let t = fwd[v * k + j] as usize;
            if member[t] {
                touched.push(t);
            }
            if let Some(&s) = back.get(&(v, j)) {
                if member[s] {
                    touched.push(s);
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        touched.retain(|&t| t != v);
        for &t in touched.iter().chain(std::iter::once(&v)) {
            queue.remove(&(std::cmp::Reverse(exits_of(t, &member)), entries_of(t, &member), t));
        }
        // v's own exits disappear; members pointing at v gain an exit
        for (j, e) in exits.iter_mut().enumerate() {
            if !member[fwd[v * k + j] as usize] {
                *e -= 1;
            }
            if back.get(&(v, j)).is_some_and(|&s| member[s] && s != v) {
                *e += 1;
            }
        }
        member[v] = false;
        size -= 1;
        removed.push(v);
        for &t in &touched {
            queue.insert((std::cmp::Reverse(exits_of(t, &member)), entries_of(t, &member), t));
        }
        let m = max_of(&exits, size);
        if m < best_max {
            best_max = m;
            best_removed = removed.len();
        }
    }
    let dropped: BTreeSet<usize> = removed[..best_removed].iter().copied().collect();
    let f: Vec<usize> = start.iter().copied().filter(|i| !dropped.contains(i)).collect();
    let d = defects(window, &f, words)?;
    Ok((f, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(action: &DeckAction, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| action.parse_word(w).unwrap()).collect()
    }

    #[test]
    fn orbit_ball_sizes() {
        let z = DeckAction::zd(1).unwrap();
        let w = orbit_ball(&z, 3, 100).unwrap();
        let mut got: Vec<String> = w.states().iter().map(|s| z.describe(s)).collect();
        got.sort();
        let mut want: Vec<String> = (-3..=3).map(|i| format!("({i})")).collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(orbit_ball(&DeckAction::free(2).unwrap(), 2, 100).unwrap().len(), 17);
        let t = orbit_ball(&DeckAction::trivial(1).unwrap(), 5, 100).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.is_closed());
        assert!(matches!(
            orbit_ball(&DeckAction::free(2).unwrap(), 6, 1000),
            Err(Error::StateBudget { .. })
        ));
    }

    #[test]
    fn window_moves_are_symmetric() {
        let action = DeckAction::lamplighter();
        let w = orbit_ball(&action, 4, 10_000).unwrap();
        for i in 0..w.len() {
            for l in action.letters() {
                if let Some(t) = w.step(i, l) {
                    assert_eq!(w.step(t, l.inv()), Some(i));
                    assert_eq!(w.states()[t], action.act(&w.states()[i], l));
                }
            }
        }
    }

    #[test]
    fn interval_in_z() {
        let action = DeckAction::zd(1).unwrap();
        let w = orbit_ball(&action, 120, 1000).unwrap();
        let f: Vec<State> = (0..100)
            .map(|k| action.act_word(&action.basepoint(), &Word(vec![Letter::new(0, false); k])))
            .collect();
        let v = verify_folner(&w, &f, &words(&action, &["g1", "g1^-1"]), 0.02).unwrap();
        assert_eq!(v.defects(), &[0.01, 0.01]);
        assert!(matches!(v, Verdict::Accepted(_)));
    }

    #[test]
    fn square_in_z2() {
        let action = DeckAction::zd(2).unwrap();
        let w = orbit_ball(&action, 25, 10_000).unwrap();
        let mut f = Vec::new();
        for a in 0..10 {
            for b in 0..10 {
                let word = Word([vec![Letter::new(0, false); a], vec![Letter::new(1, false); b]].concat());
                f.push(action.act_word(&action.basepoint(), &word));
            }
        }
        let g = words(&action, &["g1", "g1^-1", "g2", "g2^-1"]);
        let v = verify_folner(&w, &f, &g, 0.1).unwrap();
        assert_eq!(v.defects(), &[0.1; 4]);
        assert!(matches!(v, Verdict::Accepted(_)));
    }

    #[test]
    fn free_ball_is_rejected() {
        let action = DeckAction::free(2).unwrap();
        let w = orbit_ball(&action, 2, 100).unwrap();
        let f: Vec<State> = (0..w.len()).filter(|&i| w.depth(i) <= 1).map(|i| w.states()[i].clone()).collect();
        let v = verify_folner(&w, &f, &words(&action, &["a"]), 0.5).unwrap();
        assert_eq!(v, Verdict::Rejected { defects: vec![0.6] });
        // the same check inside a window of radius 1 cannot be completed
        let small = orbit_ball(&action, 1, 100).unwrap();
        assert!(matches!(
            verify_folner(&small, &f, &words(&action, &["a"]), 0.5),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn search_finds_z2_ball() {
        let action = DeckAction::zd(2).unwrap();
        let g = words(&action, &["g1", "g1^-1", "g2", "g2^-1"]);
        let out = search_folner(&action, &g, 0.05, 100_000).unwrap();
        let cert = out.certificate.clone().unwrap();
        assert!(cert.max_defect() <= 0.05);
        assert!(cert.size() >= 40 * 40 / 2);
        let w = orbit_ball(&action, 60, 100_000).unwrap();
        assert_eq!(verify_folner(&w, &cert.states, &g, 0.05).unwrap(), Verdict::Accepted(cert.clone()));
        // weaker demands are also met
        assert!(matches!(verify_folner(&w, &cert.states, &g[..2], 0.1).unwrap(), Verdict::Accepted(_)));
        // deterministic
        let again = search_folner(&action, &g, 0.05, 100_000).unwrap();
        assert_eq!(again.certificate, out.certificate);
    }

    #[test]
    fn certificate_record_round_trip() {
        let action = DeckAction::zd(1).unwrap();
        let g = words(&action, &["g1", "g1^-1 g1^-1"]);
        let cert = search_folner(&action, &g, 0.2, 1000).unwrap().certificate.unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let record: CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(FolnerCertificate::from_record(&record, &action).unwrap(), cert);
        assert!(json.contains("\"g1^-1 g1^-1\""));
    }

    #[test]
    fn nested_word_sets_on_z() {
        // enlarging G can only remove valid sets
        let action = DeckAction::zd(1).unwrap();
        let w = orbit_ball(&action, 40, 1000).unwrap();
        let chain = [vec!["g1"], vec!["g1", "g1^-1"], vec!["g1", "g1^-1", "g1 g1"], vec!["g1", "g1^-1", "g1 g1", "g1^-1 g1^-1 g1^-1"]];
        for len in 1..20usize {
            let f: Vec<State> = (0..len)
                .map(|k| action.act_word(&action.basepoint(), &Word(vec![Letter::new(0, false); k])))
                .collect();
            let ok: Vec<bool> = chain
                .iter()
                .map(|g| matches!(verify_folner(&w, &f, &words(&action, g), 0.2).unwrap(), Verdict::Accepted(_)))
                .collect();
            for pair in ok.windows(2) {
                assert!(pair[0] || !pair[1]);
            }
        }
    }
}
