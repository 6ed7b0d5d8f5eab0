//! Deck actions: finitely generated groups acting on the right of a fiber
//! index set (the cosets of the covering).
//!
//! Fiber states are stored as their canonical byte encoding, so the derived
//! ordering on [`State`] *is* the encoding order used for every tie-break in
//! the crate.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Canonical, injective byte encoding of a fiber state.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(SmallVec<[u8; 16]>);

impl State {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        if hex.len() % 2 != 0 {
            return Err(Error::InvalidParameter(format!("odd-length state `{hex}`")));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<std::result::Result<SmallVec<[u8; 16]>, _>>()
            .map_err(|_| Error::InvalidParameter(format!("malformed state `{hex}`")))?;
        Ok(State(bytes))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({})", self.to_hex())
    }
}

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u16, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A word in the generators, acted letter by letter from the left.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Appends `letter`, cancelling it against a trailing inverse.
    pub fn push_reduced(&mut self, letter: Letter) {
        if self.0.last() == Some(&letter.inv()) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out = Word::identity();
        for &l in &self.0 {
            out.push_reduced(l);
        }
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.0.extend_from_slice(&other.0);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provider {
    /// `sheets` disjoint copies permuted by nothing.
    Trivial { sheets: u32 },
    /// The free abelian group of rank `dim` acting on itself.
    Zd { dim: u16 },
    /// The free group of rank `rank` acting on itself.
    Free { rank: u16 },
    /// The lamplighter group Z/2 wr Z with generators `t` (move) and `a` (toggle).
    Lamplighter,
    /// The integer Heisenberg group with generators `x`, `y`.
    Heisenberg,
    /// Explicit permutation tables: `forward[g][i] = i·g`.
    Schreier {
        forward: Vec<Vec<u32>>,
        backward: Vec<Vec<u32>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckAction {
    provider: Provider,
    labels: Vec<String>,
}

fn put_i32(buf: &mut SmallVec<[u8; 16]>, v: i32) {
    buf.extend_from_slice(&((v as u32) ^ 0x8000_0000).to_be_bytes());
}

fn put_i64(buf: &mut SmallVec<[u8; 16]>, v: i64) {
    buf.extend_from_slice(&((v as u64) ^ 0x8000_0000_0000_0000).to_be_bytes());
}

fn get_i32(bytes: &[u8], at: usize) -> i32 {
    let raw = u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap());
    (raw ^ 0x8000_0000) as i32
}

fn get_i64(bytes: &[u8], at: usize) -> i64 {
    let raw = u64::from_be_bytes(bytes[at..at + 8].try_into().unwrap());
    (raw ^ 0x8000_0000_0000_0000) as i64
}

fn get_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap())
}

impl DeckAction {
    pub fn trivial(sheets: u32) -> Result<Self> {
        if sheets == 0 {
            return Err(Error::InvalidAction("trivial action needs at least one sheet".into()));
        }
        Ok(DeckAction {
            provider: Provider::Trivial { sheets },
            labels: Vec::new(),
        })
    }

    pub fn zd(dim: u16) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAction("zd needs dimension >= 1".into()));
        }
        Ok(DeckAction {
            provider: Provider::Zd { dim },
            labels: (1..=dim).map(|i| format!("g{i}")).collect(),
        })
    }

    pub fn free(rank: u16) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidAction("free rank must lie in 1..=26".into()));
        }
        Ok(DeckAction {
            provider: Provider::Free { rank },
            labels: (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
        })
    }

    pub fn lamplighter() -> Self {
        DeckAction {
            provider: Provider::Lamplighter,
            labels: vec!["t".into(), "a".into()],
        }
    }

    pub fn heisenberg() -> Self {
        DeckAction {
            provider: Provider::Heisenberg,
            labels: vec!["x".into(), "y".into()],
        }
    }

    /// Explicit coset action given by permutation tables on `0..n`, with
    /// state `0` as the basepoint coset. Tables must be permutations and the
    /// action must be transitive.
    pub fn schreier(labels: Vec<String>, forward: Vec<Vec<u32>>) -> Result<Self> {
        if labels.len() != forward.len() {
            return Err(Error::InvalidAction("one table per generator label".into()));
        }
        let n = forward.first().map_or(1, |t| t.len());
        if n == 0 {
            return Err(Error::InvalidAction("empty coset table".into()));
        }
        let mut backward = Vec::with_capacity(forward.len());
        for (label, table) in labels.iter().zip(&forward) {
            if table.len() != n {
                return Err(Error::InvalidAction(format!(
                    "table for `{label}` has {} entries, expected {n}",
                    table.len()
                )));
            }
            let mut inv = vec![u32::MAX; n];
            for (i, &j) in table.iter().enumerate() {
                let j = j as usize;
                if j >= n || inv[j] != u32::MAX {
                    return Err(Error::InvalidAction(format!("table for `{label}` is not a permutation")));
                }
                inv[j] = i as u32;
            }
            backward.push(inv);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for t in forward.iter().chain(&backward) {
                let j = t[i] as usize;
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidAction("schreier action is not transitive".into()));
        }
        let mut unique = BTreeSet::new();
        if labels.iter().any(|l| !unique.insert(l.as_str()) || !valid_label(l)) {
            return Err(Error::InvalidAction("generator labels must be distinct identifiers".into()));
        }
        Ok(DeckAction {
            provider: Provider::Schreier { forward, backward },
            labels,
        })
    }

    pub fn provider(&self) -> &Provider {
        &self.provider
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    /// All letters `g` and `g⁻¹`, ordered by generator then inverse flag.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generator_count() as u16)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    /// Whether the fiber index set is known to be finite.
    pub fn is_finite(&self) -> bool {
        matches!(self.provider, Provider::Trivial { .. } | Provider::Schreier { .. })
    }

    pub fn basepoint(&self) -> State {
        let mut buf = SmallVec::new();
        match &self.provider {
            Provider::Trivial { .. } | Provider::Schreier { .. } => buf.extend_from_slice(&0u32.to_be_bytes()),
            Provider::Zd { dim } => {
                for _ in 0..*dim {
                    put_i32(&mut buf, 0);
                }
            }
            Provider::Free { .. } => buf.extend_from_slice(&0u16.to_be_bytes()),
            Provider::Lamplighter => put_i32(&mut buf, 0),
            Provider::Heisenberg => {
                put_i32(&mut buf, 0);
                put_i32(&mut buf, 0);
                put_i64(&mut buf, 0);
            }
        }
        State(buf)
    }

    /// States from which the window of a cover is grown: one per orbit.
    /// Only the multi-sheet trivial action has more than one orbit.
    pub fn roots(&self) -> Vec<State> {
        match &self.provider {
            Provider::Trivial { sheets } => (0..*sheets)
                .map(|s| State(SmallVec::from_slice(&s.to_be_bytes())))
                .collect(),
            _ => vec![self.basepoint()],
        }
    }

    pub fn act(&self, state: &State, letter: Letter) -> State {
        let b = state.as_bytes();
        let step: i64 = if letter.inverse { -1 } else { 1 };
        let g = letter.generator as usize;
        let mut out: SmallVec<[u8; 16]> = SmallVec::new();
        match &self.provider {
            Provider::Trivial { .. } => return state.clone(),
            Provider::Zd { dim } => {
                for i in 0..*dim as usize {
                    let v = get_i32(b, 4 * i);
                    put_i32(&mut out, if i == g { v + step as i32 } else { v });
                }
            }
            Provider::Free { .. } => {
                let len = u16::from_be_bytes([b[0], b[1]]) as usize;
                let code = (2 * letter.generator + letter.inverse as u16) as u8;
                let cancel = code ^ 1;
                if len > 0 && b[1 + len] == cancel {
                    out.extend_from_slice(&((len - 1) as u16).to_be_bytes());
                    out.extend_from_slice(&b[2..1 + len]);
                } else {
                    out.extend_from_slice(&((len + 1) as u16).to_be_bytes());
                    out.extend_from_slice(&b[2..2 + len]);
                    out.push(code);
                }
            }
            Provider::Lamplighter => {
                let pos = get_i32(b, 0);
                let lamps = (4..b.len()).step_by(4).map(|at| get_i32(b, at));
                if g == 0 {
                    put_i32(&mut out, pos + step as i32);
                    for l in lamps {
                        put_i32(&mut out, l);
                    }
                } else {
                    let mut set: BTreeSet<i32> = lamps.collect();
                    if !set.remove(&pos) {
                        set.insert(pos);
                    }
                    put_i32(&mut out, pos);
                    for l in set {
                        put_i32(&mut out, l);
                    }
                }
            }
            Provider::Heisenberg => {
                let (x, y, z) = (get_i32(b, 0), get_i32(b, 4), get_i64(b, 8));
                if g == 0 {
                    put_i32(&mut out, x + step as i32);
                    put_i32(&mut out, y);
                    put_i64(&mut out, z);
                } else {
                    put_i32(&mut out, x);
                    put_i32(&mut out, y + step as i32);
                    put_i64(&mut out, z + step * x as i64);
                }
            }
            Provider::Schreier { forward, backward } => {
                let i = get_u32(b, 0) as usize;
                let j = if letter.inverse { backward[g][i] } else { forward[g][i] };
                out.extend_from_slice(&j.to_be_bytes());
            }
        }
        State(out)
    }

    pub fn act_word(&self, state: &State, word: &Word) -> State {
        word.0.iter().fold(state.clone(), |s, &l| self.act(&s, l))
    }

    /// Checks that `bytes` is a well-formed encoding for this provider.
    pub fn validate_state(&self, state: &State) -> Result<()> {
        let b = state.as_bytes();
        let ok = match &self.provider {
            Provider::Trivial { sheets } => b.len() == 4 && get_u32(b, 0) < *sheets,
            Provider::Schreier { forward, .. } => {
                let n = forward.first().map_or(1, |t| t.len()) as u32;
                b.len() == 4 && get_u32(b, 0) < n
            }
            Provider::Zd { dim } => b.len() == 4 * *dim as usize,
            Provider::Free { rank } => {
                b.len() >= 2
                    && u16::from_be_bytes([b[0], b[1]]) as usize == b.len() - 2
                    && b[2..].iter().all(|&c| (c as u16) < 2 * rank)
                    && b[2..].windows(2).all(|w| w[0] != w[1] ^ 1)
            }
            Provider::Lamplighter => {
                b.len() % 4 == 0
                    && !b.is_empty()
                    && (8..b.len()).step_by(4).all(|at| get_i32(b, at - 4) < get_i32(b, at))
            }
            Provider::Heisenberg => b.len() == 16,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("state {} is not a valid encoding", state.to_hex())))
        }
    }

    /// Human-readable rendering of a state.
    pub fn describe(&self, state: &State) -> String {
        let b = state.as_bytes();
        match &self.provider {
            Provider::Trivial { .. } | Provider::Schreier { .. } => get_u32(b, 0).to_string(),
            Provider::Zd { dim } => {
                let coords: Vec<String> = (0..*dim as usize).map(|i| get_i32(b, 4 * i).to_string()).collect();
                format!("({})", coords.join(","))
            }
            Provider::Free { .. } => {
                let letters = b[2..]
                    .iter()
                    .map(|&c| Letter::new((c / 2) as u16, c % 2 == 1))
                    .collect();
                self.format_word(&Word(letters))
            }
            Provider::Lamplighter => {
                let lamps: Vec<String> = (4..b.len()).step_by(4).map(|at| get_i32(b, at).to_string()).collect();
                format!("pos={} lamps={{{}}}", get_i32(b, 0), lamps.join(","))
            }
            Provider::Heisenberg => format!("({},{},{})", get_i32(b, 0), get_i32(b, 4), get_i64(b, 8)),
        }
    }

    pub fn label_index(&self, label: &str) -> Option<u16> {
        self.labels.iter().position(|l| l == label).map(|i| i as u16)
    }

    /// Parses a word such as `a b^-1 a`. Tokens are separated by whitespace,
    /// `*` or `.`; `e` or an empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*' || c == '.') {
            if token.is_empty() || token == "e" {
                continue;
            }
            let (label, inverse) = match token.strip_suffix("^-1") {
                Some(l) => (l, true),
                None => (token, false),
            };
            let g = self
                .label_index(label)
                .ok_or_else(|| Error::UnknownGenerator(label.to_string()))?;
            letters.push(Letter::new(g, inverse));
        }
        Ok(Word(letters))
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.0
            .iter()
            .map(|l| {
                let label = &self.labels[l.generator as usize];
                if l.inverse {
                    format!("{label}^-1")
                } else {
                    label.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Samples random words of length at most `max_len` and checks the
    /// inverse law and the provider's defining relations on random states.
    pub fn check_relations<R: Rng>(&self, rng: &mut R, samples: usize, max_len: usize) -> Result<()> {
        let letters = self.letters();
        if letters.is_empty() {
            return Ok(());
        }
        let random_word = |rng: &mut R| {
            let len = rng.gen_range(0..=max_len);
            Word((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect())
        };
        let fail = |what: &str, s: &State, w: &Word| {
            Err(Error::InvalidAction(format!(
                "{what} fails at state {} with word `{}`",
                self.describe(s),
                self.format_word(w)
            )))
        };
        for _ in 0..samples {
            let s = self.act_word(&self.basepoint(), &random_word(rng));
            let w = random_word(rng);
            if self.act_word(&self.act_word(&s, &w), &w.inverse()) != s {
                return fail("inverse law", &s, &w);
            }
            let relators: Vec<Word> = match &self.provider {
                Provider::Zd { dim } if *dim > 1 => {
                    let i = rng.gen_range(0..*dim);
                    let j = (i + rng.gen_range(1..*dim)) % dim;
                    vec![commutator(&Word(vec![Letter::new(i, false)]), &Word(vec![Letter::new(j, false)]))]
                }
                Provider::Heisenberg => {
                    let x = Word(vec![Letter::new(0, false)]);
                    let y = Word(vec![Letter::new(1, false)]);
                    let z = commutator(&x, &y);
                    vec![commutator(&z, &x), commutator(&z, &y)]
                }
                Provider::Lamplighter => {
                    let a = Word(vec![Letter::new(1, false)]);
                    let k = rng.gen_range(1..=4);
                    let shift = Word(vec![Letter::new(0, false); k]);
                    let conj = shift.concat(&a).concat(&shift.inverse());
                    vec![a.concat(&a), commutator(&a, &conj)]
                }
                _ => Vec::new(),
            };
            for r in relators {
                if self.act_word(&s, &r) != s {
                    return fail("relation", &s, &r);
                }
            }
        }
        Ok(())
    }
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && l != "e" && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `u v u⁻¹ v⁻¹`
fn commutator(u: &Word, v: &Word) -> Word {
    u.concat(v).concat(&u.inverse()).concat(&v.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_providers() -> Vec<DeckAction> {
        vec![
            DeckAction::trivial(3).unwrap(),
            DeckAction::zd(1).unwrap(),
            DeckAction::zd(3).unwrap(),
            DeckAction::free(2).unwrap(),
            DeckAction::lamplighter(),
            DeckAction::heisenberg(),
            DeckAction::schreier(
                vec!["a".into(), "b".into()],
                vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn relations_hold_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for action in all_providers() {
            action.check_relations(&mut rng, 200, 8).unwrap();
        }
    }

    #[test]
    fn free_group_cancels() {
        let f = DeckAction::free(2).unwrap();
        let w = f.parse_word("a b b^-1 a^-1").unwrap();
        assert_eq!(f.act_word(&f.basepoint(), &w), f.basepoint());
        let ab = f.act_word(&f.basepoint(), &f.parse_word("a b").unwrap());
        assert_eq!(f.describe(&ab), "a b");
    }

    #[test]
    fn zd_encoding_orders_numerically() {
        let z = DeckAction::zd(1).unwrap();
        let g = z.parse_word("g1").unwrap();
        let mut s = z.act_word(&z.basepoint(), &Word(vec![Letter::new(0, true); 5]));
        let mut prev = s.clone();
        for _ in 0..10 {
            s = z.act_word(&s, &g);
            assert!(prev < s);
            prev = s.clone();
        }
        assert_eq!(z.describe(&s), "(5)");
    }

    #[test]
    fn lamplighter_toggles_at_position() {
        let l = DeckAction::lamplighter();
        let s = l.act_word(&l.basepoint(), &l.parse_word("a t t a t^-1").unwrap());
        assert_eq!(l.describe(&s), "pos=1 lamps={0,2}");
    }

    #[test]
    fn heisenberg_commutator_is_central() {
        let h = DeckAction::heisenberg();
        let s = h.act_word(&h.basepoint(), &h.parse_word("x y x^-1 y^-1").unwrap());
        assert_eq!(h.describe(&s), "(0,0,1)");
    }

    #[test]
    fn schreier_rejects_bad_tables() {
        let labels = vec!["a".to_string()];
        assert!(DeckAction::schreier(labels.clone(), vec![vec![0, 0]]).is_err());
        // two fixed points: not transitive
        assert!(DeckAction::schreier(labels, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let z = DeckAction::zd(2).unwrap();
        assert!(matches!(z.parse_word("g3"), Err(Error::UnknownGenerator(_))));
        assert_eq!(z.parse_word("e").unwrap(), Word::identity());
    }

    proptest! {
        #[test]
        fn state_hex_round_trips(idx in 0usize..7, word in proptest::collection::vec((0u16..2, any::<bool>()), 0..12)) {
            let action = &all_providers()[idx];
            let gens = action.generator_count() as u16;
            let w = Word(word.into_iter().filter(|_| gens > 0).map(|(g, i)| Letter::new(g % gens.max(1), i)).collect());
            let s = action.act_word(&action.basepoint(), &w);
            action.validate_state(&s).unwrap();
            prop_assert_eq!(State::from_hex(&s.to_hex()).unwrap(), s);
        }
    }
}
