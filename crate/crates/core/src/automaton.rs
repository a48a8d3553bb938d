//! Complete deterministic automata, words, state sets and the canonical text formats.
//!
//! In memory, states and letters are 0-based indices. The `DFA v1` text format and
//! the word text form are 1-based; conversion happens only at the parse/serialize
//! boundary.
//!
//! ```text
//! DFA <n> <k>
//! <images of states 1..n under letter 1>
//! ...
//! <images of states 1..n under letter k>
//! ```

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// A complete deterministic automaton with `n` states and `k` letters.
///
/// The transition table is stored letter-major: `delta[x * n + q]` is the image of
/// state `q` under letter `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    n: usize,
    k: usize,
    delta: Vec<u32>,
}

impl Dfa {
    /// Builds an automaton from one image row per letter.
    pub fn from_rows<R: AsRef<[usize]>>(n: usize, rows: &[R]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "automaton needs at least one state".into(),
            ));
        }
        if rows.is_empty() {
            return Err(Error::InvalidInput(
                "automaton needs at least one letter".into(),
            ));
        }
        if n > u32::MAX as usize {
            return Err(Error::Capacity(format!(
                "{n} states do not fit a 32-bit table"
            )));
        }
        let mut delta = Vec::with_capacity(n * rows.len());
        for (x, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "letter {} has {} images, expected {n}",
                    x + 1,
                    row.len()
                )));
            }
            for &q in row {
                if q >= n {
                    return Err(Error::StateOutOfRange { state: q, n });
                }
                delta.push(q as u32);
            }
        }
        Ok(Dfa {
            n,
            k: rows.len(),
            delta,
        })
    }

    /// Builds an automaton from a flat letter-major table without re-validating it.
    pub(crate) fn from_table_unchecked(n: usize, k: usize, delta: Vec<u32>) -> Self {
        debug_assert_eq!(delta.len(), n * k);
        debug_assert!(delta.iter().all(|&q| (q as usize) < n));
        Dfa { n, k, delta }
    }

    /// The automaton in which every letter is the identity map.
    pub fn identity(n: usize, k: usize) -> Result<Self> {
        let row: Vec<usize> = (0..n).collect();
        Dfa::from_rows(n, &vec![row; k])
    }

    #[inline]
    pub fn states(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn letters(&self) -> usize {
        self.k
    }

    /// Image of `q` under letter `x`. Panics on out-of-range arguments.
    #[inline]
    pub fn step(&self, q: usize, x: usize) -> usize {
        self.delta[x * self.n + q] as usize
    }

    /// The image row of letter `x`.
    #[inline]
    pub fn row(&self, x: usize) -> &[u32] {
        &self.delta[x * self.n..(x + 1) * self.n]
    }

    pub fn check_state(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                state: q,
                n: self.n,
            })
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.iter().find(|&x| x >= self.k) {
            Some(letter) => Err(Error::LetterOutOfRange { letter, k: self.k }),
            None => Ok(()),
        }
    }

    /// State reached from `q` by reading `w` left to right.
    pub fn apply(&self, q: usize, w: &Word) -> Result<usize> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(w.iter().fold(q, |s, x| self.step(s, x)))
    }

    /// Image `{ q.w : q ∈ set }`.
    pub fn apply_set(&self, set: &StateSet, w: &Word) -> Result<StateSet> {
        if set.universe() != self.n {
            return Err(Error::InvalidInput(format!(
                "state set over {} states applied to a {}-state automaton",
                set.universe(),
                self.n
            )));
        }
        self.check_word(w)?;
        let mut current: Vec<usize> = set.iter().collect();
        let mut seen = StateSet::new(self.n);
        for x in w.iter() {
            seen.clear();
            current.retain_mut(|q| {
                *q = self.step(*q, x);
                seen.insert(*q)
            });
        }
        Ok(current.into_iter().collect_in(self.n))
    }

    /// True iff `w` sends every state to one common state.
    pub fn is_reset_word(&self, w: &Word) -> Result<bool> {
        Ok(self.apply_set(&StateSet::full(self.n), w)?.len() == 1)
    }

    /// The automaton restricted to the first `letters` letters.
    pub fn with_letters(&self, letters: usize) -> Result<Dfa> {
        if letters == 0 || letters > self.k {
            return Err(Error::InvalidInput(format!(
                "cannot keep {letters} of {} letters",
                self.k
            )));
        }
        Ok(Dfa {
            n: self.n,
            k: letters,
            delta: self.delta[..letters * self.n].to_vec(),
        })
    }

    /// Canonical `DFA v1` text.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(8 + self.delta.len() * 4);
        let _ = writeln!(out, "DFA {} {}", self.n, self.k);
        for x in 0..self.k {
            let mut first = true;
            for &q in self.row(x) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{}", q + 1);
            }
            out.push('\n');
        }
        out
    }

    /// Parses `DFA v1` text. Errors name the offending 1-based line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("DFA") {
            return Err(Error::parse(1, "malformed header, expected `DFA <n> <k>`"));
        }
        let mut dim = || -> Result<usize> {
            fields
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::parse(1, "malformed header, expected `DFA <n> <k>`"))
        };
        let n = dim()?;
        let k = dim()?;
        if fields.next().is_some() {
            return Err(Error::parse(1, "malformed header, trailing fields"));
        }
        if n > u32::MAX as usize {
            return Err(Error::parse(1, "state count exceeds 32-bit range"));
        }
        let mut delta = Vec::with_capacity(n.saturating_mul(k).min(1 << 24));
        for x in 0..k {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(x + 2, format!("missing row for letter {}", x + 1)))?;
            let before = delta.len();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("not an integer: `{tok}`")))?;
                if v == 0 || v > n {
                    return Err(Error::parse(line_no, "entry out of range"));
                }
                delta.push((v - 1) as u32);
            }
            let got = delta.len() - before;
            if got != n {
                return Err(Error::parse(
                    line_no,
                    format!("wrong row length: {got} entries, expected {n}"),
                ));
            }
        }
        if let Some((line_no, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(
                line_no,
                format!("unexpected trailing content `{extra}`"),
            ));
        }
        Ok(Dfa { n, k, delta })
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n * self.k <= 256 {
            write!(
                f,
                "Dfa({})",
                self.serialize().trim_end().replace('\n', " / ")
            )
        } else {
            write!(f, "Dfa {{ n: {}, k: {} }}", self.n, self.k)
        }
    }
}

/// A finite word over 0-based letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, x: usize) {
        self.0.push(x as u32);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    /// Space-separated 1-based letters; the empty word is the empty string.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", x + 1);
        }
        out
    }

    /// Parses the word text form (one line of 1-based letters).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let line = lines.next().unwrap_or("");
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse(2, "a word occupies a single line"));
        }
        line.split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(v) if v >= 1 && v <= u32::MAX as usize => Ok(v - 1),
                _ => Err(Error::parse(1, format!("invalid letter `{tok}`"))),
            })
            .collect()
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().map(|x| x as u32).collect())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

/// A subset of `0..universe`, stored as a bitset (a single machine word up to 64 states).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn new(universe: usize) -> Self {
        StateSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = StateSet::new(universe);
        for q in 0..universe {
            s.insert(q);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Inserts `q`; returns true if it was absent.
    #[inline]
    pub fn insert(&mut self, q: usize) -> bool {
        assert!(
            q < self.universe,
            "state {q} outside universe {}",
            self.universe
        );
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    #[inline]
    pub fn contains(&self, q: usize) -> bool {
        q < self.universe && self.words[q / 64] & (1u64 << (q % 64)) != 0
    }

    pub fn remove(&mut self, q: usize) {
        if q < self.universe {
            self.words[q / 64] &= !(1u64 << (q % 64));
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|q| q + 1)).finish()
    }
}

/// Collects states into a [`StateSet`] over a given universe.
pub trait CollectStates {
    fn collect_in(self, universe: usize) -> StateSet;
}

impl<I: Iterator<Item = usize>> CollectStates for I {
    fn collect_in(self, universe: usize) -> StateSet {
        let mut s = StateSet::new(universe);
        for q in self {
            s.insert(q);
        }
        s
    }
}

/// Inverse transition relation of one letter in compressed-row form.
pub(crate) struct Preimages {
    offsets: Vec<u32>,
    sources: Vec<u32>,
}

impl Preimages {
    pub(crate) fn of_row(row: &[u32]) -> Self {
        let n = row.len();
        let mut offsets = vec![0u32; n + 1];
        for &t in row {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0u32; n];
        for (s, &t) in row.iter().enumerate() {
            let slot = &mut fill[t as usize];
            sources[*slot as usize] = s as u32;
            *slot += 1;
        }
        Preimages { offsets, sources }
    }

    #[inline]
    pub(crate) fn of(&self, q: usize) -> &[u32] {
        &self.sources[self.offsets[q] as usize..self.offsets[q + 1] as usize]
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn w(letters: &[usize]) -> Word {
        letters.iter().map(|&x| x - 1).collect()
    }

    #[test]
    fn apply_follows_the_path() {
        let d = m5();
        assert_eq!(d.apply(4, &w(&[1, 1])).unwrap(), 0);
        assert_eq!(d.apply(3, &Word::empty()).unwrap(), 3);
    }

    #[test]
    fn apply_rejects_bad_input() {
        let d = c3();
        assert_eq!(
            d.apply(3, &Word::empty()),
            Err(Error::StateOutOfRange { state: 3, n: 3 })
        );
        assert_eq!(
            d.apply(0, &w(&[3])),
            Err(Error::LetterOutOfRange { letter: 2, k: 2 })
        );
    }

    #[test]
    fn identity_letters_never_merge() {
        let d = identity2();
        let all = StateSet::full(2);
        assert_eq!(d.apply_set(&all, &w(&[1, 2, 1])).unwrap(), all);
        assert!(!d.is_reset_word(&w(&[1, 2, 2, 1])).unwrap());
    }

    #[test]
    fn one_state_automaton_is_reset_by_empty_word() {
        let d = Dfa::identity(1, 1).unwrap();
        assert!(d.is_reset_word(&Word::empty()).unwrap());
    }

    #[test]
    fn empty_word_fixes_state_sets() {
        let d = c3();
        let s: StateSet = [0, 2].into_iter().collect_in(3);
        assert_eq!(d.apply_set(&s, &Word::empty()).unwrap(), s);
    }

    #[test]
    fn serialize_identity2() {
        assert_eq!(identity2().serialize(), "DFA 2 2\n1 2\n1 2\n");
        assert_eq!(Dfa::parse("DFA 2 2\n1 2\n1 2\n").unwrap(), identity2());
    }

    #[test]
    fn parse_errors_name_lines() {
        let e = Dfa::parse("DFA 2 1\n3 1\n").unwrap_err();
        assert_eq!(e, Error::parse(2, "entry out of range"));
        assert!(e.to_string().contains("entry out of range"));
        assert!(matches!(
            Dfa::parse("DFA 2\n1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Dfa::parse("NFA 2 1\n1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Dfa::parse("DFA 3 2\n1 2 3\n1 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Dfa::parse("DFA 3 2\n1 2 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Dfa::parse("DFA 1 1\n1\n1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Dfa::parse("DFA 2 1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn word_text_form() {
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert_eq!(Word::parse("\n").unwrap(), Word::empty());
        let word = Word::parse("2 1 2\n").unwrap();
        assert_eq!(word, w(&[2, 1, 2]));
        assert_eq!(word.to_text(), "2 1 2");
        assert!(Word::parse("0").is_err());
    }

    #[test]
    fn state_set_basics() {
        let mut s = StateSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(s.len(), 2);
        s.remove(3);
        assert!(!s.contains(3));
        assert!(!s.contains(500));
    }

    #[test]
    fn preimages_invert_rows() {
        let row = [1u32, 2, 0, 0, 3];
        let pre = Preimages::of_row(&row);
        assert_eq!(pre.of(0), &[2, 3]);
        assert_eq!(pre.of(4), &[] as &[u32]);
        assert_eq!(pre.of(3), &[4]);
    }

    fn arb_dfa() -> impl Strategy<Value = Dfa> {
        (1usize..12, 1usize..4).prop_flat_map(|(n, k)| {
            proptest::collection::vec(proptest::collection::vec(0..n, n), k)
                .prop_map(move |rows| Dfa::from_rows(n, &rows).unwrap())
        })
    }

    fn arb_dfa_word() -> impl Strategy<Value = (Dfa, Word, Word)> {
        arb_dfa().prop_flat_map(|d| {
            let k = d.letters();
            let word = proptest::collection::vec(0..k, 0..10).prop_map(Word::from);
            (Just(d), word.clone(), word)
        })
    }

    proptest! {
        #[test]
        fn round_trip(d in arb_dfa()) {
            prop_assert_eq!(Dfa::parse(&d.serialize()).unwrap(), d);
        }

        #[test]
        fn composition_and_monotonicity((d, u, v) in arb_dfa_word()) {
            let uv = u.concat(&v);
            for q in 0..d.states() {
                let mid = d.apply(q, &u).unwrap();
                prop_assert_eq!(d.apply(q, &uv).unwrap(), d.apply(mid, &v).unwrap());
            }
            let all = StateSet::full(d.states());
            let img = d.apply_set(&all, &uv).unwrap();
            prop_assert!(img.len() <= all.len());
            prop_assert!(img.len() <= d.apply_set(&all, &u).unwrap().len());
        }
    }
}
