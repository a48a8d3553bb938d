//! Reset thresholds: exact computation by subset search and the greedy pair-merging
//! approximation.

use num_rational::Ratio;

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::pair::PairBfsTable;

/// Largest state count accepted by [`shortest_reset`].
pub const EXACT_MAX_STATES: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResetResult {
    pub length: usize,
    pub word: Word,
    pub method: Method,
}

impl ResetResult {
    fn new(word: Word, method: Method) -> Self {
        ResetResult {
            length: word.len(),
            word,
            method,
        }
    }
}

/// Image of a subset, as a bitmask, under letter `x`.
#[inline]
fn image(dfa: &Dfa, mut set: u32, x: usize) -> u32 {
    let row = dfa.row(x);
    let mut out = 0u32;
    while set != 0 {
        let q = set.trailing_zeros() as usize;
        set &= set - 1;
        out |= 1 << row[q];
    }
    out
}

/// A shortest reset word, by breadth-first search over subsets reachable from the
/// full state set. `None` iff the automaton is not synchronizing.
pub fn shortest_reset(dfa: &Dfa) -> Result<Option<ResetResult>> {
    let n = dfa.states();
    if n > EXACT_MAX_STATES {
        return Err(Error::Capacity(format!(
            "exact reset threshold supports at most {EXACT_MAX_STATES} states, got {n}; use the greedy method"
        )));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if full.count_ones() == 1 {
        return Ok(Some(ResetResult::new(Word::empty(), Method::Exact)));
    }
    let mut seen = vec![0u64; (1usize << n).div_ceil(64)];
    let mark = |seen: &mut Vec<u64>, s: u32| {
        let (w, b) = (s as usize >> 6, 1u64 << (s & 63));
        let fresh = seen[w] & b == 0;
        seen[w] |= b;
        fresh
    };
    // (subset, index of parent entry, letter); the list doubles as the BFS queue.
    let mut nodes: Vec<(u32, u32, u32)> = vec![(full, u32::MAX, 0)];
    mark(&mut seen, full);
    let mut head = 0;
    while head < nodes.len() {
        let set = nodes[head].0;
        for x in 0..dfa.letters() {
            let img = image(dfa, set, x);
            if !mark(&mut seen, img) {
                continue;
            }
            nodes.push((img, head as u32, x as u32));
            if img.count_ones() == 1 {
                let mut letters = Vec::new();
                let mut at = nodes.len() - 1;
                while nodes[at].1 != u32::MAX {
                    letters.push(nodes[at].2 as usize);
                    at = nodes[at].1 as usize;
                }
                letters.reverse();
                return Ok(Some(ResetResult::new(Word::from(letters), Method::Exact)));
            }
        }
        head += 1;
    }
    Ok(None)
}

/// Greedy reset word: repeatedly merge the pair of the current image with the
/// shortest merging word (ties broken by the lexicographically smallest pair).
pub fn greedy_reset(dfa: &Dfa) -> Option<ResetResult> {
    let table = PairBfsTable::build(dfa);
    greedy_reset_with(dfa, &table)
}

pub fn greedy_reset_with(dfa: &Dfa, table: &PairBfsTable) -> Option<ResetResult> {
    if !table.all_pairs_mergeable() {
        return None;
    }
    let n = dfa.states();
    let mut current: Vec<usize> = (0..n).collect();
    let mut word = Word::empty();
    let mut mark = vec![false; n];
    while current.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, &p) in current.iter().enumerate() {
            for &q in &current[i + 1..] {
                let d = table.distance(p, q).expect("all pairs are mergeable");
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, p, q));
                }
            }
        }
        let (_, p, q) = best.expect("at least two states remain");
        let v = table.merge_word(dfa, p, q).expect("pair is mergeable");
        for s in current.iter_mut() {
            *s = v.iter().fold(*s, |s, x| dfa.step(s, x));
        }
        current.retain(|&s| !std::mem::replace(&mut mark[s], true));
        current.iter().for_each(|&s| mark[s] = false);
        current.sort_unstable();
        word.extend_from(&v);
    }
    Some(ResetResult::new(word, Method::Greedy))
}

/// `approx.length / exact.length`.
pub fn performance_ratio(approx: &ResetResult, exact: &ResetResult) -> Result<Ratio<u64>> {
    if exact.method != Method::Exact {
        return Err(Error::InvalidInput(
            "denominator must be an exact reset threshold".into(),
        ));
    }
    if exact.length == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(Ratio::new(approx.length as u64, exact.length as u64))
}

/// The Černý automaton: letter 1 sends state 1 to 2 and fixes the rest, letter 2 is
/// the cyclic shift.
pub fn gen_cerny(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "Černý automaton needs n ≥ 2, got {n}"
        )));
    }
    let mut merge: Vec<usize> = (0..n).collect();
    merge[0] = 1;
    let shift: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
    Dfa::from_rows(n, &[merge, shift])
}
