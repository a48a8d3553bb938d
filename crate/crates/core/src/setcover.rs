//! Set-Cover instances, exact and greedy covers, and the reduction to automata whose
//! reset threshold equals the optimal cover size.
//!
//! `SC v1` text format, elements 1-based:
//!
//! ```text
//! SC <n> <m>
//! <c> <e1> ... <ec>      (one line per subset)
//! ```

use std::fmt::Write as _;

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};

/// Largest family accepted by [`exact_set_cover`].
pub const EXACT_MAX_SUBSETS: usize = 20;

/// A universe `0..n` and a non-empty family of non-empty subsets covering it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    subsets: Vec<Vec<usize>>,
}

/// Indices (0-based) of the chosen subsets, ascending.
pub type Cover = Vec<usize>;

impl SetCoverInstance {
    pub fn new(universe: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidInput("universe must be non-empty".into()));
        }
        if subsets.is_empty() {
            return Err(Error::InvalidInput("family must contain a subset".into()));
        }
        let mut covered = vec![false; universe];
        for (i, s) in subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidInput(format!("subset {} is empty", i + 1)));
            }
            let mut seen = vec![false; universe];
            for &e in s {
                if e >= universe {
                    return Err(Error::InvalidInput(format!(
                        "subset {} has element {} outside 1..={universe}",
                        i + 1,
                        e + 1
                    )));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidInput(format!(
                        "subset {} repeats element {}",
                        i + 1,
                        e + 1
                    )));
                }
                covered[e] = true;
            }
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidInput(format!(
                "element {} is not covered by any subset",
                e + 1
            )));
        }
        Ok(SetCoverInstance { universe, subsets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        let mut covered = vec![false; self.universe];
        for &i in cover {
            match self.subsets.get(i) {
                Some(s) => s.iter().for_each(|&e| covered[e] = true),
                None => return false,
            }
        }
        covered.into_iter().all(|c| c)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "SC {} {}", self.universe, self.subsets.len());
        for s in &self.subsets {
            let _ = write!(out, "{}", s.len());
            for &e in s {
                let _ = write!(out, " {}", e + 1);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let malformed = || Error::parse(1, "malformed header, expected `SC <n> <m>`");
        if fields.len() != 3 || fields[0] != "SC" {
            return Err(malformed());
        }
        let n: usize = fields[1].parse().map_err(|_| malformed())?;
        let m: usize = fields[2].parse().map_err(|_| malformed())?;
        let mut subsets = Vec::with_capacity(m);
        for i in 0..m {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(i + 2, format!("missing subset {}", i + 1)))?;
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("not an integer: `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let (&count, elems) = nums
                .split_first()
                .ok_or_else(|| Error::parse(line_no, "empty subset line"))?;
            if count != elems.len() {
                return Err(Error::parse(
                    line_no,
                    format!("subset declares {count} elements but lists {}", elems.len()),
                ));
            }
            if elems.iter().any(|&e| e == 0 || e > n) {
                return Err(Error::parse(line_no, "entry out of range"));
            }
            subsets.push(elems.iter().map(|e| e - 1).collect());
        }
        if let Some((line_no, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(
                line_no,
                format!("unexpected trailing content `{extra}`"),
            ));
        }
        SetCoverInstance::new(n, subsets).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::parse(1, msg),
            other => other,
        })
    }
}

/// Automaton on the universe plus a sink state `n` (the last state): letter `i` sends
/// the elements of subset `i` to the sink and fixes everything else.
pub fn reduce_to_automaton(inst: &SetCoverInstance) -> Dfa {
    let n = inst.universe;
    let rows: Vec<Vec<usize>> = inst
        .subsets
        .iter()
        .map(|s| {
            let mut row: Vec<usize> = (0..=n).collect();
            for &e in s {
                row[e] = n;
            }
            row
        })
        .collect();
    Dfa::from_rows(n + 1, &rows).expect("reduction rows are in range")
}

/// The distinct letters of `w` as a cover, if `w` resets the reduction automaton.
pub fn cover_from_word(inst: &SetCoverInstance, w: &Word) -> Option<Cover> {
    let dfa = reduce_to_automaton(inst);
    if !dfa.is_reset_word(w).ok()? {
        return None;
    }
    let mut cover: Cover = w.iter().collect();
    cover.sort_unstable();
    cover.dedup();
    debug_assert!(inst.is_cover(&cover));
    Some(cover)
}

/// Repeatedly takes the subset covering most uncovered elements, lowest index on ties.
pub fn greedy_set_cover(inst: &SetCoverInstance) -> Cover {
    let mut covered = vec![false; inst.universe];
    let mut left = inst.universe;
    let mut cover = Vec::new();
    while left > 0 {
        let (best, gain) = inst
            .subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.iter().filter(|&&e| !covered[e]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        debug_assert!(gain > 0, "a valid instance always has an improving subset");
        for &e in &inst.subsets[best] {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
            }
        }
        cover.push(best);
    }
    cover.sort_unstable();
    cover
}

/// A minimum-cardinality cover by exhaustive search, in order of increasing size.
pub fn exact_set_cover(inst: &SetCoverInstance) -> Result<Cover> {
    let m = inst.subsets.len();
    if m > EXACT_MAX_SUBSETS {
        return Err(Error::Capacity(format!(
            "exact set cover supports at most {EXACT_MAX_SUBSETS} subsets, got {m}"
        )));
    }
    let words = inst.universe.div_ceil(64);
    let masks: Vec<Vec<u64>> = inst
        .subsets
        .iter()
        .map(|s| {
            let mut mask = vec![0u64; words];
            for &e in s {
                mask[e / 64] |= 1 << (e % 64);
            }
            mask
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    if !inst.universe.is_multiple_of(64) {
        full[words - 1] = (1u64 << (inst.universe % 64)) - 1;
    }
    let mut acc = vec![0u64; words];
    let covers = |choice: u32, acc: &mut Vec<u64>| {
        acc.iter_mut().for_each(|w| *w = 0);
        let mut rest = choice;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for (a, b) in acc.iter_mut().zip(&masks[i]) {
                *a |= b;
            }
        }
        *acc == full
    };
    for size in 1..=m as u32 {
        // Gosper's hack enumerates the m-bit masks with `size` bits set in increasing order.
        let mut choice: u32 = (1u32 << size) - 1;
        let limit: u64 = 1u64 << m;
        while (choice as u64) < limit {
            if covers(choice, &mut acc) {
                return Ok((0..m).filter(|&i| choice >> i & 1 == 1).collect());
            }
            let c = choice & choice.wrapping_neg();
            let r = choice.wrapping_add(c);
            if r == 0 {
                break;
            }
            choice = (((r ^ choice) >> 2) / c) | r;
        }
    }
    unreachable!("the full family is a cover")
}
