//! The certified quadratic synchronizability check and shortest pair-merging words.
//!
//! Both run a multi-source breadth-first search backward from the diagonal of the
//! square automaton: a pair `{p, q}` is reached iff some word merges it, and an
//! automaton is synchronizing iff every pair is reached.
//!
//! Unordered pairs `p < q` are indexed triangularly, row `p` holding `q = p+1..n`.

use crate::automaton::{Dfa, Preimages, Word};
use crate::error::Result;

#[inline]
fn row_start(p: usize, n: usize) -> usize {
    p * n - p * (p + 1) / 2
}

#[inline]
pub(crate) fn pair_index(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(p < q && q < n);
    row_start(p, n) + (q - p - 1)
}

#[inline]
fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn all_preimages(dfa: &Dfa) -> Vec<Preimages> {
    (0..dfa.letters())
        .map(|x| Preimages::of_row(dfa.row(x)))
        .collect()
}

/// Ordered pairs `(p, q)` as an `n × n` bit matrix, row `p` holding every `q`.
struct PairMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl PairMatrix {
    fn with_diagonal(n: usize) -> Self {
        let stride = n.div_ceil(64);
        let mut m = PairMatrix {
            n,
            stride,
            words: vec![0; n * stride],
        };
        for p in 0..n {
            m.words[p * stride + p / 64] |= 1 << (p % 64);
        }
        m
    }

    /// Sets `(p, q)`; true if it was clear.
    #[inline]
    fn set(&mut self, p: usize, q: usize) -> bool {
        let (w, b) = (p * self.stride + q / 64, 1u64 << (q % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    /// Clear bits of word `w` in row `p`, restricted to real columns.
    #[inline]
    fn clear_bits(&self, p: usize, w: usize) -> u64 {
        let mut un = !self.words[p * self.stride + w];
        let tail = self.n - w * 64;
        if tail < 64 {
            un &= (1u64 << tail) - 1;
        }
        un
    }
}

/// Pull rounds run while they settle at least `1/PULL_RATIO` of the open pairs.
const PULL_RATIO: usize = 32;

/// Decides synchronizability: every ordered pair must reach the diagonal.
///
/// Correct on every instance. The search pushes preimages of newly merged pairs while
/// the worklist is small and switches to sweeps over the open pairs of each row once
/// it is large; a sweep of row `p` reads only rows `p.x`, which keeps it in cache.
/// Each sweep either settles a constant fraction of the open pairs or consumes a
/// worklist of comparable size, so the total work stays `O(k n^2)`. Memory is one
/// bit per ordered pair plus the worklist.
pub fn is_synchronizing_quadratic(dfa: &Dfa) -> bool {
    let n = dfa.states();
    if n <= 1 {
        return true;
    }
    let total = n * (n - 1);
    let pre = all_preimages(dfa);
    let mut merged = PairMatrix::with_diagonal(n);
    let mut reached = 0usize;
    let mut work: Vec<(u32, u32)> = Vec::new();
    for letter in &pre {
        for r in 0..n {
            let src = letter.of(r);
            for &s in src {
                for &t in src {
                    if s != t && merged.set(s as usize, t as usize) {
                        reached += 1;
                        work.push((s, t));
                    }
                }
            }
        }
    }
    // A sweep costs about one step per open pair and one per matrix word.
    let sweep_floor = n * merged.stride / 8;
    let worth_sweeping =
        |open: usize, settled: usize| settled > (open / PULL_RATIO).max(sweep_floor);
    let rows: Vec<&[u32]> = (0..dfa.letters()).map(|x| dfa.row(x)).collect();
    let mut image_rows = vec![0usize; rows.len()];

    loop {
        while let Some((p, q)) = work.pop() {
            for letter in &pre {
                for &s in letter.of(p as usize) {
                    for &t in letter.of(q as usize) {
                        if merged.set(s as usize, t as usize) {
                            reached += 1;
                            work.push((s, t));
                        }
                    }
                }
            }
            if worth_sweeping(total - reached, work.len()) {
                break;
            }
        }
        if work.is_empty() {
            return reached == total;
        }
        work.clear();

        // Sweeps; the pairs settled by the last one form the next worklist.
        loop {
            let open = total - reached;
            let limit = (open / PULL_RATIO).max(sweep_floor);
            let mut settled = 0usize;
            for p in 0..n {
                for (x, row) in rows.iter().enumerate() {
                    image_rows[x] = row[p] as usize * merged.stride;
                }
                for w in 0..merged.stride {
                    let mut un = merged.clear_bits(p, w);
                    let mut hits = 0u64;
                    if un == u64::MAX {
                        // Fully open word: a fixed-trip loop without the bit scan.
                        let base_q = w * 64;
                        for b in 0..64 {
                            let q = base_q + b;
                            let mut hit = 0u64;
                            for (row, &base) in rows.iter().zip(&image_rows) {
                                let qx = row[q] as usize;
                                hit |= merged.words[base + qx / 64] >> (qx % 64);
                            }
                            hits |= (hit & 1) << b;
                        }
                        un = 0;
                    }
                    while un != 0 {
                        let b = un.trailing_zeros();
                        un &= un - 1;
                        let q = w * 64 + b as usize;
                        let mut hit = 0u64;
                        for (row, &base) in rows.iter().zip(&image_rows) {
                            let qx = row[q] as usize;
                            hit |= merged.words[base + qx / 64] >> (qx % 64);
                        }
                        hits |= (hit & 1) << b;
                    }
                    if hits == 0 {
                        continue;
                    }
                    merged.words[p * merged.stride + w] |= hits;
                    settled += hits.count_ones() as usize;
                    while hits != 0 && work.len() <= limit {
                        work.push((p as u32, (w * 64) as u32 + hits.trailing_zeros()));
                        hits &= hits - 1;
                    }
                }
            }
            reached += settled;
            if settled == 0 || reached == total {
                return reached == total;
            }
            if !worth_sweeping(open, settled) {
                break;
            }
            work.clear();
        }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Shortest merge distances for all unordered pairs, with one letter per pair
/// pointing toward the diagonal.
#[derive(Clone, Debug)]
pub struct PairBfsTable {
    n: usize,
    dist: Vec<u32>,
    via: Vec<u32>,
}

impl PairBfsTable {
    pub fn build(dfa: &Dfa) -> Self {
        let n = dfa.states();
        let total = pair_count(n);
        let mut dist = vec![UNREACHED; total];
        let mut via = vec![0u32; total];
        let pre = all_preimages(dfa);
        let mut queue: Vec<(u32, u32)> = Vec::new();

        for (x, p) in pre.iter().enumerate() {
            for r in 0..n {
                let src = p.of(r);
                for (i, &s) in src.iter().enumerate() {
                    for &t in &src[i + 1..] {
                        let idx = pair_index(s as usize, t as usize, n);
                        if dist[idx] == UNREACHED {
                            dist[idx] = 1;
                            via[idx] = x as u32;
                            queue.push((s, t));
                        }
                    }
                }
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let (p, q) = queue[head];
            head += 1;
            let d = dist[pair_index(p as usize, q as usize, n)];
            for (x, letter) in pre.iter().enumerate() {
                for &s in letter.of(p as usize) {
                    for &t in letter.of(q as usize) {
                        let (a, b) = ordered(s, t);
                        let idx = pair_index(a as usize, b as usize, n);
                        if dist[idx] == UNREACHED {
                            dist[idx] = d + 1;
                            via[idx] = x as u32;
                            queue.push((a, b));
                        }
                    }
                }
            }
        }
        PairBfsTable { n, dist, via }
    }

    pub fn states(&self) -> usize {
        self.n
    }

    /// Length of a shortest merging word, `Some(0)` on the diagonal.
    pub fn distance(&self, p: usize, q: usize) -> Option<usize> {
        if p == q {
            return Some(0);
        }
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        match self.dist[pair_index(a, b, self.n)] {
            UNREACHED => None,
            d => Some(d as usize),
        }
    }

    pub fn all_pairs_mergeable(&self) -> bool {
        self.dist.iter().all(|&d| d != UNREACHED)
    }

    /// Follows the stored letters from `{p, q}` down to the diagonal.
    pub fn merge_word(&self, dfa: &Dfa, p: usize, q: usize) -> Option<Word> {
        let len = self.distance(p, q)?;
        let (mut p, mut q) = (p, q);
        let mut word = Word::empty();
        while p != q {
            let (a, b) = if p < q { (p, q) } else { (q, p) };
            let x = self.via[pair_index(a, b, self.n)] as usize;
            word.push(x);
            p = dfa.step(p, x);
            q = dfa.step(q, x);
        }
        debug_assert_eq!(word.len(), len);
        Some(word)
    }
}

/// A shortest word merging `p` and `q`, if any.
pub fn merge_word(dfa: &Dfa, p: usize, q: usize) -> Result<Option<Word>> {
    dfa.check_state(p)?;
    dfa.check_state(q)?;
    if p == q {
        return Ok(Some(Word::empty()));
    }
    Ok(PairBfsTable::build(dfa).merge_word(dfa, p, q))
}
