//! Seed pair from the highest tree and its extension to larger sets of images.

use std::collections::{HashSet, VecDeque};

use crate::automaton::Dfa;
use crate::functional::{ClusterStructure, HighestTreeInfo};

/// Unordered state pairs, stored as `(min, max)`, all images of one seed pair: under
/// powers of `provenance_letter`, or under arbitrary words when it is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePairSet {
    pub provenance_letter: Option<usize>,
    pub pairs: Vec<(usize, usize)>,
}

#[inline]
fn canonical(p: usize, q: usize) -> (usize, usize) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// `p`: smallest level-1 ancestor of the highest tree's maximal-level vertices.
/// `q`: the cycle predecessor of the tree's root, so that `p.a = q.a`.
///
/// `None` when the tree has height 0 and therefore no level-1 vertex.
pub fn find_initial_stable_pair(
    dfa: &Dfa,
    ht: &HighestTreeInfo,
    cs: &ClusterStructure,
) -> Option<(usize, usize)> {
    if ht.height == 0 {
        return None;
    }
    let a = ht.letter;
    let mut layer = ht.top_vertices.clone();
    for _ in 1..ht.height {
        for v in layer.iter_mut() {
            *v = dfa.step(*v, a);
        }
        layer.sort_unstable();
        layer.dedup();
    }
    let p = *layer.first()?;
    debug_assert_eq!(cs.level_of(p), 1);
    let q = cs.cycle_predecessor(ht.tree_root);
    assert_eq!(
        dfa.step(p, a),
        dfa.step(q, a),
        "seed pair must merge under its letter"
    );
    assert_ne!(p, q, "a level-1 state is never on the cycle");
    Some((p, q))
}

/// The first `target` pairs `{p.x^i, q.x^i}`, `i = 0, 1, ...`.
///
/// Absent when the orbit reaches the diagonal, repeats a pair, or needs more than
/// `budget` steps before `target` distinct pairs are collected.
pub fn extend_stable_pairs(
    dfa: &Dfa,
    seed: (usize, usize),
    orbit_letter: usize,
    target: usize,
    budget: usize,
) -> Option<StablePairSet> {
    let (mut p, mut q) = seed;
    let mut seen = HashSet::with_capacity(target);
    let mut pairs = Vec::with_capacity(target);
    let mut steps = 0usize;
    while pairs.len() < target {
        if p == q || steps > budget {
            return None;
        }
        let pair = canonical(p, q);
        if !seen.insert(pair) {
            return None;
        }
        pairs.push(pair);
        p = dfa.step(p, orbit_letter);
        q = dfa.step(q, orbit_letter);
        steps += 1;
    }
    Some(StablePairSet {
        provenance_letter: Some(orbit_letter),
        pairs,
    })
}

/// The first `target` distinct unmerged images of `seed` in breadth-first order over
/// all words, the seed included.
///
/// Absent when fewer images exist or more than `budget` images are examined.
pub fn spread_stable_pairs(
    dfa: &Dfa,
    seed: (usize, usize),
    target: usize,
    budget: usize,
) -> Option<StablePairSet> {
    let start = canonical(seed.0, seed.1);
    if start.0 == start.1 {
        return None;
    }
    let mut seen = HashSet::with_capacity(2 * target);
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    let mut pairs = Vec::with_capacity(target);
    let mut examined = 0usize;
    while let Some((p, q)) = queue.pop_front() {
        pairs.push((p, q));
        if pairs.len() == target {
            return Some(StablePairSet {
                provenance_letter: None,
                pairs,
            });
        }
        for x in 0..dfa.letters() {
            examined += 1;
            if examined > budget {
                return None;
            }
            let next = canonical(dfa.step(p, x), dfa.step(q, x));
            if next.0 != next.1 && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    None
}
