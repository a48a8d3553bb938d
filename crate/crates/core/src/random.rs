//! Seeded sampling of uniformly random automata and Set-Cover instances.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded with
//! `SeedableRng::seed_from_u64(seed)`. Bounded integers in `0..bound` come from
//! Lemire's widening-multiply method with rejection on the low word, consuming one
//! `next_u64` per attempt. Automata are filled letter-major, state-minor. With these
//! three pinned, a corpus is reproducible by any implementation.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::automaton::Dfa;
use crate::pair::is_synchronizing_quadratic;
use crate::setcover::SetCoverInstance;

/// Deterministic source of uniform bounded integers and unit-interval reals.
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.inner.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform real in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Each letter's map drawn independently and uniformly from the `n^n` maps.
pub fn sample_dfa(n: usize, k: usize, seed: u64) -> Dfa {
    assert!(n >= 1 && k >= 1, "need at least one state and one letter");
    let mut rng = SeededRng::new(seed);
    let delta = (0..n * k).map(|_| rng.below(n as u64) as u32).collect();
    Dfa::from_table_unchecked(n, k, delta)
}

/// Seed of trial `i` in a batch started at `seed`.
#[inline]
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_add(i)
}

/// Fraction of sampled automata that the quadratic checker declares synchronizing.
pub fn estimate_sync_probability(n: usize, k: usize, trials: u64, seed: u64) -> f64 {
    assert!(trials >= 1, "trials must be positive");
    let yes = (0..trials)
        .filter(|&i| is_synchronizing_quadratic(&sample_dfa(n, k, trial_seed(seed, i))))
        .count();
    yes as f64 / trials as f64
}

/// Random Set-Cover instance: each element joins each subset independently with
/// probability `density`; elements left uncovered are then added to subset 1, and any
/// subset still empty receives one uniformly drawn element.
pub fn sample_set_cover(n: usize, m: usize, density: f64, seed: u64) -> SetCoverInstance {
    assert!(n >= 1 && m >= 1, "need a non-empty universe and family");
    let mut rng = SeededRng::new(seed);
    let mut subsets: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.unit() < density).collect())
        .collect();
    let mut covered = vec![false; n];
    for s in &subsets {
        for &e in s {
            covered[e] = true;
        }
    }
    for (e, c) in covered.iter().enumerate() {
        if !c {
            subsets[0].push(e);
        }
    }
    subsets[0].sort_unstable();
    for s in subsets.iter_mut() {
        if s.is_empty() {
            s.push(rng.below(n as u64) as usize);
        }
    }
    SetCoverInstance::new(n, subsets).expect("repaired instance covers the universe")
}
