//! Expected-linear synchronizability check for random automata.
//!
//! The check is a staged pipeline. Each stage verifies a structural property that a
//! uniformly random automaton has with high probability; whenever one fails the
//! instance is handed to [`is_synchronizing_quadratic`], so the answer never depends
//! on luck, only the running time does.
//!
//! | stage | work |
//! |-------|------|
//! | S0 | tiny automata go straight to the quadratic check |
//! | S1 | sink components: several ⇒ certified `no`; restrict to the unique one |
//! | S2 | cluster structures of both letters, few cycles each |
//! | S3 | a letter `a` with a unique highest tree and a large top set |
//! | S4 | seed pair `(p, q)` with `p.a = q.a` |
//! | S5 | pair sets along the orbits of the other letter |
//! | S6 | large a-clusters connected by the pairs, covering almost every state |
//! | S7 | cycle phases modulo the gcd are not consistent with the pairs |
//! | S8 | S6 and S7 for `b` |
//! | S9 | no small-cluster configuration blocks every escape route |

mod cluster_graph;
mod final_check;
mod sink;
mod stable;

use std::fmt;

pub use cluster_graph::{divisibility_consistent, gcd, phase, ClusterGraph};
pub use final_check::{final_small_cluster_check, FinalCheck};
pub use sink::sink_components;
pub use stable::{
    extend_stable_pairs, find_initial_stable_pair, spread_stable_pairs, StablePairSet,
};

use crate::automaton::{CollectStates, Dfa, Preimages, StateSet};
use crate::functional::ClusterStructure;
use crate::pair::is_synchronizing_quadratic;

/// Thresholds and budgets of the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct FastCheckConfig {
    /// Automata with fewer states skip the pipeline.
    pub small_n_gate: usize,
    /// Minimal size of the unique sink component, as a fraction of `n`.
    pub sink_fraction: f64,
    /// At most `cycle_factor · ln n` clusters per letter.
    pub cycle_factor: f64,
    /// The highest tree's top set needs at least `top_set_factor · ln n` vertices.
    pub top_set_factor: f64,
    /// Pair sets hold `⌈n^pair_exponent⌉` pairs.
    pub pair_exponent: f64,
    /// Clusters of at least `n^cluster_exponent` states are large.
    pub cluster_exponent: f64,
    /// Pair collection may examine `c_ext · target` images.
    pub c_ext: usize,
    /// The small-cluster scan may evaluate `c_fin · n` pairs.
    pub c_fin: usize,
    /// Cross-check every fast `yes` against the quadratic check.
    pub paranoid: bool,
}

impl Default for FastCheckConfig {
    fn default() -> Self {
        FastCheckConfig {
            small_n_gate: 64,
            sink_fraction: 1.0 / (4.0 * std::f64::consts::E * std::f64::consts::E),
            cycle_factor: 5.0,
            top_set_factor: 2.0,
            pair_exponent: 0.7,
            cluster_exponent: 0.45,
            c_ext: 4,
            c_fin: 8,
            paranoid: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    FastNo,
    FastYes,
    Fallback,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::FastNo => "fast-no",
            Path::FastYes => "fast-yes",
            Path::Fallback => "fallback",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    S0,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastCheckOutcome {
    pub answer: bool,
    pub path: Path,
    /// Last stage entered.
    pub stage: Stage,
    /// The stage whose precondition failed, on the fallback path.
    pub fallback_reason: Option<Stage>,
    /// Two states in distinct sink components, on the fast-no path.
    pub witness: Option<(usize, usize)>,
    /// State and pair visits spent outside the quadratic fallback.
    pub visits: usize,
    /// Paranoid mode only: the fast `yes` contradicted the quadratic check.
    pub discrepancy: bool,
}

impl fmt::Display for FastCheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let answer = if self.answer { "yes" } else { "no" };
        write!(f, "{answer} path={} stage={}", self.path, self.stage)
    }
}

enum Verdict {
    Yes(Stage),
    No(Stage, (usize, usize)),
    Fallback(Stage),
}

/// Decides synchronizability, exactly, in expected linear time on random automata.
pub fn is_synchronizing_fast(dfa: &Dfa) -> FastCheckOutcome {
    is_synchronizing_fast_with(dfa, &FastCheckConfig::default())
}

pub fn is_synchronizing_fast_with(dfa: &Dfa, config: &FastCheckConfig) -> FastCheckOutcome {
    let mut visits = 0usize;
    let verdict = if dfa.letters() <= 2 {
        pipeline(dfa, config, &mut visits)
    } else {
        // Extra letters can only help: a two-letter yes lifts to the full alphabet.
        let two = dfa
            .with_letters(2)
            .expect("automaton has at least two letters");
        match pipeline(&two, config, &mut visits) {
            Verdict::Yes(stage) => Verdict::Yes(stage),
            Verdict::No(stage, _) | Verdict::Fallback(stage) => Verdict::Fallback(stage),
        }
    };
    let mut out = FastCheckOutcome {
        answer: false,
        path: Path::Fallback,
        stage: Stage::S0,
        fallback_reason: None,
        witness: None,
        visits,
        discrepancy: false,
    };
    match verdict {
        Verdict::Yes(stage) => {
            out.answer = true;
            out.path = Path::FastYes;
            out.stage = stage;
            if config.paranoid && !is_synchronizing_quadratic(dfa) {
                out.answer = false;
                out.discrepancy = true;
            }
        }
        Verdict::No(stage, witness) => {
            out.path = Path::FastNo;
            out.stage = stage;
            out.witness = Some(witness);
        }
        Verdict::Fallback(stage) => {
            out.stage = stage;
            out.fallback_reason = Some(stage);
            out.answer = is_synchronizing_quadratic(dfa);
        }
    }
    out
}

fn pipeline(dfa: &Dfa, config: &FastCheckConfig, visits: &mut usize) -> Verdict {
    use Verdict::{Fallback, No, Yes};

    let n = dfa.states();
    if n < config.small_n_gate {
        return Fallback(Stage::S0);
    }

    // S1
    let cond = sink::condensation(dfa);
    *visits += cond.visits;
    let mut sinks = cond.sinks();
    let Some(first) = sinks.next() else {
        unreachable!("a finite graph has a sink component");
    };
    if let Some(second) = sinks.next() {
        let pick = |c: usize| cond.comp_of.iter().position(|&x| x as usize == c).unwrap();
        *visits += n;
        return No(Stage::S1, (pick(first), pick(second)));
    }
    debug_assert_eq!(cond.sink_count(), 1);
    let members = cond.members(first);
    *visits += n;
    if members.len() == 1 {
        // A state fixed by every letter and reachable from everywhere.
        return Yes(Stage::S1);
    }
    if (members.len() as f64) < config.sink_fraction * n as f64 {
        return Fallback(Stage::S1);
    }
    let sub = if members.len() == n {
        dfa.clone()
    } else {
        sink::restrict(dfa, &members)
    };
    *visits += sub.states() * sub.letters();
    if sub.letters() == 1 {
        // A single letter permuting a cycle of length > 1 never synchronizes, but the
        // fast path only certifies the multi-sink case.
        return Fallback(Stage::S2);
    }

    // Thresholds for the restricted automaton.
    let m = sub.states();
    let ln = (m as f64).ln();
    let big = (m as f64).powf(config.cluster_exponent);
    let target = (m as f64).powf(config.pair_exponent).ceil() as usize;
    let ext_budget = config.c_ext * target;

    // S2
    let structures: Vec<ClusterStructure> = (0..2)
        .map(|x| {
            let pre = Preimages::of_row(sub.row(x));
            ClusterStructure::from_row(x, sub.row(x), &pre)
        })
        .collect();
    for cs in &structures {
        *visits += m + cs.visits();
    }
    if structures
        .iter()
        .any(|cs| cs.num_clusters() as f64 > config.cycle_factor * ln)
    {
        return Fallback(Stage::S2);
    }

    // S3
    let chosen = structures.iter().find_map(|cs| {
        let ht = cs.highest_tree_info()?;
        (ht.top_set_size as f64 >= config.top_set_factor * ln).then_some(ht)
    });
    *visits += structures.iter().map(|cs| cs.num_clusters()).sum::<usize>();
    let Some(ht) = chosen else {
        return Fallback(Stage::S3);
    };
    let a = ht.letter;
    let b = 1 - a;
    let (cs_a, cs_b) = (&structures[a], &structures[b]);

    // S4
    *visits += ht.tree_size;
    let Some(seed) = find_initial_stable_pair(&sub, &ht, cs_a) else {
        return Fallback(Stage::S4);
    };

    // S5: images of the seed under short words; any image of a stable pair is stable.
    let Some(pairs) = spread_stable_pairs(&sub, seed, target, ext_budget) else {
        *visits += ext_budget;
        return Fallback(Stage::S5);
    };
    *visits += 2 * pairs.pairs.len();
    let (pairs_a, pairs_b) = (&pairs, &pairs);

    // S6, S7 for a; S8 repeats both for b.
    let mut gcd_a = 1;
    for (cs, pairs, vertex_stage) in [(cs_a, pairs_a, Stage::S6), (cs_b, pairs_b, Stage::S8)] {
        let graph = ClusterGraph::build(cs, pairs, big);
        *visits += cs.num_clusters() + pairs.pairs.len() + graph.edges.len() * graph.vertices.len();
        if graph.vertices.is_empty() || !graph.is_connected() {
            return Fallback(vertex_stage);
        }
        let d = graph.cycle_gcd(cs);
        if vertex_stage == Stage::S6 {
            gcd_a = d;
        }
        if d > 1 {
            let inside = StablePairSet {
                provenance_letter: pairs.provenance_letter,
                pairs: pairs
                    .pairs
                    .iter()
                    .copied()
                    .filter(|&(p, q)| {
                        graph.vertices.binary_search(&cs.cluster_of(p)).is_ok()
                            && graph.vertices.binary_search(&cs.cluster_of(q)).is_ok()
                    })
                    .collect(),
            };
            *visits += pairs.pairs.len();
            if divisibility_consistent(cs, &inside, d) {
                return Fallback(if vertex_stage == Stage::S6 {
                    Stage::S7
                } else {
                    Stage::S8
                });
            }
        }
    }

    // S9
    let small = |cs: &ClusterStructure| {
        (0..m)
            .filter(|&q| (cs.cluster_size(cs.cluster_of(q)) as f64) < big)
            .collect_in(m)
    };
    let (t_a, t_b): (StateSet, StateSet) = (small(cs_a), small(cs_b));
    *visits += 2 * m;
    let check = final_small_cluster_check(&sub, cs_a, cs_b, &t_a, &t_b, gcd_a, config.c_fin * n);
    *visits += check.evaluations;
    if check.bad {
        return Fallback(Stage::S9);
    }
    Yes(Stage::S9)
}
