//! Detection of small-cluster configurations that no escape route can merge.

use crate::automaton::{Dfa, StateSet};
use crate::functional::ClusterStructure;

/// Result of the small-cluster scan together with the pair evaluations it spent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinalCheck {
    pub bad: bool,
    pub evaluations: usize,
}

/// True iff two small a-clusters `C_p`, `C_q` (possibly equal) and a residue `x` exist
/// such that the pairs `p1 ∈ C_p, p2 ∈ C_q` with `d | lvl(p1) - lvl(p2) + x` are
/// non-empty and all blocked. A pair is blocked when it meets `T_b`, its image under
/// `b` meets `T_a`, and its image under `b²` meets `T_a`.
///
/// Small a-clusters are the clusters of `cs_a` whose states lie in `t_a`. If the scan
/// would exceed `budget` pair evaluations the configuration is reported as bad.
pub fn final_small_cluster_check(
    dfa: &Dfa,
    cs_a: &ClusterStructure,
    cs_b: &ClusterStructure,
    t_a: &StateSet,
    t_b: &StateSet,
    d: usize,
    budget: usize,
) -> FinalCheck {
    debug_assert_eq!(cs_a.states(), dfa.states());
    debug_assert_eq!(cs_b.states(), dfa.states());
    assert!(d >= 1, "modulus must be positive");
    let b = cs_b.letter();
    let members = small_cluster_members(cs_a, t_a);

    let cost: usize = members
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            members[i..]
                .iter()
                .map(|cj| ci.len() * cj.len())
                .sum::<usize>()
        })
        .sum();
    if cost > budget {
        return FinalCheck {
            bad: true,
            evaluations: 0,
        };
    }

    let blocked = |p1: usize, p2: usize| {
        let (b1, b2) = (dfa.step(p1, b), dfa.step(p2, b));
        (t_b.contains(p1) || t_b.contains(p2))
            && (t_a.contains(b1) || t_a.contains(b2))
            && (t_a.contains(dfa.step(b1, b)) || t_a.contains(dfa.step(b2, b)))
    };

    let mut evaluations = 0usize;
    let mut present = vec![false; d];
    let mut escaped = vec![false; d];
    for (i, cp) in members.iter().enumerate() {
        for cq in &members[i..] {
            present.iter_mut().for_each(|v| *v = false);
            escaped.iter_mut().for_each(|v| *v = false);
            for &p1 in cp {
                for &p2 in cq {
                    evaluations += 1;
                    let x = (cs_a.level_of(p2) % d + d - cs_a.level_of(p1) % d) % d;
                    present[x] = true;
                    if !escaped[x] && !blocked(p1, p2) {
                        escaped[x] = true;
                    }
                }
            }
            if present.iter().zip(&escaped).any(|(&p, &e)| p && !e) {
                return FinalCheck {
                    bad: true,
                    evaluations,
                };
            }
        }
    }
    FinalCheck {
        bad: false,
        evaluations,
    }
}

/// States of each a-cluster that meets `t_a`, clusters in id order.
fn small_cluster_members(cs_a: &ClusterStructure, t_a: &StateSet) -> Vec<Vec<usize>> {
    let mut slot = vec![usize::MAX; cs_a.num_clusters()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    for q in t_a.iter() {
        let c = cs_a.cluster_of(q);
        if slot[c] == usize::MAX {
            slot[c] = out.len();
            out.push(Vec::new());
            order.push(c);
        }
        out[slot[c]].push(q);
    }
    let mut idx: Vec<usize> = (0..out.len()).collect();
    idx.sort_by_key(|&i| order[i]);
    idx.into_iter()
        .map(|i| std::mem::take(&mut out[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::CollectStates;
    use crate::functional::cluster_structure;

    /// Literal evaluation: every cluster pair, every residue, every pair of states.
    fn brute(
        dfa: &Dfa,
        cs_a: &ClusterStructure,
        cs_b: &ClusterStructure,
        t_a: &StateSet,
        t_b: &StateSet,
        d: usize,
    ) -> bool {
        let b = cs_b.letter();
        let small: Vec<usize> = (0..cs_a.num_clusters())
            .filter(|&c| (0..dfa.states()).any(|q| cs_a.cluster_of(q) == c && t_a.contains(q)))
            .collect();
        let states_of = |c: usize| (0..dfa.states()).filter(move |&q| cs_a.cluster_of(q) == c);
        let hits = |set: &StateSet, u: usize, v: usize| set.contains(u) || set.contains(v);
        for &cp in &small {
            for &cq in &small {
                for x in 0..d {
                    let mut any = false;
                    let mut all_blocked = true;
                    for p1 in states_of(cp) {
                        for p2 in states_of(cq) {
                            let lhs =
                                cs_a.level_of(p1) as i64 - cs_a.level_of(p2) as i64 + x as i64;
                            if lhs.rem_euclid(d as i64) != 0 {
                                continue;
                            }
                            any = true;
                            let b1 = [dfa.step(p1, b), dfa.step(p2, b)];
                            let b2 = [dfa.step(b1[0], b), dfa.step(b1[1], b)];
                            let blocked = hits(t_b, p1, p2)
                                && hits(t_a, b1[0], b1[1])
                                && hits(t_a, b2[0], b2[1]);
                            all_blocked &= blocked;
                        }
                    }
                    if any && all_blocked {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn small_sets(
        dfa: &Dfa,
        threshold: usize,
    ) -> (ClusterStructure, ClusterStructure, StateSet, StateSet) {
        let cs_a = cluster_structure(dfa, 0).unwrap();
        let cs_b = cluster_structure(dfa, 1).unwrap();
        let n = dfa.states();
        let t_a = (0..n)
            .filter(|&q| cs_a.cluster_size(cs_a.cluster_of(q)) < threshold)
            .collect_in(n);
        let t_b = (0..n)
            .filter(|&q| cs_b.cluster_size(cs_b.cluster_of(q)) < threshold)
            .collect_in(n);
        (cs_a, cs_b, t_a, t_b)
    }

    #[test]
    fn no_small_clusters() {
        let d = crate::random::sample_dfa(30, 2, 3);
        let cs_a = cluster_structure(&d, 0).unwrap();
        let cs_b = cluster_structure(&d, 1).unwrap();
        let empty = StateSet::new(30);
        let r = final_small_cluster_check(&d, &cs_a, &cs_b, &empty, &empty, 3, 1000);
        assert_eq!(
            r,
            FinalCheck {
                bad: false,
                evaluations: 0
            }
        );
    }

    #[test]
    fn isolated_fixed_point_is_blocked() {
        // State 2 is fixed by both letters and forms its own small cluster for each.
        let d = Dfa::from_rows(3, &[vec![1, 0, 2], vec![1, 0, 2]]).unwrap();
        let cs_a = cluster_structure(&d, 0).unwrap();
        let cs_b = cluster_structure(&d, 1).unwrap();
        let single = [2].into_iter().collect_in(3);
        let r = final_small_cluster_check(&d, &cs_a, &cs_b, &single, &single, 1, 100);
        assert!(r.bad);
        assert!(brute(&d, &cs_a, &cs_b, &single, &single, 1));
    }

    #[test]
    fn exceeding_the_budget_is_bad() {
        let d = crate::random::sample_dfa(40, 2, 1);
        let (cs_a, cs_b, t_a, t_b) = small_sets(&d, 100);
        assert!(final_small_cluster_check(&d, &cs_a, &cs_b, &t_a, &t_b, 1, 10).bad);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut bad = 0;
        let mut total = 0;
        for seed in 0..60u64 {
            let (n, threshold) = match seed % 3 {
                0 => (500, (500f64).powf(0.45).ceil() as usize),
                1 => (40, 12),
                _ => (25, 40),
            };
            let d = crate::random::sample_dfa(n, 2, 500 + seed);
            let (cs_a, cs_b, t_a, t_b) = small_sets(&d, threshold);
            for modulus in [1, 2, 3] {
                let fast =
                    final_small_cluster_check(&d, &cs_a, &cs_b, &t_a, &t_b, modulus, usize::MAX);
                assert_eq!(
                    fast.bad,
                    brute(&d, &cs_a, &cs_b, &t_a, &t_b, modulus),
                    "seed {seed} d {modulus}"
                );
                bad += fast.bad as usize;
                total += 1;
            }
        }
        // Both outcomes occur in the corpus, so the comparison is not vacuous.
        assert!(bad > 0 && bad < total, "bad count {bad} of {total}");
    }
}
