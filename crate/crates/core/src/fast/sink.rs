//! Sink strongly connected components (Tarjan, iterative) and restriction to a sink.

use crate::automaton::Dfa;

const UNSEEN: u32 = u32::MAX;

/// Strongly connected components of the transition graph, tagged with whether each
/// one is closed under every letter.
pub(crate) struct Condensation {
    pub(crate) comp_of: Vec<u32>,
    pub(crate) is_sink: Vec<bool>,
    pub(crate) visits: usize,
}

impl Condensation {
    pub(crate) fn sinks(&self) -> impl Iterator<Item = usize> + '_ {
        self.is_sink
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(c, _)| c)
    }

    pub(crate) fn sink_count(&self) -> usize {
        self.is_sink.iter().filter(|&&s| s).count()
    }

    pub(crate) fn members(&self, comp: usize) -> Vec<usize> {
        self.comp_of
            .iter()
            .enumerate()
            .filter(|(_, &c)| c as usize == comp)
            .map(|(q, _)| q)
            .collect()
    }
}

pub(crate) fn condensation(dfa: &Dfa) -> Condensation {
    // Pearce's variant of Tarjan's algorithm: one index array, reused for the final
    // component ids, which count down from `n - 1` so that finished states always
    // compare above live ones.
    let n = dfa.states();
    let k = dfa.letters();
    let mut rindex = vec![UNSEEN; n];
    let mut is_root = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = n as u32;
    let mut visits = 0usize;
    // (state, next letter to explore)
    let mut call: Vec<(u32, u32)> = Vec::new();

    for start in 0..n {
        if rindex[start] != UNSEEN {
            continue;
        }
        rindex[start] = next_index;
        next_index += 1;
        is_root[start] = true;
        call.push((start as u32, 0));
        visits += 1;

        while let Some(top) = call.last_mut() {
            let v = top.0 as usize;
            if (top.1 as usize) < k {
                let w = dfa.step(v, top.1 as usize);
                if rindex[w] == UNSEEN {
                    rindex[w] = next_index;
                    next_index += 1;
                    is_root[w] = true;
                    call.push((w as u32, 0));
                    continue;
                }
                top.1 += 1;
                visits += 1;
                if rindex[w] < rindex[v] {
                    rindex[v] = rindex[w];
                    is_root[v] = false;
                }
                continue;
            }
            call.pop();
            if !is_root[v] {
                stack.push(v as u32);
                continue;
            }
            next_comp -= 1;
            next_index -= 1;
            while let Some(&w) = stack.last() {
                if rindex[v] > rindex[w as usize] {
                    break;
                }
                stack.pop();
                rindex[w as usize] = next_comp;
                next_index -= 1;
            }
            rindex[v] = next_comp;
        }
    }
    // Renumber components densely in order of completion.
    let comps = (n as u32 - next_comp) as usize;
    let mut comp_of = rindex;
    for c in comp_of.iter_mut() {
        *c = n as u32 - 1 - *c;
    }
    let mut is_sink = vec![true; comps];
    // A component is a sink iff no member has an edge leaving it.
    for q in 0..n {
        let c = comp_of[q];
        if !is_sink[c as usize] {
            continue;
        }
        for x in 0..k {
            if comp_of[dfa.step(q, x)] != c {
                is_sink[c as usize] = false;
                break;
            }
        }
    }
    visits += n * k;
    Condensation {
        comp_of,
        is_sink,
        visits,
    }
}

/// Strongly connected components with no transition leaving them, each sorted, the
/// list ordered by smallest member.
pub fn sink_components(dfa: &Dfa) -> Vec<Vec<usize>> {
    let cond = condensation(dfa);
    let mut slot = vec![usize::MAX; cond.is_sink.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (q, &c) in cond.comp_of.iter().enumerate() {
        let c = c as usize;
        if !cond.is_sink[c] {
            continue;
        }
        if slot[c] == usize::MAX {
            slot[c] = out.len();
            out.push(Vec::new());
        }
        out[slot[c]].push(q);
    }
    out
}

/// The sub-automaton on a closed set of states, renumbered in increasing order.
pub(crate) fn restrict(dfa: &Dfa, members: &[usize]) -> Dfa {
    let mut new_id = vec![u32::MAX; dfa.states()];
    for (i, &q) in members.iter().enumerate() {
        new_id[q] = i as u32;
    }
    let m = members.len();
    let mut delta = Vec::with_capacity(m * dfa.letters());
    for x in 0..dfa.letters() {
        let row = dfa.row(x);
        for &q in members {
            let t = new_id[row[q] as usize];
            debug_assert!(t != u32::MAX, "restriction to a set that is not closed");
            delta.push(t);
        }
    }
    Dfa::from_table_unchecked(m, dfa.letters(), delta)
}
