//! Cluster structure of a single letter's functional graph.
//!
//! Every component (cluster) of the graph `q → q.x` is one cycle with trees hanging
//! off its states. The decomposition walks from each unassigned state until the walk
//! closes a cycle, then runs a reverse breadth-first search down the trees from every
//! cycle state. Each state is touched at most twice.

use crate::automaton::{Dfa, Preimages};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Decomposition of `UG(x)` for one letter `x`.
///
/// Cluster ids are dense indices `0..num_clusters()` in discovery order; the
/// discovery state of cluster `i` ([`ClusterStructure::cluster_label`]) is its
/// smallest state. Trees are identified by their root cycle state.
#[derive(Clone, Debug)]
pub struct ClusterStructure {
    letter: usize,
    cluster_of: Vec<u32>,
    tree_of: Vec<u32>,
    level_of: Vec<u32>,
    /// For cycle states, the position along the cycle starting from the state where
    /// the discovery walk closed it.
    cycle_pos: Vec<u32>,
    cluster_label: Vec<u32>,
    cluster_size: Vec<u32>,
    /// Cycle states of all clusters in cycle order; cluster `i` owns
    /// `cycles[cycle_offset[i]..cycle_offset[i + 1]]`.
    cycles: Vec<u32>,
    cycle_offset: Vec<u32>,
    /// All states, trees contiguous and each tree in BFS (non-decreasing level) order.
    order: Vec<u32>,
    /// `(start, end)` into `order` of the tree rooted at `cycles[i]`.
    tree_span: Vec<(u32, u32)>,
    visits: usize,
}

/// The unique highest tree of a letter's functional graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestTreeInfo {
    pub letter: usize,
    pub tree_root: usize,
    pub height: usize,
    /// Maximal height over all other trees; `None` when the graph has a single tree.
    pub second_height: Option<usize>,
    pub tree_size: usize,
    /// `|H|`: vertices of the tree above every other tree.
    pub top_set_size: usize,
    /// Vertices of the tree at maximal level, ascending.
    pub top_vertices: Vec<usize>,
}

impl ClusterStructure {
    pub fn build(dfa: &Dfa, x: usize) -> Result<Self> {
        if x >= dfa.letters() {
            return Err(Error::LetterOutOfRange {
                letter: x,
                k: dfa.letters(),
            });
        }
        let row = dfa.row(x);
        let pre = Preimages::of_row(row);
        Ok(Self::from_row(x, row, &pre))
    }

    pub(crate) fn from_row(letter: usize, row: &[u32], pre: &Preimages) -> Self {
        let n = row.len();
        let mut cs = ClusterStructure {
            letter,
            cluster_of: vec![NONE; n],
            tree_of: vec![NONE; n],
            level_of: vec![0; n],
            cycle_pos: vec![NONE; n],
            cluster_label: Vec::new(),
            cluster_size: Vec::new(),
            cycles: Vec::new(),
            cycle_offset: vec![0],
            order: Vec::with_capacity(n),
            tree_span: Vec::new(),
            visits: 0,
        };
        // During a walk, `cluster_of` marks the states on it and `level_of` holds their
        // positions; the tree search below overwrites both.
        let mut path: Vec<u32> = Vec::new();

        for start in 0..n {
            if cs.cluster_of[start] != NONE {
                continue;
            }
            let cluster = cs.cluster_label.len() as u32;
            path.clear();
            let mut s = start as u32;
            // The walk cannot enter an earlier cluster: those are fully assigned and
            // closed under preimages.
            while cs.cluster_of[s as usize] != cluster {
                cs.visits += 1;
                cs.cluster_of[s as usize] = cluster;
                cs.level_of[s as usize] = path.len() as u32;
                path.push(s);
                s = row[s as usize];
            }
            let cycle = &path[cs.level_of[s as usize] as usize..];
            for (i, &c) in cycle.iter().enumerate() {
                cs.cycle_pos[c as usize] = i as u32;
                cs.tree_of[c as usize] = c;
                cs.level_of[c as usize] = 0;
            }
            let before = cs.order.len();
            for &root in cycle {
                let from = cs.order.len();
                cs.order.push(root);
                let mut head = from;
                while head < cs.order.len() {
                    let v = cs.order[head];
                    head += 1;
                    cs.visits += 1;
                    let lvl = cs.level_of[v as usize] + 1;
                    for &u in pre.of(v as usize) {
                        if cs.cycle_pos[u as usize] != NONE {
                            continue;
                        }
                        cs.level_of[u as usize] = lvl;
                        cs.tree_of[u as usize] = root;
                        cs.cluster_of[u as usize] = cluster;
                        cs.order.push(u);
                    }
                }
                cs.tree_span.push((from as u32, cs.order.len() as u32));
            }
            cs.cluster_label.push(start as u32);
            cs.cluster_size.push((cs.order.len() - before) as u32);
            cs.cycles.extend_from_slice(cycle);
            cs.cycle_offset.push(cs.cycles.len() as u32);
        }
        cs
    }

    pub fn letter(&self) -> usize {
        self.letter
    }

    pub fn states(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_label.len()
    }

    #[inline]
    pub fn cluster_of(&self, q: usize) -> usize {
        self.cluster_of[q] as usize
    }

    #[inline]
    pub fn tree_of(&self, q: usize) -> usize {
        self.tree_of[q] as usize
    }

    #[inline]
    pub fn level_of(&self, q: usize) -> usize {
        self.level_of[q] as usize
    }

    #[inline]
    pub fn on_cycle(&self, q: usize) -> bool {
        self.cycle_pos[q] != NONE
    }

    /// Position of `q`'s tree root along its cycle.
    #[inline]
    pub fn root_position(&self, q: usize) -> usize {
        self.cycle_pos[self.tree_of[q] as usize] as usize
    }

    pub fn cluster_label(&self, cluster: usize) -> usize {
        self.cluster_label[cluster] as usize
    }

    pub fn cluster_size(&self, cluster: usize) -> usize {
        self.cluster_size[cluster] as usize
    }

    pub fn cycle_len(&self, cluster: usize) -> usize {
        (self.cycle_offset[cluster + 1] - self.cycle_offset[cluster]) as usize
    }

    /// States visited by the decomposition (bounded by `2n`).
    pub fn visits(&self) -> usize {
        self.visits
    }

    /// Vertices of the tree rooted at `root` in BFS order; empty for non-roots.
    pub fn tree(&self, root: usize) -> &[u32] {
        if !self.on_cycle(root) {
            return &[];
        }
        let i = self.cycle_offset[self.cluster_of(root)] + self.cycle_pos[root];
        let (a, b) = self.tree_span[i as usize];
        &self.order[a as usize..b as usize]
    }

    /// Height of the tree rooted at cycle state `root`.
    pub fn tree_height(&self, root: usize) -> usize {
        self.tree(root)
            .last()
            .map_or(0, |&v| self.level_of(v as usize))
    }

    /// Cycle states of a cluster, in cycle order.
    pub fn cycle_states(&self, cluster: usize) -> &[u32] {
        &self.cycles[self.cycle_offset[cluster] as usize..self.cycle_offset[cluster + 1] as usize]
    }

    /// The cycle state mapped onto cycle state `root`.
    pub fn cycle_predecessor(&self, root: usize) -> usize {
        assert!(self.on_cycle(root), "state {root} is not on a cycle");
        let cycle = self.cycle_states(self.cluster_of(root));
        let pos = self.cycle_pos[root] as usize;
        cycle[(pos + cycle.len() - 1) % cycle.len()] as usize
    }

    /// Per cluster: `(id, size, cycle length, maximal tree height)`.
    pub fn cluster_summaries(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut height = vec![0usize; self.num_clusters()];
        for (q, &lvl) in self.level_of.iter().enumerate() {
            let c = self.cluster_of(q);
            height[c] = height[c].max(lvl as usize);
        }
        (0..self.num_clusters())
            .map(|c| (c, self.cluster_size(c), self.cycle_len(c), height[c]))
            .collect()
    }

    /// The tree of strictly maximal height, if exactly one tree attains it.
    pub fn highest_tree_info(&self) -> Option<HighestTreeInfo> {
        let roots = (0..self.states()).filter(|&q| self.on_cycle(q));
        let mut best: Option<(usize, usize)> = None;
        let mut second: Option<usize> = None;
        let mut tie = false;
        for r in roots {
            let h = self.tree_height(r);
            match best {
                None => best = Some((r, h)),
                Some((_, bh)) if h > bh => {
                    second = Some(bh);
                    best = Some((r, h));
                    tie = false;
                }
                Some((_, bh)) => {
                    if h == bh {
                        tie = true;
                    }
                    second = Some(second.map_or(h, |s| s.max(h)));
                }
            }
        }
        let (root, height) = best?;
        if tie {
            return None;
        }
        let tree = self.tree(root);
        let threshold = second.map_or(0, |s| s + 1);
        let first_above = tree.partition_point(|&v| self.level_of(v as usize) < threshold);
        let first_top = tree.partition_point(|&v| self.level_of(v as usize) < height);
        let mut top_vertices: Vec<usize> = tree[first_top..].iter().map(|&v| v as usize).collect();
        top_vertices.sort_unstable();
        Some(HighestTreeInfo {
            letter: self.letter,
            tree_root: root,
            height,
            second_height: second,
            tree_size: tree.len(),
            top_set_size: tree.len() - first_above,
            top_vertices,
        })
    }
}

pub fn cluster_structure(dfa: &Dfa, x: usize) -> Result<ClusterStructure> {
    ClusterStructure::build(dfa, x)
}

pub fn highest_tree_info(cs: &ClusterStructure) -> Option<HighestTreeInfo> {
    cs.highest_tree_info()
}
