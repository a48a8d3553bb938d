//! Connectivity of large clusters through stable pairs, and the cycle-phase
//! consistency test modulo the gcd of their cycle lengths.

use crate::functional::ClusterStructure;

use super::stable::StablePairSet;

/// Graph whose vertices are the clusters of at least `min_size` states and whose
/// edges join the clusters of both endpoints of a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl ClusterGraph {
    pub fn build(cs: &ClusterStructure, pairs: &StablePairSet, min_size: f64) -> Self {
        let vertices: Vec<usize> = (0..cs.num_clusters())
            .filter(|&c| cs.cluster_size(c) as f64 >= min_size)
            .collect();
        let is_vertex = |c: usize| vertices.binary_search(&c).is_ok();
        let mut edges: Vec<(usize, usize)> = pairs
            .pairs
            .iter()
            .map(|&(p, q)| {
                let (a, b) = (cs.cluster_of(p), cs.cluster_of(q));
                (a.min(b), a.max(b))
            })
            .filter(|&(a, b)| a != b && is_vertex(a) && is_vertex(b))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        ClusterGraph { vertices, edges }
    }

    /// True iff every vertex is reachable from the first one (vacuous when empty).
    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.vertices.first() else {
            return true;
        };
        let idx = |c: usize| {
            self.vertices
                .binary_search(&c)
                .expect("edge endpoint is a vertex")
        };
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![idx(first)];
        seen[idx(first)] = true;
        while let Some(v) = stack.pop() {
            let c = self.vertices[v];
            for &(a, b) in &self.edges {
                let other = if a == c {
                    b
                } else if b == c {
                    a
                } else {
                    continue;
                };
                let o = idx(other);
                if !seen[o] {
                    seen[o] = true;
                    stack.push(o);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Total number of states in the vertex clusters.
    pub fn mass(&self, cs: &ClusterStructure) -> usize {
        self.vertices.iter().map(|&c| cs.cluster_size(c)).sum()
    }

    /// Greatest common divisor of the vertex clusters' cycle lengths (0 when empty).
    pub fn cycle_gcd(&self, cs: &ClusterStructure) -> usize {
        self.vertices
            .iter()
            .fold(0, |g, &c| gcd(g, cs.cycle_len(c)))
    }
}

/// Euclid.
pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cycle phase of `q` modulo `d`: its level minus the cycle position of its tree root.
///
/// Applying the letter `t ≥ level` times lands `q` at cycle position
/// `root_position + t - level`, so two states keep a constant phase difference under
/// the letter precisely when `d` divides their cycle length.
#[inline]
pub fn phase(cs: &ClusterStructure, q: usize, d: usize) -> usize {
    let lvl = cs.level_of(q) % d;
    let pos = cs.root_position(q) % d;
    (lvl + d - pos) % d
}

/// Whether offsets `x_c ∈ Z_d`, one per cluster, exist with
/// `d | (phase(p) - phase(q)) - (x_cluster(p) - x_cluster(q))` for every pair.
///
/// Constraint propagation with a weighted union-find over clusters: a cluster first
/// seen gets offset 0 relative to its component, later constraints are checked.
pub fn divisibility_consistent(cs: &ClusterStructure, pairs: &StablePairSet, d: usize) -> bool {
    assert!(d >= 1, "modulus must be positive");
    let mut uf = OffsetUnionFind::new(cs.num_clusters(), d);
    pairs.pairs.iter().all(|&(p, q)| {
        let diff = (phase(cs, p, d) + d - phase(cs, q, d)) % d;
        uf.relate(cs.cluster_of(p), cs.cluster_of(q), diff)
    })
}

/// Union-find maintaining `x_v - x_root (mod d)` for every node.
struct OffsetUnionFind {
    parent: Vec<usize>,
    offset: Vec<usize>,
    d: usize,
}

impl OffsetUnionFind {
    fn new(n: usize, d: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
            d,
        }
    }

    /// Root of `v` and `x_v - x_root`.
    fn find(&mut self, v: usize) -> (usize, usize) {
        let mut path = Vec::new();
        let mut r = v;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress from the node nearest the root outward.
        for &u in path.iter().rev() {
            let p = self.parent[u];
            if p != r {
                self.offset[u] = (self.offset[u] + self.offset[p]) % self.d;
            }
            self.parent[u] = r;
        }
        (r, self.offset[v] % self.d)
    }

    /// Imposes `x_a - x_b ≡ diff`; false on contradiction.
    fn relate(&mut self, a: usize, b: usize, diff: usize) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        let d = self.d;
        if ra == rb {
            return (oa + d - ob) % d == diff % d;
        }
        // x_a - x_b = diff with x_a = oa + x_ra, x_b = ob + x_rb, so
        // x_ra - x_rb = diff - oa + ob.
        self.parent[ra] = rb;
        self.offset[ra] = (diff % d + ob + d - oa) % d;
        true
    }
}
