//! Breadth-first all-pairs shortest paths with path multiplicities.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Sentinel for "no path".
pub const INFINITY: u32 = u32::MAX;

/// Hop distances between all vertex pairs, optionally with the number of
/// distinct shortest paths per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
    counts: Option<Vec<u64>>,
    overflowed: bool,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Distance from `u` to `v`, [`INFINITY`] if disconnected.
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn is_finite(&self, u: usize, v: usize) -> bool {
        self.get(u, v) != INFINITY
    }

    /// Number of distinct shortest `u`–`v` paths, when computed.
    ///
    /// Saturates at `u64::MAX`; check [`DistanceMatrix::overflowed`].
    pub fn count(&self, u: usize, v: usize) -> Option<u64> {
        self.counts.as_ref().map(|c| c[u * self.n + v])
    }

    pub fn has_counts(&self) -> bool {
        self.counts.is_some()
    }

    /// True if some multiplicity did not fit into 64 bits.
    pub fn overflowed(&self) -> bool {
        self.overflowed
    }

    /// Largest finite distance, `None` for the empty graph.
    pub fn max_finite(&self) -> Option<u32> {
        self.dist.iter().copied().filter(|&d| d != INFINITY).max()
    }
}

/// Runs a BFS from every vertex.
///
/// With `with_counts`, multiplicities follow the layer recurrence
/// `σ(s, v) = Σ σ(s, u)` over neighbors `u` of `v` one layer closer to `s`.
pub fn all_pairs_shortest_paths(g: &Graph, with_counts: bool) -> DistanceMatrix {
    let n = g.order();
    let mut dist = vec![INFINITY; n * n];
    let mut counts = with_counts.then(|| vec![0u64; n * n]);
    let mut overflowed = false;
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = s * n;
        dist[row + s] = 0;
        if let Some(c) = counts.as_mut() {
            c[row + s] = 1;
        }
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[row + u];
            for &v in g.neighbors(u) {
                let v = v as usize;
                if dist[row + v] == INFINITY {
                    dist[row + v] = du + 1;
                    queue.push_back(v);
                }
                if dist[row + v] == du + 1 {
                    if let Some(c) = counts.as_mut() {
                        let (sum, of) = c[row + v].overflowing_add(c[row + u]);
                        if of {
                            overflowed = true;
                            c[row + v] = u64::MAX;
                        } else {
                            c[row + v] = sum;
                        }
                    }
                }
            }
        }
    }
    DistanceMatrix {
        n,
        dist,
        counts,
        overflowed,
    }
}
