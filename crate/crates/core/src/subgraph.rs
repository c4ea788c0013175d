//! Subgraph kernels: the explicit three-vertex graphlet kernel and the
//! implicit subgraph matching kernel on a weighted association graph.

use crate::base::{EdgeKernel, VertexKernel};
use crate::error::{contract, param, Result};
use crate::features::{tag, FeatureBuilder, FeatureKey, FeatureVector};
use crate::graph::{Graph, Label};

const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Canonical key of a labeled three-vertex graph given as vertex labels and
/// the pairwise edge codes (0 = no edge, otherwise 1 + edge label).
fn canonical_code(labels: [Label; 3], edges: [[u32; 3]; 3]) -> [u32; 6] {
    ORDERINGS
        .iter()
        .map(|&[x, y, z]| [labels[x], labels[y], labels[z], edges[x][y], edges[x][z], edges[y][z]])
        .min()
        .unwrap()
}

fn edge_code(g: &Graph, u: usize, v: usize) -> u32 {
    g.edge_label(u, v).map_or(0, |l| l + 1)
}

fn triple_key(g: &Graph, t: [usize; 3]) -> FeatureKey {
    let labels = t.map(|v| g.label(v));
    let mut edges = [[0u32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                edges[i][j] = edge_code(g, t[i], t[j]);
            }
        }
    }
    FeatureKey::from_unsigned(tag::GRAPHLET, &canonical_code(labels, edges))
}

/// Canonical key of a connected labeled graph on three vertices: the
/// lexicographically smallest serialization over all vertex orderings.
pub fn canonical_string(sub: &Graph) -> Result<FeatureKey> {
    if sub.order() != 3 {
        return Err(contract(format!("graphlets have 3 vertices, got {}", sub.order())));
    }
    if sub.size() < 2 {
        return Err(contract("graphlet is not connected"));
    }
    Ok(triple_key(sub, [0, 1, 2]))
}

/// Counts of connected induced three-vertex subgraphs by canonical key.
pub fn graphlet_features(g: &Graph) -> FeatureVector {
    let mut b = FeatureBuilder::new();
    // Each connected triple is found from one center: a path from its middle
    // vertex, a triangle from its smallest vertex.
    for c in 0..g.order() {
        let nb = g.neighbors(c);
        for (i, &a) in nb.iter().enumerate() {
            for &bv in &nb[i + 1..] {
                let (a, bv) = (a as usize, bv as usize);
                if g.has_edge(a, bv) && c > a {
                    continue;
                }
                b.add(triple_key(g, [c, a, bv]), 1.0);
            }
        }
    }
    b.build()
}

/// Weighted association graph of two graphs under induced matching semantics.
#[derive(Debug, Clone)]
pub struct AssociationGraph {
    pairs: Vec<(u32, u32)>,
    weights: Vec<f64>,
    /// Dense `|V|×|V|` edge weights, 0 for non-adjacent pairs.
    adjacency: Vec<f64>,
    /// Whether an edge stems from an edge pair (rather than a non-edge pair).
    structural: Vec<bool>,
}

impl AssociationGraph {
    pub fn new(g: &Graph, h: &Graph, kv: &VertexKernel, ke: &EdgeKernel) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for u in 0..g.order() {
            for v in 0..h.order() {
                let w = kv.eval(g, u, h, v)?;
                if w > 0.0 {
                    pairs.push((u as u32, v as u32));
                    weights.push(w);
                }
            }
        }
        let n = pairs.len();
        let mut adjacency = vec![0.0; n * n];
        let mut structural = vec![false; n * n];
        for i in 0..n {
            let (u, s) = (pairs[i].0 as usize, pairs[i].1 as usize);
            for j in i + 1..n {
                let (v, t) = (pairs[j].0 as usize, pairs[j].1 as usize);
                if u == v || s == t {
                    continue;
                }
                let (w, flag) = match (g.edge_label(u, v), h.edge_label(s, t)) {
                    (Some(a), Some(b)) => (ke.eval(a, b), true),
                    (None, None) => (1.0, false),
                    _ => continue,
                };
                if w > 0.0 {
                    for (x, y) in [(i, j), (j, i)] {
                        adjacency[x * n + y] = w;
                        structural[x * n + y] = flag;
                    }
                }
            }
        }
        Ok(AssociationGraph {
            pairs,
            weights,
            adjacency,
            structural,
        })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        (self.pairs[i].0 as usize, self.pairs[i].1 as usize)
    }

    pub fn vertex_weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Edge weight between association vertices, 0 when not adjacent.
    pub fn edge_weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i * self.order() + j]
    }

    pub fn is_structural(&self, i: usize, j: usize) -> bool {
        self.structural[i * self.order() + j]
    }
}

/// Options of the subgraph matching kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgraphMatchingOptions {
    /// Largest clique size enumerated.
    pub max_size: usize,
    /// `size_weights[k - 1]` weights cliques of size `k`.
    pub size_weights: Vec<f64>,
    /// Count only cliques whose edge-pair edges connect all their vertices.
    pub connected_only: bool,
    /// Divide each clique's contribution by `size!`.
    pub divide_by_factorial: bool,
}

impl SubgraphMatchingOptions {
    /// Uniform weights for sizes `1..=max_size`.
    pub fn up_to(max_size: usize) -> Self {
        SubgraphMatchingOptions {
            max_size,
            size_weights: vec![1.0; max_size],
            connected_only: false,
            divide_by_factorial: false,
        }
    }

    /// Only cliques of exactly `size` vertices count.
    pub fn exactly(size: usize) -> Self {
        let mut o = Self::up_to(size);
        o.size_weights
            .iter_mut()
            .take(size.saturating_sub(1))
            .for_each(|w| *w = 0.0);
        o
    }

    pub fn connected(mut self) -> Self {
        self.connected_only = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_size == 0 {
            return Err(param("subgraph matching needs max_size >= 1"));
        }
        if self.size_weights.len() != self.max_size {
            return Err(param(format!(
                "subgraph matching needs {} size weights, got {}",
                self.max_size,
                self.size_weights.len()
            )));
        }
        if self.size_weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(param("subgraph size weights must be non-negative"));
        }
        Ok(())
    }
}

/// Subgraph matching kernel: weighted sum over the cliques of the association
/// graph up to `max_size` vertices.
pub fn subgraph_matching_kernel(
    g: &Graph,
    h: &Graph,
    kv: &VertexKernel,
    ke: &EdgeKernel,
    opts: &SubgraphMatchingOptions,
) -> Result<f64> {
    opts.validate()?;
    let ag = AssociationGraph::new(g, h, kv, ke)?;
    let mut state = CliqueWalk {
        ag: &ag,
        opts,
        clique: Vec::with_capacity(opts.max_size),
        per_size: vec![0.0; opts.max_size],
    };
    let candidates: Vec<usize> = (0..ag.order()).collect();
    state.extend(&candidates, 1.0);
    let mut factorial = 1.0;
    let mut total = 0.0;
    for (k, (sum, lambda)) in state.per_size.iter().zip(&opts.size_weights).enumerate() {
        factorial *= (k + 1) as f64;
        let norm = if opts.divide_by_factorial { factorial } else { 1.0 };
        total += lambda * sum / norm;
    }
    Ok(total)
}

struct CliqueWalk<'a> {
    ag: &'a AssociationGraph,
    opts: &'a SubgraphMatchingOptions,
    clique: Vec<usize>,
    /// Summed clique weights per clique size.
    per_size: Vec<f64>,
}

impl CliqueWalk<'_> {
    /// Extends the current clique by every candidate (all candidates are larger
    /// than the clique's members and adjacent to all of them).
    fn extend(&mut self, candidates: &[usize], weight: f64) {
        for (pos, &c) in candidates.iter().enumerate() {
            let mut w = weight * self.ag.vertex_weight(c);
            for &m in &self.clique {
                w *= self.ag.edge_weight(m, c);
            }
            self.clique.push(c);
            let k = self.clique.len();
            if self.opts.size_weights[k - 1] > 0.0 && (!self.opts.connected_only || self.structurally_connected()) {
                self.per_size[k - 1] += w;
            }
            if k < self.opts.max_size {
                let next: Vec<usize> = candidates[pos + 1..]
                    .iter()
                    .copied()
                    .filter(|&d| self.ag.edge_weight(c, d) > 0.0)
                    .collect();
                if !next.is_empty() {
                    self.extend(&next, w);
                }
            }
            self.clique.pop();
        }
    }

    fn structurally_connected(&self) -> bool {
        let k = self.clique.len();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if !seen[j] && self.ag.is_structural(self.clique[i], self.clique[j]) {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        reached == k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(labels: Vec<Label>) -> Graph {
        Graph::builder(3)
            .edges([(0, 1), (1, 2), (0, 2)])
            .vertex_labels(labels)
            .build()
            .unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn graphlet_examples() {
        let k3 = graphlet_features(&triangle(vec![0, 0, 0]));
        let p4 = graphlet_features(&path(4));
        assert_eq!(k3.nnz(), 1);
        assert_eq!(k3.iter().next().unwrap().1, 1.0);
        assert_eq!(p4.nnz(), 1);
        assert_eq!(p4.iter().next().unwrap().1, 2.0);
        assert_eq!(k3.dot(&p4), 0.0);
        assert_eq!(p4.dot(&p4), 4.0);
        let a = graphlet_features(&triangle(vec![0, 0, 1]));
        let b = graphlet_features(&triangle(vec![0, 1, 1]));
        assert_eq!(a.dot(&b), 0.0);
    }

    #[test]
    fn star_and_k4_counts() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(graphlet_features(&star).iter().map(|(_, w)| w).sum::<f64>(), 3.0);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let f = graphlet_features(&k4);
        assert_eq!(f.nnz(), 1);
        assert_eq!(f.iter().next().unwrap().1, 4.0);
    }

    #[test]
    fn canonical_string_is_permutation_invariant() {
        let g = Graph::builder(3)
            .labeled_edge(0, 1, 2)
            .labeled_edge(1, 2, 0)
            .vertex_labels(vec![4, 1, 3])
            .build()
            .unwrap();
        let key = canonical_string(&g).unwrap();
        for perm in ORDERINGS {
            assert_eq!(canonical_string(&g.permuted(&perm).unwrap()).unwrap(), key);
        }
        assert_ne!(
            canonical_string(&triangle(vec![0, 0, 0])).unwrap(),
            canonical_string(&path(3)).unwrap()
        );
    }

    #[test]
    fn disconnected_triple_is_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(canonical_string(&g).is_err());
        assert!(canonical_string(&path(4)).is_err());
    }

    const KV: VertexKernel = VertexKernel::DiracLabel;
    const KE: EdgeKernel = EdgeKernel::DiracLabel;

    #[test]
    fn association_graph_of_two_edges() {
        let e = path(2);
        let ag = AssociationGraph::new(&e, &e, &KV, &KE).unwrap();
        assert_eq!(ag.order(), 4);
        let edges: usize = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| ag.edge_weight(i, j) > 0.0)
            .count();
        assert_eq!(edges, 2);
    }

    #[test]
    fn matching_examples() {
        let e = path(2);
        assert_eq!(
            subgraph_matching_kernel(&e, &e, &KV, &KE, &SubgraphMatchingOptions::up_to(2)).unwrap(),
            6.0
        );
        let a = Graph::builder(2).edge(0, 1).vertex_labels(vec![0, 0]).build().unwrap();
        let b = Graph::builder(2).edge(0, 1).vertex_labels(vec![1, 1]).build().unwrap();
        assert_eq!(
            subgraph_matching_kernel(&a, &b, &KV, &KE, &SubgraphMatchingOptions::up_to(3)).unwrap(),
            0.0
        );
        // A size cap beyond the association graph changes nothing.
        assert_eq!(
            subgraph_matching_kernel(&e, &e, &KV, &KE, &SubgraphMatchingOptions::up_to(9)).unwrap(),
            6.0
        );
    }

    #[test]
    fn connected_triples_count_automorphisms() {
        let k3 = triangle(vec![0, 0, 0]);
        let p4 = path(4);
        let opts = SubgraphMatchingOptions::exactly(3).connected();
        assert_eq!(subgraph_matching_kernel(&k3, &k3, &KV, &KE, &opts).unwrap(), 6.0);
        assert_eq!(subgraph_matching_kernel(&p4, &p4, &KV, &KE, &opts).unwrap(), 8.0);
        assert_eq!(subgraph_matching_kernel(&k3, &p4, &KV, &KE, &opts).unwrap(), 0.0);
        let mut norm = opts.clone();
        norm.divide_by_factorial = true;
        assert_eq!(subgraph_matching_kernel(&k3, &k3, &KV, &KE, &norm).unwrap(), 1.0);
    }

    #[test]
    fn options_are_validated() {
        let e = path(2);
        assert!(subgraph_matching_kernel(&e, &e, &KV, &KE, &SubgraphMatchingOptions::up_to(0)).is_err());
        let mut o = SubgraphMatchingOptions::up_to(2);
        o.size_weights.pop();
        assert!(subgraph_matching_kernel(&e, &e, &KV, &KE, &o).is_err());
    }
}
