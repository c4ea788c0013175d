//! Fixed-length walk kernels.
//!
//! The implicit scheme builds the weighted direct product graph of two
//! graphs and sums weighted walks in it by repeated sparse matrix-vector
//! products. The explicit scheme counts label sequences of walks per graph by
//! dynamic programming over walk length.

use rustc_hash::FxHashMap;

use crate::base::{EdgeKernel, VertexKernel};
use crate::error::{contract, param, Error, Result};
use crate::features::{scale, set_sum, tag, FeatureKey, FeatureVector};
use crate::graph::{Graph, Label};

/// A graph-like operand of the product construction: sorted neighbor lists
/// with one edge annotation per neighbor.
pub trait ProductFactor {
    type Annotation: Copy;

    fn order(&self) -> usize;
    fn neighbors(&self, u: usize) -> &[u32];
    /// Annotations of the edges to `neighbors(u)`, position by position.
    fn annotations(&self, u: usize) -> &[Self::Annotation];
}

impl ProductFactor for Graph {
    type Annotation = Label;

    fn order(&self) -> usize {
        Graph::order(self)
    }

    fn neighbors(&self, u: usize) -> &[u32] {
        Graph::neighbors(self, u)
    }

    fn annotations(&self, u: usize) -> &[Label] {
        self.neighbor_edge_labels(u)
    }
}

/// Weighted direct product graph in compressed adjacency form.
///
/// Vertices are the compatible pairs `(u, u')` in lexicographic order, which
/// is also the total order used to visit each product edge once.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProductGraph {
    pairs: Vec<(u32, u32)>,
    vertex_weights: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edge_weights: Vec<f64>,
    /// Each undirected edge once, `(a, b, w)` with `a < b`.
    edges: Vec<(u32, u32, f64)>,
}

impl WeightedProductGraph {
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Number of undirected product edges.
    pub fn size(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        let (u, v) = self.pairs[i];
        (u as usize, v as usize)
    }

    pub fn vertex_weight(&self, i: usize) -> f64 {
        self.vertex_weights[i]
    }

    /// Neighbors of product vertex `i` with edge weights.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.edge_weights[range])
            .map(|(&t, &w)| (t as usize, w))
    }

    /// Per-iteration sums `Σ_v r_i(v)` for `i = 0..=length`.
    pub fn walk_sums(&self, length: usize) -> Vec<f64> {
        let mut r = self.vertex_weights.clone();
        let mut next = vec![0.0; r.len()];
        let mut sums = Vec::with_capacity(length + 1);
        sums.push(r.iter().sum());
        for _ in 0..length {
            next.iter_mut().for_each(|x| *x = 0.0);
            // Scattering over the edge list avoids per-vertex overhead; most
            // product vertices have very few neighbors.
            for &(a, b, w) in &self.edges {
                next[a as usize] += w * r[b as usize];
                next[b as usize] += w * r[a as usize];
            }
            for (x, w) in next.iter_mut().zip(&self.vertex_weights) {
                *x *= w;
            }
            std::mem::swap(&mut r, &mut next);
            sums.push(r.iter().sum());
        }
        sums
    }
}

/// Builds the weighted direct product graph of two factors.
///
/// `vertex_kernel(u, u')` decides which pairs become vertices; only pairs of
/// existing product vertices reached through factor adjacency are offered to
/// `edge_kernel`, and each unordered pair is evaluated once.
pub fn product_graph<F: ProductFactor>(
    g: &F,
    h: &F,
    mut vertex_kernel: impl FnMut(usize, usize) -> Result<f64>,
    edge_kernel: impl FnMut(F::Annotation, F::Annotation) -> f64,
) -> Result<WeightedProductGraph> {
    let mut pairs = Vec::new();
    let mut vertex_weights = Vec::new();
    for u in 0..g.order() {
        for v in 0..h.order() {
            let w = vertex_kernel(u, v)?;
            if w > 0.0 {
                pairs.push((u as u32, v as u32));
                vertex_weights.push(w);
            }
        }
    }
    Ok(connect(g, h, pairs, vertex_weights, edge_kernel))
}

thread_local! {
    /// Pair-to-product-vertex index, kept filled with `u32::MAX` between uses.
    static INDEX: std::cell::RefCell<Vec<u32>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// Adds the edges to product vertices given in lexicographic order.
fn connect<F: ProductFactor>(
    g: &F,
    h: &F,
    pairs: Vec<(u32, u32)>,
    vertex_weights: Vec<f64>,
    mut edge_kernel: impl FnMut(F::Annotation, F::Annotation) -> f64,
) -> WeightedProductGraph {
    let m = h.order();
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    let mut degree = vec![0usize; pairs.len()];
    INDEX.with(|cell| {
        let mut index = cell.borrow_mut();
        if index.len() < g.order() * m {
            index.resize(g.order() * m, u32::MAX);
        }
        for (a, &(u, s)) in pairs.iter().enumerate() {
            index[u as usize * m + s as usize] = a as u32;
        }
        for (a, &(u, s)) in pairs.iter().enumerate() {
            let (u, s) = (u as usize, s as usize);
            let (hn, ha) = (h.neighbors(s), h.annotations(s));
            for (&v, &ea) in g.neighbors(u).iter().zip(g.annotations(u)) {
                let row = &index[v as usize * m..(v as usize + 1) * m];
                for (&t, &eb) in hn.iter().zip(ha) {
                    let b = row[t as usize];
                    if b == u32::MAX || (b as usize) <= a {
                        continue;
                    }
                    let w = edge_kernel(ea, eb);
                    if w > 0.0 {
                        edges.push((a as u32, b, w));
                        degree[a] += 1;
                        degree[b as usize] += 1;
                    }
                }
            }
        }
        for &(u, s) in &pairs {
            index[u as usize * m + s as usize] = u32::MAX;
        }
    });

    let mut offsets = Vec::with_capacity(pairs.len() + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }
    let mut fill = offsets[..pairs.len()].to_vec();
    let mut targets = vec![0u32; 2 * edges.len()];
    let mut edge_weights = vec![0.0; 2 * edges.len()];
    for &(a, b, w) in &edges {
        for (x, y) in [(a, b), (b, a)] {
            let slot = &mut fill[x as usize];
            targets[*slot] = y;
            edge_weights[*slot] = w;
            *slot += 1;
        }
    }
    WeightedProductGraph {
        pairs,
        vertex_weights,
        offsets,
        targets,
        edge_weights,
        edges,
    }
}

/// Label-compatible pairs in lexicographic order, found through label
/// buckets instead of testing all `n·n'` pairs.
fn dirac_label_pairs(g: &Graph, h: &Graph) -> Vec<(u32, u32)> {
    let mut by_label: Vec<(Label, u32)> = (0..h.order()).map(|v| (h.label(v), v as u32)).collect();
    by_label.sort_unstable();
    let mut pairs = Vec::new();
    for u in 0..g.order() {
        let l = g.label(u);
        let start = by_label.partition_point(|e| e.0 < l);
        pairs.extend(
            by_label[start..]
                .iter()
                .take_while(|e| e.0 == l)
                .map(|e| (u as u32, e.1)),
        );
    }
    pairs
}

/// Weighted direct product graph of two graphs under the given base kernels.
pub fn build_wdpg(g: &Graph, h: &Graph, kv: &VertexKernel, ke: &EdgeKernel) -> Result<WeightedProductGraph> {
    match kv {
        VertexKernel::DiracLabel => {
            let pairs = dirac_label_pairs(g, h);
            let weights = vec![1.0; pairs.len()];
            Ok(connect(g, h, pairs, weights, |a, b| ke.eval(a, b)))
        }
        _ => product_graph(g, h, |u, v| kv.eval(g, u, h, v), |a, b| ke.eval(a, b)),
    }
}

/// `K^=_ℓ(G, H)`: sum over all pairs of length-`ℓ` walks of the product of
/// vertex and edge kernel values along the walks.
pub fn walk_kernel_implicit(g: &Graph, h: &Graph, kv: &VertexKernel, ke: &EdgeKernel, length: usize) -> Result<f64> {
    let pg = build_wdpg(g, h, kv, ke)?;
    Ok(*pg.walk_sums(length).last().unwrap())
}

/// `K^≤_ℓ(G, H) = Σ_i λ_i K^=_i(G, H)` from a single product graph pass.
pub fn max_walk_kernel_implicit(
    g: &Graph,
    h: &Graph,
    kv: &VertexKernel,
    ke: &EdgeKernel,
    length: usize,
    lambda: &[f64],
) -> Result<f64> {
    check_lambda(length, lambda)?;
    let pg = build_wdpg(g, h, kv, ke)?;
    Ok(pg.walk_sums(length).iter().zip(lambda).map(|(s, l)| s * l).sum())
}

fn check_lambda(length: usize, lambda: &[f64]) -> Result<()> {
    if lambda.len() != length + 1 {
        return Err(param(format!(
            "walk length {length} needs {} weights, got {}",
            length + 1,
            lambda.len()
        )));
    }
    if lambda.iter().any(|l| !(*l >= 0.0)) {
        return Err(param("walk length weights must be non-negative"));
    }
    Ok(())
}

/// Label-sequence feature vector of the `ℓ`-walk kernel with Dirac base
/// kernels.
///
/// Keys are `(ℓ, ℓ(v_0), ℓ(e_1), ℓ(v_1), …, ℓ(v_ℓ))`; weights count walks.
/// Unlabeled vertices and edges use the pseudo-label 0.
pub fn walk_features_explicit(g: &Graph, length: usize) -> Result<FeatureVector> {
    walk_feature_levels(g, length).map(|mut levels| levels.pop().unwrap())
}

/// Feature vector of the Max-`ℓ`-walk kernel: the per-length vectors scaled by
/// their weights and summed (keys of different lengths never collide).
pub fn max_walk_features_explicit(g: &Graph, length: usize, lambda: &[f64]) -> Result<FeatureVector> {
    check_lambda(length, lambda)?;
    let levels = walk_feature_levels(g, length)?;
    let scaled = levels
        .iter()
        .zip(lambda)
        .map(|(v, &l)| scale(v, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(set_sum(&scaled))
}

/// Interned label sequences of one walk length: entry `id` is
/// `(vertex label, edge label, id of the remaining sequence)`.
type SequenceTable = Vec<(Label, Label, u32)>;

fn walk_feature_levels(g: &Graph, length: usize) -> Result<Vec<FeatureVector>> {
    if !g.has_vertex_labels() && g.attributes().is_some() {
        return Err(contract(
            "explicit walk features need discrete labels; use the implicit scheme for attributed graphs",
        ));
    }
    let n = g.order();
    // Level 0: one sequence per distinct vertex label.
    let mut level0: Vec<Label> = (0..n).map(|v| g.label(v)).collect();
    level0.sort_unstable();
    level0.dedup();
    let mut phi: Vec<Vec<(u32, u64)>> = (0..n)
        .map(|v| vec![(level0.binary_search(&g.label(v)).unwrap() as u32, 1u64)])
        .collect();
    let mut tables: Vec<SequenceTable> = Vec::with_capacity(length);
    let mut out = vec![collect_level(&phi, 0, &level0, &tables)?];

    for i in 1..=length {
        let mut intern: FxHashMap<(Label, Label, u32), u32> = FxHashMap::default();
        let mut table = SequenceTable::new();
        let mut next = Vec::with_capacity(n);
        let mut acc: FxHashMap<u32, u64> = FxHashMap::default();
        for u in 0..n {
            acc.clear();
            let lu = g.label(u);
            for (&v, &le) in g.neighbors(u).iter().zip(g.neighbor_edge_labels(u)) {
                for &(w, c) in &phi[v as usize] {
                    let id = *intern.entry((lu, le, w)).or_insert_with(|| {
                        table.push((lu, le, w));
                        (table.len() - 1) as u32
                    });
                    let slot = acc.entry(id).or_insert(0);
                    *slot = slot.checked_add(c).ok_or_else(|| overflow(i))?;
                }
            }
            let mut entries: Vec<(u32, u64)> = acc.iter().map(|(&k, &c)| (k, c)).collect();
            entries.sort_unstable();
            next.push(entries);
        }
        phi = next;
        tables.push(table);
        out.push(collect_level(&phi, i, &level0, &tables)?);
    }
    Ok(out)
}

fn overflow(length: usize) -> Error {
    Error::Overflow(format!("walk count of length {length} exceeds 64 bits"))
}

fn collect_level(
    phi: &[Vec<(u32, u64)>],
    level: usize,
    level0: &[Label],
    tables: &[SequenceTable],
) -> Result<FeatureVector> {
    let mut totals: FxHashMap<u32, u64> = FxHashMap::default();
    for entries in phi {
        for &(id, c) in entries {
            let slot = totals.entry(id).or_insert(0);
            *slot = slot.checked_add(c).ok_or_else(|| overflow(level))?;
        }
    }
    let mut payload = Vec::with_capacity(2 * level + 2);
    let entries: Vec<(FeatureKey, f64)> = totals
        .into_iter()
        .map(|(id, c)| {
            payload.clear();
            payload.push(level as i64);
            let mut id = id;
            for l in (1..=level).rev() {
                let (vl, el, rest) = tables[l - 1][id as usize];
                payload.push(vl as i64);
                payload.push(el as i64);
                id = rest;
            }
            payload.push(level0[id as usize] as i64);
            (FeatureKey::new(tag::WALK, &payload), c as f64)
        })
        .collect();
    Ok(FeatureVector::from_entries(entries))
}
