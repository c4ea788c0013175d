//! Shortest-path kernel.
//!
//! The implicit scheme is the length-one walk kernel on the shortest-path
//! transform (the complete graph annotated with distances). The explicit
//! scheme counts `(label, label, distance)` triples; arbitrary base kernels
//! are handled approximately through tensor products of their feature maps.

use crate::base::{length_one_hot, LengthKernel, VertexFeatureMap, VertexKernel};
use crate::error::{Error, Result};
use crate::features::{tag, FeatureBuilder, FeatureKey, FeatureVector};
use crate::graph::Graph;
use crate::paths::{all_pairs_shortest_paths, DistanceMatrix};
use crate::walk::{product_graph, ProductFactor};

/// Complete graph on the vertex set with every pair at finite distance
/// joined by an edge annotated with that distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpTransform {
    neighbors: Vec<Vec<u32>>,
    distances: Vec<Vec<u32>>,
}

impl SpTransform {
    pub fn new(g: &Graph) -> Self {
        Self::from_distances(&all_pairs_shortest_paths(g, false))
    }

    pub fn from_distances(d: &DistanceMatrix) -> Self {
        let n = d.order();
        let mut neighbors = vec![Vec::new(); n];
        let mut distances = vec![Vec::new(); n];
        for u in 0..n {
            for v in 0..n {
                if u != v && d.is_finite(u, v) {
                    neighbors[u].push(v as u32);
                    distances[u].push(d.get(u, v));
                }
            }
        }
        SpTransform { neighbors, distances }
    }

    /// Number of ordered pairs at finite distance.
    pub fn pair_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }

    /// Ordered pairs `(u, v, d_uv)` with `u ≠ v` and finite distance.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.neighbors
            .iter()
            .zip(&self.distances)
            .enumerate()
            .flat_map(|(u, (ns, ds))| ns.iter().zip(ds).map(move |(&v, &d)| (u, v as usize, d)))
    }
}

impl ProductFactor for SpTransform {
    type Annotation = u32;

    fn order(&self) -> usize {
        self.neighbors.len()
    }

    fn neighbors(&self, u: usize) -> &[u32] {
        &self.neighbors[u]
    }

    fn annotations(&self, u: usize) -> &[u32] {
        &self.distances[u]
    }
}

/// Shortest-path kernel on graphs whose transforms are already available.
pub fn sp_kernel_with_transforms(
    g: &Graph,
    tg: &SpTransform,
    h: &Graph,
    th: &SpTransform,
    kv: &VertexKernel,
    klen: LengthKernel,
) -> Result<f64> {
    let pg = product_graph(tg, th, |u, v| kv.eval(g, u, h, v), |a, b| klen.eval(a, b))?;
    Ok(pg.walk_sums(1)[1])
}

/// Sum over ordered pairs `u ≠ v` in `g` and `w ≠ z` in `h` of
/// `k_V(u,w) · k_len(d_uv, d_wz) · k_V(v,z)`.
pub fn sp_kernel_implicit(g: &Graph, h: &Graph, kv: &VertexKernel, klen: LengthKernel) -> Result<f64> {
    sp_kernel_with_transforms(g, &SpTransform::new(g), h, &SpTransform::new(h), kv, klen)
}

/// Counts of `(ℓ(u), ℓ(v), d_uv)` over ordered pairs at finite distance.
pub fn sp_features_explicit(g: &Graph) -> FeatureVector {
    sp_features_from_transform(g, &SpTransform::new(g))
}

pub fn sp_features_from_transform(g: &Graph, t: &SpTransform) -> FeatureVector {
    let mut b = FeatureBuilder::new();
    for (u, v, d) in t.pairs() {
        b.add(
            FeatureKey::from_unsigned(tag::SHORTEST_PATH, &[g.label(u), g.label(v), d]),
            1.0,
        );
    }
    b.build()
}

/// Approximate explicit map for non-Dirac vertex kernels: the sum over ordered
/// pairs of `φ_V(u) ⊗ φ_len(d_uv) ⊗ φ_V(v)`.
///
/// `budget` caps the number of distinct features; exceeding it is a resource
/// error rather than an allocation failure.
pub fn sp_features_approx(
    g: &Graph,
    phi_v: &VertexFeatureMap,
    len_map: impl Fn(u32) -> FeatureVector,
    budget: Option<usize>,
) -> Result<FeatureVector> {
    let t = SpTransform::new(g);
    let phi: Vec<FeatureVector> = (0..g.order()).map(|v| phi_v.map(g, v)).collect::<Result<_>>()?;
    let mut lens: Vec<Option<FeatureVector>> = Vec::new();
    let mut b = FeatureBuilder::new();
    for (u, v, d) in t.pairs() {
        let slot = d as usize;
        if lens.len() <= slot {
            lens.resize(slot + 1, None);
        }
        let ld = lens[slot].get_or_insert_with(|| len_map(d));
        for (kd, wd) in ld.iter() {
            for (kv, wv) in phi[v].iter() {
                let tail = FeatureKey::pair(kd, kv);
                for (ku, wu) in phi[u].iter() {
                    b.add(FeatureKey::pair(ku, &tail), wu * wd * wv);
                }
            }
        }
        if let Some(limit) = budget {
            if b.len() > limit {
                return Err(Error::Resource(format!(
                    "approximate shortest-path features exceed the budget of {limit} entries"
                )));
            }
        }
    }
    Ok(b.build())
}

/// [`sp_features_approx`] with the Dirac length map.
pub fn sp_features_approx_dirac(g: &Graph, phi_v: &VertexFeatureMap, budget: Option<usize>) -> Result<FeatureVector> {
    sp_features_approx(g, phi_v, length_one_hot, budget)
}
