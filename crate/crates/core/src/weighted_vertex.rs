//! Weighted vertex kernels `Σ_v Σ_v' k_W(v,v') · k_V(v,v')`.
//!
//! The weight kernel `k_W` is given by explicit per-vertex weight vectors,
//! either from Weisfeiler-Lehman colors of the unlabeled structure
//! (GraphInvariant) or from shortest-path position counts (GraphHopper).

use crate::base::{VertexFeatureMap, VertexKernel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::features::{tag, FeatureBuilder, FeatureKey, FeatureVector};
use crate::graph::Graph;
use crate::paths::all_pairs_shortest_paths;
use crate::wl::{wl_refine_dataset, InitialColors};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    GraphInvariant {
        iterations: usize,
    },
    /// `delta` is the matrix side: the vertex count of the longest shortest path.
    GraphHopper {
        delta: usize,
    },
}

/// Weight feature vectors `φ^W(v)` for every vertex of every dataset graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMaps {
    kind: WeightKind,
    maps: Vec<Vec<FeatureVector>>,
}

impl WeightMaps {
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Weight vectors of the vertices of graph `g`.
    pub fn graph(&self, g: usize) -> &[FeatureVector] {
        &self.maps[g]
    }

    /// Largest self-similarity `k_W(v, v)`, which bounds every weight by
    /// Cauchy-Schwarz; the approximation error of binned explicit maps
    /// scales with it.
    pub fn max_weight(&self) -> f64 {
        self.maps
            .iter()
            .flatten()
            .map(FeatureVector::squared_norm)
            .fold(0.0, f64::max)
    }
}

/// `φ^W(v) = ⊕_{i=0..h} one-hot(τ_i(v))` with colors refined from a uniform
/// start, so only the unlabeled structure matters.
pub fn graph_invariant_weight_maps(ds: &Dataset, iterations: usize) -> WeightMaps {
    let colors = wl_refine_dataset(ds, iterations, InitialColors::Uniform);
    let maps = ds
        .graphs()
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            (0..g.order())
                .map(|v| {
                    FeatureVector::from_entries((0..=iterations).map(|i| {
                        let key = FeatureKey::from_unsigned(tag::WL_COLOR, &[i as u32, colors.colors(gi, i)[v]]);
                        (key, 1.0)
                    }))
                })
                .collect()
        })
        .collect();
    WeightMaps {
        kind: WeightKind::GraphInvariant { iterations },
        maps,
    }
}

/// `φ^W(v)` = flattened `M(v)`, where `M(v)[i][j]` counts how often `v` is
/// the `i`-th vertex of a shortest path with `j` vertices, over all ordered
/// source–target pairs (trivial paths included).
pub fn graphhopper_weight_maps(ds: &Dataset) -> Result<WeightMaps> {
    let maps = ds
        .graphs()
        .iter()
        .enumerate()
        .map(|(gi, g)| graphhopper_vertex_maps(g).map_err(|e| name_graph(e, gi)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightMaps {
        kind: WeightKind::GraphHopper {
            delta: ds.max_diameter(),
        },
        maps,
    })
}

fn name_graph(e: Error, gi: usize) -> Error {
    match e {
        Error::Overflow(msg) => Error::Overflow(format!("graph {gi}: {msg}")),
        other => other,
    }
}

fn overflow() -> Error {
    Error::Overflow("shortest-path multiplicities exceed 64 bits".into())
}

/// GraphHopper weight vectors of a single graph.
pub fn graphhopper_vertex_maps(g: &Graph) -> Result<Vec<FeatureVector>> {
    let n = g.order();
    let d = all_pairs_shortest_paths(g, true);
    if d.overflowed() {
        return Err(overflow());
    }
    let sigma = |a: usize, b: usize| d.count(a, b).unwrap();
    let mut out = Vec::with_capacity(n);
    // Dense accumulator indexed by (position, path vertex count).
    let side = d.max_finite().map_or(1, |m| m as usize + 1);
    let mut m = vec![0u64; side * side];
    for v in 0..n {
        m.iter_mut().for_each(|x| *x = 0);
        for s in 0..n {
            let dsv = d.get(s, v);
            if !d.is_finite(s, v) {
                continue;
            }
            let ssv = sigma(s, v);
            for t in 0..n {
                if !d.is_finite(v, t) {
                    continue;
                }
                let (dvt, dst) = (d.get(v, t), d.get(s, t));
                if dsv + dvt != dst {
                    continue;
                }
                let c = ssv.checked_mul(sigma(v, t)).ok_or_else(overflow)?;
                let slot = &mut m[dsv as usize * side + dst as usize];
                *slot = slot.checked_add(c).ok_or_else(overflow)?;
            }
        }
        let entries = m.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| {
            let (i, j) = (k / side, k % side);
            (
                FeatureKey::from_unsigned(tag::GRAPHHOPPER, &[i as u32 + 1, j as u32 + 1]),
                c as f64,
            )
        });
        out.push(FeatureVector::from_entries(entries));
    }
    Ok(out)
}

/// `Σ_{v∈V(G)} Σ_{v'∈V(H)} ⟨φ^W(v), φ^W(v')⟩ · k_V(v, v')` with exact `k_V`.
pub fn wv_kernel_implicit(
    g: &Graph,
    wg: &[FeatureVector],
    h: &Graph,
    wh: &[FeatureVector],
    kv: &VertexKernel,
) -> Result<f64> {
    let mut total = 0.0;
    for (u, a) in wg.iter().enumerate() {
        for (v, b) in wh.iter().enumerate() {
            let w = a.dot(b);
            if w != 0.0 {
                total += w * kv.eval(g, u, h, v)?;
            }
        }
    }
    Ok(total)
}

/// `Σ_v φ^W(v) ⊗ φ^V(v)`: exact when `φ^V` is exact, an unbiased estimate
/// when it is a random binning map.
pub fn wv_features_explicit(g: &Graph, wg: &[FeatureVector], phi_v: &VertexFeatureMap) -> Result<FeatureVector> {
    let mut b = FeatureBuilder::new();
    for (v, w) in wg.iter().enumerate() {
        let pv = phi_v.map(g, v)?;
        for (kw, ww) in w.iter() {
            for (kx, wx) in pv.iter() {
                b.add(FeatureKey::pair(kw, kx), ww * wx);
            }
        }
    }
    Ok(b.build())
}
