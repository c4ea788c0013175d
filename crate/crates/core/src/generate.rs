//! Synthetic graph datasets.
//!
//! Draw order (all from one [`PortableRng`] seeded once per dataset), per
//! graph in sequence:
//!
//! 1. vertex count `n ~ Poisson(mean)`, redrawn while 0;
//! 2. one uniform per vertex pair `i < j` in lexicographic order, edge if `< p`;
//! 3. generator-specific labels or attributes, vertex by vertex, then edge by
//!    edge in the order of step 2.

use crate::dataset::Dataset;
use crate::error::{param, Result};
use crate::graph::{Attributes, Graph, GraphBuilder};
use crate::rng::PortableRng;

/// Poisson sampling by sequential inversion is exact up to this mean; beyond
/// it `exp(-mean)` underflows.
const MAX_MEAN: f64 = 700.0;

fn check_common(count: usize, mean_vertices: f64, edge_prob: f64) -> Result<()> {
    if count < 1 {
        return Err(param("dataset needs at least one graph"));
    }
    if !(mean_vertices > 0.0 && mean_vertices <= MAX_MEAN) {
        return Err(param(format!(
            "mean vertex count must be in (0, {MAX_MEAN}], got {mean_vertices}"
        )));
    }
    check_probability("edge probability", edge_prob)
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(param(format!("{what} must be in [0, 1], got {p}")))
    }
}

fn skeleton(rng: &mut PortableRng, mean_vertices: f64, edge_prob: f64) -> (usize, Vec<(usize, usize)>) {
    let n = loop {
        let n = rng.poisson(mean_vertices);
        if n > 0 {
            break n;
        }
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.uniform() < edge_prob {
                edges.push((i, j));
            }
        }
    }
    (n, edges)
}

fn assemble(name: String, count: usize, mut graph: impl FnMut() -> Result<Graph>) -> Result<Dataset> {
    let graphs = (0..count).map(|_| graph()).collect::<Result<Vec<_>>>()?;
    Dataset::new(name, graphs, vec![0; count])
}

/// Random graphs with label diversity `p_v`: a vertex gets label 0 with
/// probability `1 - p_v`, otherwise 1 or 2 with equal probability (a second
/// uniform decides). Edges are uniformly labeled.
pub fn generate_synthetic_labeled(
    count: usize,
    mean_vertices: f64,
    edge_prob: f64,
    p_v: f64,
    seed: u64,
) -> Result<Dataset> {
    check_common(count, mean_vertices, edge_prob)?;
    check_probability("label diversity", p_v)?;
    let mut rng = PortableRng::new(seed);
    let name = format!("synthetic-labeled(n={count},mean={mean_vertices},p={edge_prob},pv={p_v},seed={seed})");
    assemble(name, count, || {
        let (n, edges) = skeleton(&mut rng, mean_vertices, edge_prob);
        let labels = (0..n)
            .map(|_| {
                if rng.uniform() < 1.0 - p_v {
                    0
                } else if rng.uniform() < 0.5 {
                    1
                } else {
                    2
                }
            })
            .collect();
        GraphBuilder::new(n).edges(edges).vertex_labels(labels).build()
    })
}

/// Random graphs whose vertex and edge labels are drawn uniformly from one
/// alphabet `{0, …, alphabet_size - 1}`.
pub fn generate_synthetic_alphabet(
    count: usize,
    mean_vertices: f64,
    edge_prob: f64,
    alphabet_size: usize,
    seed: u64,
) -> Result<Dataset> {
    check_common(count, mean_vertices, edge_prob)?;
    if alphabet_size < 1 {
        return Err(param("label alphabet must contain at least one symbol"));
    }
    let mut rng = PortableRng::new(seed);
    let name =
        format!("synthetic-alphabet(n={count},mean={mean_vertices},p={edge_prob},labels={alphabet_size},seed={seed})");
    assemble(name, count, || {
        let (n, edges) = skeleton(&mut rng, mean_vertices, edge_prob);
        let labels = (0..n).map(|_| rng.below(alphabet_size) as u32).collect();
        let mut b = GraphBuilder::new(n).vertex_labels(labels);
        for (u, v) in edges {
            b = b.labeled_edge(u, v, rng.below(alphabet_size) as u32);
        }
        b.build()
    })
}

/// Random unlabeled graphs with `dim`-dimensional attributes uniform in
/// `[0, 1)`, drawn vertex by vertex, coordinate by coordinate.
pub fn generate_synthetic_attributed(
    count: usize,
    mean_vertices: f64,
    edge_prob: f64,
    dim: usize,
    seed: u64,
) -> Result<Dataset> {
    check_common(count, mean_vertices, edge_prob)?;
    if dim < 1 {
        return Err(param("attribute dimension must be at least 1"));
    }
    let mut rng = PortableRng::new(seed);
    let name = format!("synthetic-attributed(n={count},mean={mean_vertices},p={edge_prob},dim={dim},seed={seed})");
    assemble(name, count, || {
        let (n, edges) = skeleton(&mut rng, mean_vertices, edge_prob);
        let data = (0..n * dim).map(|_| rng.uniform()).collect();
        GraphBuilder::new(n)
            .edges(edges)
            .attributes(Attributes::new(dim, data)?)
            .build()
    })
}
