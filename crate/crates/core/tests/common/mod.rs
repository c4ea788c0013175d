//! Reference implementations used as test oracles.
//!
//! Everything here is deliberately naive: enumeration instead of dynamic
//! programming, dense matrices instead of product graphs, string signatures
//! instead of interned colors. None of it calls into the library's kernel
//! code; only the graph container and the RNG are shared.

// Index loops mirror the textbook formulations.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap};

use graphkernels::{Attributes, Dataset, Graph, GraphBuilder, Label, PortableRng};

// ---------------------------------------------------------------------------
// Random inputs

/// Erdős–Rényi graph with `1..=max_n` vertices; labels drawn from
/// `0..vertex_labels` / `0..edge_labels` when those are non-zero.
pub fn random_graph(rng: &mut PortableRng, max_n: usize, p: f64, vertex_labels: u32, edge_labels: u32) -> Graph {
    let n = 1 + rng.below(max_n);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.uniform() < p {
                b = if edge_labels > 0 {
                    b.labeled_edge(u, v, rng.below(edge_labels as usize) as Label)
                } else {
                    b.edge(u, v)
                };
            }
        }
    }
    if vertex_labels > 0 {
        b = b.vertex_labels((0..n).map(|_| rng.below(vertex_labels as usize) as Label).collect());
    }
    b.build().unwrap()
}

/// Unlabeled graph with attributes on a coarse grid `{0, 1/levels, ...}` so
/// that equal attribute vectors occur often.
pub fn random_attributed(rng: &mut PortableRng, max_n: usize, p: f64, dim: usize, levels: usize) -> Graph {
    let g = random_graph(rng, max_n, p, 0, 0);
    let data = (0..g.order() * dim)
        .map(|_| rng.below(levels) as f64 / levels as f64)
        .collect();
    g.with_attributes(Some(Attributes::new(dim, data).unwrap())).unwrap()
}

pub fn random_graphs(
    seed: u64,
    count: usize,
    max_n: usize,
    p: f64,
    vertex_labels: u32,
    edge_labels: u32,
) -> Vec<Graph> {
    let mut rng = PortableRng::new(seed);
    (0..count)
        .map(|_| random_graph(&mut rng, max_n, p, vertex_labels, edge_labels))
        .collect()
}

pub fn dataset(graphs: Vec<Graph>) -> Dataset {
    let n = graphs.len();
    Dataset::new("oracle", graphs, vec![0; n]).unwrap()
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------------------
// Walks

/// Every walk with `length` edges, as a vertex sequence.
pub fn walks(g: &Graph, length: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..g.order()).map(|v| vec![v]).collect();
    for _ in 0..length {
        let mut next = Vec::new();
        for w in &out {
            for &x in g.neighbors(*w.last().unwrap()) {
                let mut e = w.clone();
                e.push(x as usize);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// `Σ_{w ∈ W_ℓ(G)} Σ_{w' ∈ W_ℓ(H)} Π k_V · Π k_E` with Dirac vertex labels.
pub fn walk_kernel_bruteforce(g: &Graph, h: &Graph, length: usize, ke: &dyn Fn(Label, Label) -> f64) -> f64 {
    let wg = walks(g, length);
    let wh = walks(h, length);
    let mut total = 0.0;
    for a in &wg {
        for b in &wh {
            let mut w = 1.0;
            for i in 0..=length {
                if g.label(a[i]) != h.label(b[i]) {
                    w = 0.0;
                    break;
                }
                if i > 0 {
                    w *= ke(edge_label(g, a[i - 1], a[i]), edge_label(h, b[i - 1], b[i]));
                }
            }
            total += w;
        }
    }
    total
}

fn edge_label(g: &Graph, u: usize, v: usize) -> Label {
    g.edge_label(u, v).unwrap_or(0)
}

/// `1ᵀ A^ℓ 1` by dense integer matrix powers.
pub fn walk_count(g: &Graph, length: usize) -> u128 {
    let n = g.order();
    let mut a = vec![vec![0u128; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1;
        a[v][u] = 1;
    }
    let mut p: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    for _ in 0..length {
        let mut q = vec![vec![0u128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if p[i][k] != 0 {
                    for j in 0..n {
                        q[i][j] += p[i][k] * a[k][j];
                    }
                }
            }
        }
        p = q;
    }
    p.iter().flatten().sum()
}

// ---------------------------------------------------------------------------
// Shortest paths

/// Floyd–Warshall distances; `None` for disconnected pairs.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.order();
    let mut d = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for (u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Shortest-path kernel with Dirac vertex and length kernels, summed over
/// all quadruples `(u, v, w, z)` with `u ≠ v`, `w ≠ z`.
pub fn sp_kernel_bruteforce(g: &Graph, h: &Graph) -> f64 {
    let (dg, dh) = (floyd_warshall(g), floyd_warshall(h));
    let mut total = 0u64;
    for u in 0..g.order() {
        for v in 0..g.order() {
            let Some(d) = dg[u][v].filter(|_| u != v) else { continue };
            for w in 0..h.order() {
                for z in 0..h.order() {
                    if w != z && dh[w][z] == Some(d) && g.label(u) == h.label(w) && g.label(v) == h.label(z) {
                        total += 1;
                    }
                }
            }
        }
    }
    total as f64
}

/// Every shortest path from `s` to `t`, by depth-first search along edges
/// that stay on a shortest path.
pub fn shortest_paths(g: &Graph, d: &[Vec<Option<u32>>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let Some(total) = d[s][t] else { return Vec::new() };
    let mut out = Vec::new();
    let mut path = vec![s];
    fn go(g: &Graph, d: &[Vec<Option<u32>>], t: usize, total: u32, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path.clone());
            return;
        }
        let step = path.len() as u32;
        for &x in g.neighbors(last) {
            let x = x as usize;
            if d[path[0]][x] == Some(step) && d[x][t] == Some(total - step) {
                path.push(x);
                go(g, d, t, total, path, out);
                path.pop();
            }
        }
    }
    go(g, d, t, total, &mut path, &mut out);
    out
}

/// GraphHopper matrices `M(v)[i][j]`: occurrences of `v` at 1-based position
/// `i` of a shortest path with `j` vertices, over all ordered pairs.
pub fn graphhopper_bruteforce(g: &Graph) -> Vec<BTreeMap<(usize, usize), u64>> {
    let d = floyd_warshall(g);
    let mut m = vec![BTreeMap::new(); g.order()];
    for s in 0..g.order() {
        for t in 0..g.order() {
            for p in shortest_paths(g, &d, s, t) {
                for (i, &v) in p.iter().enumerate() {
                    *m[v].entry((i + 1, p.len())).or_insert(0) += 1;
                }
            }
        }
    }
    m
}

pub fn frobenius(a: &BTreeMap<(usize, usize), u64>, b: &BTreeMap<(usize, usize), u64>) -> f64 {
    a.iter().filter_map(|(k, x)| b.get(k).map(|y| (x * y) as f64)).sum()
}

// ---------------------------------------------------------------------------
// Three-vertex subgraphs

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn triples(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.order();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let s = [a, b, c];
                let edges = [(a, b), (a, c), (b, c)]
                    .iter()
                    .filter(|&&(x, y)| g.has_edge(x, y))
                    .count();
                if edges >= 2 {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Label-preserving isomorphisms between the induced subgraphs on `s` and `t`.
fn isomorphisms(g: &Graph, s: &[usize; 3], h: &Graph, t: &[usize; 3]) -> u64 {
    let mut count = 0;
    'perm: for p in PERMS {
        let img = |i: usize| t[p[i]];
        for i in 0..3 {
            if g.label(s[i]) != h.label(img(i)) {
                continue 'perm;
            }
            for j in i + 1..3 {
                if g.edge_label(s[i], s[j]) != h.edge_label(img(i), img(j)) {
                    continue 'perm;
                }
            }
        }
        count += 1;
    }
    count
}

/// Over all pairs of connected three-vertex induced subgraphs: the total
/// number of isomorphisms (`Σ_c cnt_G(c)·cnt_H(c)·aut(c)`) and the number of
/// isomorphic pairs (`Σ_c cnt_G(c)·cnt_H(c)`).
pub fn subgraph_oracle(g: &Graph, h: &Graph) -> (u64, u64) {
    let (tg, th) = (triples(g), triples(h));
    let mut mappings = 0;
    let mut matches = 0;
    for s in &tg {
        for t in &th {
            let k = isomorphisms(g, s, h, t);
            mappings += k;
            matches += u64::from(k > 0);
        }
    }
    (mappings, matches)
}

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman

/// Colors of every vertex after iterations `0..=h`, starting uniform.
/// Signatures are strings; colors are their ranks among all signatures of
/// the iteration across the whole collection.
pub fn wl_colors(graphs: &[Graph], iterations: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = graphs.iter().map(|g| vec![vec![0; g.order()]]).collect();
    for i in 0..iterations {
        let sigs: Vec<Vec<String>> = graphs
            .iter()
            .zip(&out)
            .map(|(g, c)| {
                (0..g.order())
                    .map(|v| {
                        let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&x| c[i][x as usize]).collect();
                        nb.sort();
                        format!("{}|{:?}", c[i][v], nb)
                    })
                    .collect()
            })
            .collect();
        let mut all: Vec<&String> = sigs.iter().flatten().collect();
        all.sort();
        all.dedup();
        let rank: HashMap<&String, usize> = all.into_iter().enumerate().map(|(r, s)| (s, r)).collect();
        for (c, s) in out.iter_mut().zip(&sigs) {
            c.push(s.iter().map(|x| rank[x]).collect());
        }
    }
    out
}

/// Weighted vertex kernel by double loop: `Σ_v Σ_v' w(v, v') · k_V(v, v')`.
pub fn wv_bruteforce(
    g: &Graph,
    h: &Graph,
    weight: &dyn Fn(usize, usize) -> f64,
    kv: &dyn Fn(&[f64], &[f64]) -> f64,
) -> f64 {
    let mut total = 0.0;
    for u in 0..g.order() {
        for v in 0..h.order() {
            total += weight(u, v) * kv(g.attribute(u).unwrap(), h.attribute(v).unwrap());
        }
    }
    total
}
