//! Undirected graphs with optional discrete labels and real attributes.

use std::collections::BTreeMap;

use crate::error::{contract, Result};

/// Integer code of a vertex or edge label.
pub type Label = u32;

/// Real-valued vertex attributes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Attributes {
    dim: usize,
    data: Vec<f64>,
}

impl Attributes {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(contract("attribute dimension must be at least 1"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(contract(format!(
                "attribute buffer of length {} is not a multiple of dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(contract("attribute rows differ in dimension"));
        }
        Self::new(dim, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }

    pub(crate) fn row_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.data[v * self.dim..(v + 1) * self.dim]
    }
}

/// A simple undirected graph.
///
/// Neighbor lists are sorted. Edge labels are stored parallel to the
/// neighbor lists; graphs without edge labels carry the pseudo-label 0 on
/// every edge so that walk and product-graph code can treat both cases alike.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    adjacency_labels: Vec<Vec<Label>>,
    vertex_labels: Option<Vec<Label>>,
    has_edge_labels: bool,
    attributes: Option<Attributes>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    ///
    /// Each edge must appear once (in either orientation); self-loops and
    /// parallel edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        GraphBuilder::new(n).edges(edges.iter().copied()).build()
    }

    pub fn builder(n: usize) -> GraphBuilder {
        GraphBuilder::new(n)
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    /// Edge labels of the edges to `neighbors(v)`, position by position.
    pub fn neighbor_edge_labels(&self, v: usize) -> &[Label] {
        &self.adjacency_labels[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<Label> {
        let pos = self.adjacency[u].binary_search(&(v as u32)).ok()?;
        Some(self.adjacency_labels[u][pos])
    }

    /// Edges `(u, v)` with `u < v` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn vertex_labels(&self) -> Option<&[Label]> {
        self.vertex_labels.as_deref()
    }

    /// Label of `v`, or the uniform pseudo-label 0 for unlabeled graphs.
    pub fn label(&self, v: usize) -> Label {
        self.vertex_labels.as_ref().map_or(0, |l| l[v])
    }

    pub fn has_vertex_labels(&self) -> bool {
        self.vertex_labels.is_some()
    }

    pub fn has_edge_labels(&self) -> bool {
        self.has_edge_labels
    }

    pub fn attributes(&self) -> Option<&Attributes> {
        self.attributes.as_ref()
    }

    pub(crate) fn attributes_mut(&mut self) -> Option<&mut Attributes> {
        self.attributes.as_mut()
    }

    pub fn attribute(&self, v: usize) -> Option<&[f64]> {
        self.attributes.as_ref().map(|a| a.row(v))
    }

    /// Edge labels as a map keyed by `(u, v)` with `u < v`.
    pub fn edge_label_map(&self) -> Option<BTreeMap<(usize, usize), Label>> {
        if !self.has_edge_labels {
            return None;
        }
        Some(
            self.edges()
                .map(|(u, v)| ((u, v), self.edge_label(u, v).unwrap()))
                .collect(),
        )
    }

    /// Returns the graph with vertex labels replaced (or removed).
    pub fn with_vertex_labels(mut self, labels: Option<Vec<Label>>) -> Result<Self> {
        if let Some(l) = &labels {
            check_len("vertex labels", l.len(), self.order())?;
        }
        self.vertex_labels = labels;
        Ok(self)
    }

    /// Returns the graph with vertex attributes replaced (or removed).
    pub fn with_attributes(mut self, attributes: Option<Attributes>) -> Result<Self> {
        if let Some(a) = &attributes {
            check_len("attribute rows", a.len(), self.order())?;
        }
        self.attributes = attributes;
        Ok(self)
    }

    /// Applies the vertex permutation `perm` (old index `v` becomes `perm[v]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        check_len("permutation", perm.len(), n)?;
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(contract("not a permutation"));
            }
        }
        let mut b = GraphBuilder::new(n);
        for (u, v) in self.edges() {
            b = if self.has_edge_labels {
                b.labeled_edge(perm[u], perm[v], self.edge_label(u, v).unwrap())
            } else {
                b.edge(perm[u], perm[v])
            };
        }
        if let Some(labels) = &self.vertex_labels {
            let mut out = vec![0; n];
            for v in 0..n {
                out[perm[v]] = labels[v];
            }
            b = b.vertex_labels(out);
        }
        if let Some(attrs) = &self.attributes {
            let mut rows = vec![Vec::new(); n];
            for v in 0..n {
                rows[perm[v]] = attrs.row(v).to_vec();
            }
            b = b.attributes(Attributes::from_rows(&rows)?);
        }
        b.build()
    }

    /// Checks the structural invariants: symmetric sorted adjacency, no
    /// self-loops, no parallel edges, consistent annotation lengths.
    pub fn audit(&self) -> Result<()> {
        let n = self.order();
        let mut directed = 0usize;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            if self.adjacency_labels[u].len() != nbrs.len() {
                return Err(contract(format!("edge label list of vertex {u} misaligned")));
            }
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(contract(format!("neighbors of {u} not strictly sorted")));
                }
            }
            for (pos, &v) in nbrs.iter().enumerate() {
                let v = v as usize;
                if v >= n {
                    return Err(contract(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(contract(format!("self-loop at {u}")));
                }
                match self.edge_label(v, u) {
                    None => return Err(contract(format!("edge {u}-{v} not symmetric"))),
                    Some(l) if l != self.adjacency_labels[u][pos] => {
                        return Err(contract(format!("edge {u}-{v} labeled inconsistently")))
                    }
                    _ => {}
                }
            }
            directed += nbrs.len();
        }
        if directed != 2 * self.edge_count {
            return Err(contract("edge count inconsistent with adjacency"));
        }
        if let Some(l) = &self.vertex_labels {
            check_len("vertex labels", l.len(), n)?;
        }
        if let Some(a) = &self.attributes {
            check_len("attribute rows", a.len(), n)?;
        }
        Ok(())
    }
}

fn check_len(what: &str, got: usize, n: usize) -> Result<()> {
    if got != n {
        return Err(contract(format!("{what}: expected {n} entries, found {got}")));
    }
    Ok(())
}

/// Incremental construction of a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(usize, usize, Option<Label>)>,
    vertex_labels: Option<Vec<Label>>,
    attributes: Option<Attributes>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            vertex_labels: None,
            attributes: None,
        }
    }

    pub fn edge(mut self, u: usize, v: usize) -> Self {
        self.edges.push((u, v, None));
        self
    }

    pub fn edges(mut self, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.edges.extend(edges.into_iter().map(|(u, v)| (u, v, None)));
        self
    }

    pub fn labeled_edge(mut self, u: usize, v: usize, label: Label) -> Self {
        self.edges.push((u, v, Some(label)));
        self
    }

    pub fn vertex_labels(mut self, labels: Vec<Label>) -> Self {
        self.vertex_labels = Some(labels);
        self
    }

    pub fn attributes(mut self, attributes: Attributes) -> Self {
        self.attributes = Some(attributes);
        self
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.n;
        let labeled = self.edges.iter().filter(|e| e.2.is_some()).count();
        if labeled != 0 && labeled != self.edges.len() {
            return Err(contract("either all edges or no edges carry labels"));
        }
        let mut lists: Vec<Vec<(u32, Label)>> = vec![Vec::new(); n];
        for &(u, v, label) in &self.edges {
            if u >= n || v >= n {
                return Err(contract(format!("edge {u}-{v} references a vertex >= {n}")));
            }
            if u == v {
                return Err(contract(format!("self-loop at vertex {u}")));
            }
            let l = label.unwrap_or(0);
            lists[u].push((v as u32, l));
            lists[v].push((u as u32, l));
        }
        let mut adjacency = Vec::with_capacity(n);
        let mut adjacency_labels = Vec::with_capacity(n);
        for (u, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(contract(format!("parallel edges at vertex {u}")));
            }
            adjacency.push(list.iter().map(|e| e.0).collect());
            adjacency_labels.push(list.iter().map(|e| e.1).collect());
        }
        if let Some(l) = &self.vertex_labels {
            check_len("vertex labels", l.len(), n)?;
        }
        if let Some(a) = &self.attributes {
            check_len("attribute rows", a.len(), n)?;
        }
        Ok(Graph {
            adjacency,
            adjacency_labels,
            vertex_labels: self.vertex_labels,
            has_edge_labels: labeled > 0,
            attributes: self.attributes,
            edge_count: self.edges.len(),
        })
    }
}
