//! Graph collections with shared label coding.

use std::sync::OnceLock;

use crate::error::{contract, Result};
use crate::graph::Graph;
use crate::paths::all_pairs_shortest_paths;

/// A collection of graphs with class labels.
///
/// Vertex and edge labels are dense integer codes shared by all graphs;
/// `vertex_label_values[c]` is the original value of code `c`.
#[derive(Debug)]
pub struct Dataset {
    pub name: String,
    graphs: Vec<Graph>,
    class_labels: Vec<i64>,
    vertex_label_values: Vec<i64>,
    edge_label_values: Vec<i64>,
    max_diameter: OnceLock<usize>,
}

impl Clone for Dataset {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            graphs: self.graphs.clone(),
            class_labels: self.class_labels.clone(),
            vertex_label_values: self.vertex_label_values.clone(),
            edge_label_values: self.edge_label_values.clone(),
            max_diameter: self.max_diameter.clone(),
        }
    }
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.graphs == other.graphs
            && self.class_labels == other.class_labels
            && self.vertex_label_values == other.vertex_label_values
            && self.edge_label_values == other.edge_label_values
    }
}

/// Summary statistics in the layout of the usual dataset tables.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub graphs: usize,
    pub classes: usize,
    pub avg_vertices: f64,
    pub avg_edges: f64,
    pub vertex_labels: bool,
    pub edge_labels: bool,
    pub attribute_dim: Option<usize>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, class_labels: Vec<i64>) -> Result<Self> {
        if graphs.len() != class_labels.len() {
            return Err(contract(format!(
                "{} graphs but {} class labels",
                graphs.len(),
                class_labels.len()
            )));
        }
        let max_code =
            |f: &dyn Fn(&Graph) -> Option<u32>| graphs.iter().filter_map(f).max().map_or(0, |m| m as usize + 1);
        let vertex_codes = max_code(&|g: &Graph| g.vertex_labels().and_then(|l| l.iter().copied().max()));
        let edge_codes = max_code(&|g: &Graph| {
            g.has_edge_labels()
                .then(|| {
                    (0..g.order())
                        .flat_map(|v| g.neighbor_edge_labels(v).iter().copied())
                        .max()
                })
                .flatten()
        });
        Ok(Self {
            name: name.into(),
            graphs,
            class_labels,
            vertex_label_values: (0..vertex_codes as i64).collect(),
            edge_label_values: (0..edge_codes as i64).collect(),
            max_diameter: OnceLock::new(),
        })
    }

    /// Attaches the original label values for the dense codes.
    pub fn with_label_values(mut self, vertex: Vec<i64>, edge: Vec<i64>) -> Result<Self> {
        if vertex.len() < self.vertex_label_values.len() || edge.len() < self.edge_label_values.len() {
            return Err(contract("label value table smaller than the codes in use"));
        }
        self.vertex_label_values = vertex;
        self.edge_label_values = edge;
        Ok(self)
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, i: usize) -> &Graph {
        &self.graphs[i]
    }

    pub fn class_labels(&self) -> &[i64] {
        &self.class_labels
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn vertex_label_values(&self) -> &[i64] {
        &self.vertex_label_values
    }

    pub fn edge_label_values(&self) -> &[i64] {
        &self.edge_label_values
    }

    /// Size of the shared vertex label alphabet.
    pub fn label_alphabet_size(&self) -> usize {
        self.vertex_label_values.len()
    }

    /// The first `count` graphs as a new dataset sharing the label tables.
    pub fn prefix(&self, count: usize) -> Dataset {
        let count = count.min(self.len());
        Dataset {
            name: self.name.clone(),
            graphs: self.graphs[..count].to_vec(),
            class_labels: self.class_labels[..count].to_vec(),
            vertex_label_values: self.vertex_label_values.clone(),
            edge_label_values: self.edge_label_values.clone(),
            max_diameter: OnceLock::new(),
        }
    }

    /// Dataset with graphs reordered so that position `i` holds `self[order[i]]`.
    pub fn reordered(&self, order: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            graphs: order.iter().map(|&i| self.graphs[i].clone()).collect(),
            class_labels: order.iter().map(|&i| self.class_labels[i]).collect(),
            vertex_label_values: self.vertex_label_values.clone(),
            edge_label_values: self.edge_label_values.clone(),
            max_diameter: OnceLock::new(),
        }
    }

    /// Replaces all graphs, keeping class labels and label tables.
    pub fn map_graphs(&self, f: impl FnMut(&Graph) -> Result<Graph>) -> Result<Dataset> {
        let graphs = self.graphs.iter().map(f).collect::<Result<Vec<_>>>()?;
        let mut out = Dataset::new(self.name.clone(), graphs, self.class_labels.clone())?;
        if out.vertex_label_values.len() <= self.vertex_label_values.len()
            && out.edge_label_values.len() <= self.edge_label_values.len()
        {
            out.vertex_label_values = self.vertex_label_values.clone();
            out.edge_label_values = self.edge_label_values.clone();
        }
        Ok(out)
    }

    /// Largest number of vertices on any finite shortest path of any graph.
    ///
    /// Every non-empty graph contributes at least 1 (the trivial path).
    pub fn max_diameter(&self) -> usize {
        *self.max_diameter.get_or_init(|| {
            self.graphs
                .iter()
                .map(|g| {
                    let d = all_pairs_shortest_paths(g, false);
                    d.max_finite().map_or(0, |e| e as usize + 1)
                })
                .max()
                .unwrap_or(0)
        })
    }

    pub fn stats(&self) -> DatasetStats {
        let n = self.len();
        let mean = |f: &dyn Fn(&Graph) -> usize| {
            if n == 0 {
                0.0
            } else {
                self.graphs.iter().map(f).sum::<usize>() as f64 / n as f64
            }
        };
        let mut classes = self.class_labels.clone();
        classes.sort_unstable();
        classes.dedup();
        DatasetStats {
            graphs: n,
            classes: classes.len(),
            avg_vertices: mean(&|g| g.order()),
            avg_edges: mean(&|g| g.size()),
            vertex_labels: n > 0 && self.graphs.iter().all(Graph::has_vertex_labels),
            edge_labels: n > 0 && self.graphs.iter().all(Graph::has_edge_labels),
            attribute_dim: self.attribute_dim(),
        }
    }

    /// Common attribute dimension, if every graph carries attributes.
    pub fn attribute_dim(&self) -> Option<usize> {
        let mut dim = None;
        for g in &self.graphs {
            let d = g.attributes()?.dim();
            match dim {
                None => dim = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        dim
    }

    /// Checks every graph's structural invariants.
    pub fn audit(&self) -> Result<()> {
        for (i, g) in self.graphs.iter().enumerate() {
            g.audit().map_err(|e| contract(format!("graph {i}: {e}")))?;
        }
        Ok(())
    }
}

/// Linearly rescales every attribute dimension to `[0, 1]` over the whole
/// dataset. Constant dimensions become 0.
pub fn scale_attributes(ds: &Dataset) -> Result<Dataset> {
    let dim = ds
        .attribute_dim()
        .ok_or_else(|| contract("scale_attributes requires attributes of equal dimension on every graph"))?;
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for g in ds.graphs() {
        let attrs = g.attributes().expect("checked above");
        for v in 0..g.order() {
            for (i, &x) in attrs.row(v).iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
    }
    ds.map_graphs(|g| {
        let mut g = g.clone();
        let n = g.order();
        if let Some(attrs) = g.attributes_mut() {
            for v in 0..n {
                for (i, x) in attrs.row_mut(v).iter_mut().enumerate() {
                    let range = hi[i] - lo[i];
                    *x = if range > 0.0 { (*x - lo[i]) / range } else { 0.0 };
                }
            }
        }
        Ok(g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Attributes;

    fn attributed(values: &[f64]) -> Graph {
        let rows: Vec<Vec<f64>> = values.iter().map(|&x| vec![x]).collect();
        Graph::builder(values.len())
            .attributes(Attributes::from_rows(&rows).unwrap())
            .build()
            .unwrap()
    }

    fn column(ds: &Dataset) -> Vec<f64> {
        ds.graphs()
            .iter()
            .flat_map(|g| (0..g.order()).map(move |v| g.attribute(v).unwrap()[0]))
            .collect()
    }

    #[test]
    fn scaling_maps_range_to_unit_interval() {
        let ds = Dataset::new("s", vec![attributed(&[2.0, 4.0]), attributed(&[6.0])], vec![0, 1]).unwrap();
        assert_eq!(column(&scale_attributes(&ds).unwrap()), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_dimension_becomes_zero() {
        let ds = Dataset::new("s", vec![attributed(&[5.0, 5.0, 5.0])], vec![0]).unwrap();
        assert_eq!(column(&scale_attributes(&ds).unwrap()), vec![0.0; 3]);
    }

    #[test]
    fn unit_range_is_a_fixed_point() {
        let vals = [0.0, 0.25, 0.7, 1.0];
        let ds = Dataset::new("s", vec![attributed(&vals)], vec![0]).unwrap();
        let out = column(&scale_attributes(&ds).unwrap());
        for (a, b) in out.iter().zip(vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_without_attributes_is_a_contract_error() {
        let ds = Dataset::new("s", vec![Graph::from_edges(2, &[(0, 1)]).unwrap()], vec![0]).unwrap();
        assert!(matches!(scale_attributes(&ds), Err(crate::Error::Contract(_))));
    }

    #[test]
    fn class_label_count_must_match() {
        assert!(Dataset::new("x", vec![Graph::from_edges(1, &[]).unwrap()], vec![]).is_err());
    }

    #[test]
    fn diameter_counts_vertices() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let ds = Dataset::new("d", vec![path, Graph::from_edges(1, &[]).unwrap()], vec![0, 0]).unwrap();
        assert_eq!(ds.max_diameter(), 4);
    }
}
