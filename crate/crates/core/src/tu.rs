//! Reader and writer for the TU benchmark collection's text format.
//!
//! A dataset `NAME` is a directory of line-oriented files:
//! `NAME_A.txt` (edges `u, v` with 1-based global vertex ids, listed in both
//! directions), `NAME_graph_indicator.txt` (1-based graph id per vertex),
//! `NAME_graph_labels.txt` (class per graph) and optionally
//! `NAME_node_labels.txt`, `NAME_edge_labels.txt` (one per line of `_A`) and
//! `NAME_node_attributes.txt` (comma-separated reals per vertex).

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::gram::write_file;
use crate::graph::{Attributes, Graph, Label};

struct TuFile {
    path: PathBuf,
    lines: Vec<(usize, String)>,
}

impl TuFile {
    fn open(root: &Path, name: &str, suffix: &str, required: bool) -> Result<Option<TuFile>> {
        let path = root.join(format!("{name}_{suffix}.txt"));
        if !required && !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path).map_err(|source| Error::Load {
            path: path.clone(),
            source,
        })?;
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim().to_string()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Ok(Some(TuFile { path, lines }))
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Format {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn integers(&self) -> Result<Vec<(usize, i64)>> {
        self.lines
            .iter()
            .map(|(no, l)| {
                l.parse::<i64>()
                    .map(|x| (*no, x))
                    .map_err(|e| self.error(*no, format!("expected an integer, got {l:?}: {e}")))
            })
            .collect()
    }

    fn rows<T: std::str::FromStr>(&self) -> Result<Vec<(usize, Vec<T>)>>
    where
        T::Err: std::fmt::Display,
    {
        self.lines
            .iter()
            .map(|(no, l)| {
                l.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<T>()
                            .map_err(|e| self.error(*no, format!("cannot parse {:?}: {e}", x.trim())))
                    })
                    .collect::<Result<Vec<T>>>()
                    .map(|r| (*no, r))
            })
            .collect()
    }
}

/// Dense codes for raw label values, in increasing value order.
fn recode(raw: &[i64]) -> (Vec<Label>, Vec<i64>) {
    let mut values = raw.to_vec();
    values.sort_unstable();
    values.dedup();
    let codes = raw.iter().map(|x| values.binary_search(x).unwrap() as Label).collect();
    (codes, values)
}

/// Loads `root/name_*.txt` into a dataset with 0-based ids.
///
/// Edges are deduplicated into undirected form; an edge listed in only one
/// direction is a format error. Self-loops are dropped, since graphs here are
/// simple.
pub fn load_tu_dataset(root: &Path, name: &str) -> Result<Dataset> {
    let a = TuFile::open(root, name, "A", true)?.unwrap();
    let indicator = TuFile::open(root, name, "graph_indicator", true)?.unwrap();
    let graph_labels = TuFile::open(root, name, "graph_labels", true)?.unwrap();
    let node_labels = TuFile::open(root, name, "node_labels", false)?;
    let edge_labels = TuFile::open(root, name, "edge_labels", false)?;
    let node_attrs = TuFile::open(root, name, "node_attributes", false)?;

    let classes: Vec<i64> = graph_labels.integers()?.into_iter().map(|(_, x)| x).collect();
    let graph_count = classes.len();

    // Global vertex -> (graph, local index).
    let mut owner = Vec::new();
    let mut sizes = vec![0usize; graph_count];
    for (no, gid) in indicator.integers()? {
        if gid < 1 || gid as usize > graph_count {
            return Err(indicator.error(no, format!("graph id {gid} outside 1..={graph_count}")));
        }
        let g = gid as usize - 1;
        owner.push((g, sizes[g]));
        sizes[g] += 1;
    }
    let vertex_count = owner.len();

    let check_len = |f: &TuFile, len: usize, what: &str| -> Result<()> {
        if len != vertex_count {
            let line = f.lines.get(len.min(vertex_count)).map_or(f.lines.len() + 1, |l| l.0);
            return Err(f.error(line, format!("{len} {what} for {vertex_count} vertices")));
        }
        Ok(())
    };

    let vertex_labels = match &node_labels {
        Some(f) => {
            let raw: Vec<i64> = f.integers()?.into_iter().map(|(_, x)| x).collect();
            check_len(f, raw.len(), "node labels")?;
            Some(recode(&raw))
        }
        None => None,
    };
    let attributes = match &node_attrs {
        Some(f) => {
            let rows = f.rows::<f64>()?;
            check_len(f, rows.len(), "attribute rows")?;
            let dim = rows.first().map_or(0, |r| r.1.len());
            if let Some((no, r)) = rows.iter().find(|r| r.1.len() != dim) {
                return Err(f.error(*no, format!("attribute row of dimension {} (expected {dim})", r.len())));
            }
            Some((dim, rows.into_iter().map(|r| r.1).collect::<Vec<_>>()))
        }
        None => None,
    };

    let edge_rows = a.rows::<i64>()?;
    let raw_edge_labels = match &edge_labels {
        Some(f) => {
            let raw = f.integers()?;
            if raw.len() != edge_rows.len() {
                let line = raw.last().map_or(1, |r| r.0);
                return Err(f.error(line, format!("{} edge labels for {} edges", raw.len(), edge_rows.len())));
            }
            Some(raw.into_iter().map(|(_, x)| x).collect::<Vec<_>>())
        }
        None => None,
    };
    let (edge_codes, edge_values) = match &raw_edge_labels {
        Some(raw) => {
            let (c, v) = recode(raw);
            (Some(c), v)
        }
        None => (None, Vec::new()),
    };

    // Directed listings per graph: (local u, local v) -> (label, line).
    let mut directed: Vec<BTreeMap<(usize, usize), (Label, usize)>> = vec![BTreeMap::new(); graph_count];
    for (k, (no, row)) in edge_rows.iter().enumerate() {
        let &[u, v] = row.as_slice() else {
            return Err(a.error(*no, format!("expected two vertex ids, got {}", row.len())));
        };
        let local = |x: i64| -> Result<(usize, usize)> {
            if x < 1 || x as usize > vertex_count {
                return Err(a.error(*no, format!("vertex {x} outside 1..={vertex_count}")));
            }
            Ok(owner[x as usize - 1])
        };
        let ((gu, lu), (gv, lv)) = (local(u)?, local(v)?);
        if gu != gv {
            return Err(a.error(*no, format!("edge {u}-{v} joins graphs {} and {}", gu + 1, gv + 1)));
        }
        if lu == lv {
            continue;
        }
        let label = edge_codes.as_ref().map_or(0, |c| c[k]);
        if let Some(&(prev, _)) = directed[gu].get(&(lu, lv)) {
            if prev != label {
                return Err(a.error(*no, format!("edge {u}-{v} listed with conflicting labels")));
            }
        }
        directed[gu].insert((lu, lv), (label, *no));
    }

    let mut graphs = Vec::with_capacity(graph_count);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); graph_count];
    for (global, &(g, _)) in owner.iter().enumerate() {
        members[g].push(global);
    }
    for g in 0..graph_count {
        let mut b = Graph::builder(sizes[g]);
        for (&(u, v), &(label, no)) in &directed[g] {
            match directed[g].get(&(v, u)) {
                None => {
                    return Err(a.error(no, "edge listed in one direction only"));
                }
                Some(&(back, _)) if back != label => {
                    return Err(a.error(no, "edge listed with conflicting labels"));
                }
                _ => {}
            }
            if u < v {
                b = match edge_codes {
                    Some(_) => b.labeled_edge(u, v, label),
                    None => b.edge(u, v),
                };
            }
        }
        if let Some((codes, _)) = &vertex_labels {
            b = b.vertex_labels(members[g].iter().map(|&x| codes[x]).collect());
        }
        if let Some((dim, rows)) = &attributes {
            let data = members[g].iter().flat_map(|&x| rows[x].iter().copied()).collect();
            b = b.attributes(Attributes::new(*dim, data)?);
        }
        graphs.push(b.build()?);
    }

    let vertex_values = vertex_labels.map(|(_, v)| v).unwrap_or_default();
    Dataset::new(name, graphs, classes)?.with_label_values(vertex_values, edge_values)
}

/// Writes a dataset in the same format (both edge directions listed).
pub fn write_tu_dataset(ds: &Dataset, root: &Path, name: &str) -> Result<()> {
    fs::create_dir_all(root).map_err(|source| Error::Write {
        path: root.to_path_buf(),
        source,
    })?;
    let mut a = String::new();
    let mut indicator = String::new();
    let mut node_labels = String::new();
    let mut edge_labels = String::new();
    let mut attrs = String::new();
    let labeled = !ds.is_empty() && ds.graphs().iter().all(Graph::has_vertex_labels);
    let edge_labeled = !ds.is_empty() && ds.graphs().iter().all(Graph::has_edge_labels);
    let attributed = ds.attribute_dim().is_some();
    let value = |table: &[i64], code: Label| table.get(code as usize).copied().unwrap_or(code as i64);
    let mut offset = 0;
    for (gi, g) in ds.graphs().iter().enumerate() {
        for v in 0..g.order() {
            indicator.push_str(&format!("{}\n", gi + 1));
            if labeled {
                node_labels.push_str(&format!("{}\n", value(ds.vertex_label_values(), g.label(v))));
            }
            if attributed {
                let row: Vec<String> = g.attribute(v).unwrap().iter().map(|x| x.to_string()).collect();
                attrs.push_str(&row.join(", "));
                attrs.push('\n');
            }
            for (&u, &l) in g.neighbors(v).iter().zip(g.neighbor_edge_labels(v)) {
                a.push_str(&format!("{}, {}\n", offset + v + 1, offset + u as usize + 1));
                if edge_labeled {
                    edge_labels.push_str(&format!("{}\n", value(ds.edge_label_values(), l)));
                }
            }
        }
        offset += g.order();
    }
    let classes: String = ds.class_labels().iter().map(|c| format!("{c}\n")).collect();
    let path = |suffix: &str| root.join(format!("{name}_{suffix}.txt"));
    write_file(&path("A"), &a)?;
    write_file(&path("graph_indicator"), &indicator)?;
    write_file(&path("graph_labels"), &classes)?;
    if labeled {
        write_file(&path("node_labels"), &node_labels)?;
    }
    if edge_labeled {
        write_file(&path("edge_labels"), &edge_labels)?;
    }
    if attributed {
        write_file(&path("node_attributes"), &attrs)?;
    }
    Ok(())
}

/// Reads a `key = value` sidecar of expected statistics, if present.
pub fn read_expected_stats(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect())
}
