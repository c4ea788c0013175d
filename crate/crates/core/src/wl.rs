//! Weisfeiler-Lehman color refinement with a dataset-wide color table.

use rustc_hash::FxHashMap;

use crate::dataset::Dataset;

/// Initial coloring for refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialColors {
    /// Every vertex starts with color 0 (refinement of the unlabeled graph).
    Uniform,
    /// Start from the dataset's discrete vertex labels.
    Labels,
}

/// Injective map from signatures `(own color, sorted neighbor colors)` to
/// dense colors of one refinement iteration.
#[derive(Debug, Default)]
pub struct ColorTable {
    map: FxHashMap<Vec<u32>, u32>,
}

impl ColorTable {
    pub fn color(&mut self, signature: Vec<u32>) -> u32 {
        let next = self.map.len() as u32;
        *self.map.entry(signature).or_insert(next)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Colors of every vertex of every graph after each iteration `0..=h`.
///
/// Colors are dense per iteration and comparable across graphs of the same
/// refinement run.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorAssignment {
    colors: Vec<Vec<Vec<u32>>>,
    colors_per_iteration: Vec<usize>,
}

impl ColorAssignment {
    pub fn iterations(&self) -> usize {
        self.colors_per_iteration.len() - 1
    }

    /// `τ_i` of graph `g`.
    pub fn colors(&self, g: usize, i: usize) -> &[u32] {
        &self.colors[g][i]
    }

    pub fn colors_per_iteration(&self) -> &[usize] {
        &self.colors_per_iteration
    }

    /// Total number of distinct colors over all iterations.
    pub fn total_colors(&self) -> usize {
        self.colors_per_iteration.iter().sum()
    }
}

pub fn wl_refine_dataset(ds: &Dataset, h: usize, init: InitialColors) -> ColorAssignment {
    let mut colors: Vec<Vec<Vec<u32>>> = ds
        .graphs()
        .iter()
        .map(|g| {
            let c0 = match init {
                InitialColors::Uniform => vec![0; g.order()],
                InitialColors::Labels => (0..g.order()).map(|v| g.label(v)).collect(),
            };
            vec![c0]
        })
        .collect();
    let mut per_iter = Vec::with_capacity(h + 1);
    let mut distinct0: Vec<u32> = colors.iter().flat_map(|c| c[0].iter().copied()).collect();
    distinct0.sort_unstable();
    distinct0.dedup();
    per_iter.push(distinct0.len());

    let mut signature = Vec::new();
    for i in 1..=h {
        let mut table = ColorTable::default();
        for (g, graph_colors) in ds.graphs().iter().zip(colors.iter_mut()) {
            let prev = &graph_colors[i - 1];
            let next = (0..g.order())
                .map(|v| {
                    signature.clear();
                    signature.extend(g.neighbors(v).iter().map(|&u| prev[u as usize]));
                    signature.sort_unstable();
                    signature.insert(0, prev[v]);
                    table.color(signature.clone())
                })
                .collect();
            graph_colors.push(next);
        }
        per_iter.push(table.len());
    }
    ColorAssignment {
        colors,
        colors_per_iteration: per_iter,
    }
}
