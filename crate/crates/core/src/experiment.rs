//! Named kernel configurations, regime selection and running-time sweeps.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::base::{sample_binning_grid, EdgeKernel, LengthKernel, VertexFeatureMap, VertexKernel};
use crate::dataset::Dataset;
use crate::error::{contract, param, Result};
use crate::generate::{generate_synthetic_alphabet, generate_synthetic_labeled};
use crate::gram::{gram_explicit, gram_implicit, GramMatrix};
use crate::shortest_path::{
    sp_features_approx_dirac, sp_features_from_transform, sp_kernel_with_transforms, SpTransform,
};
use crate::subgraph::{graphlet_features, subgraph_matching_kernel, SubgraphMatchingOptions};
use crate::walk::{max_walk_features_explicit, max_walk_kernel_implicit, walk_features_explicit, walk_kernel_implicit};
use crate::weighted_vertex::{
    graph_invariant_weight_maps, graphhopper_weight_maps, wv_features_explicit, wv_kernel_implicit, WeightMaps,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Walk,
    MaxWalk,
    ShortestPath,
    Graphlet,
    SubgraphMatching,
    GraphInvariant,
    GraphHopper,
}

impl KernelKind {
    pub const ALL: [KernelKind; 7] = [
        KernelKind::Walk,
        KernelKind::MaxWalk,
        KernelKind::ShortestPath,
        KernelKind::Graphlet,
        KernelKind::SubgraphMatching,
        KernelKind::GraphInvariant,
        KernelKind::GraphHopper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Walk => "walk",
            KernelKind::MaxWalk => "max-walk",
            KernelKind::ShortestPath => "shortest-path",
            KernelKind::Graphlet => "graphlet",
            KernelKind::SubgraphMatching => "subgraph-matching",
            KernelKind::GraphInvariant => "graph-invariant",
            KernelKind::GraphHopper => "graphhopper",
        }
    }

    pub fn names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| param(format!("unknown kernel {s:?}; valid kernels: {}", Self::names())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Implicit,
    Explicit,
    Both,
}

impl FromStr for Regime {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "implicit" => Ok(Regime::Implicit),
            "explicit" => Ok(Regime::Explicit),
            "both" => Ok(Regime::Both),
            _ => Err(param(format!("unknown regime {s:?}; valid: implicit, explicit, both"))),
        }
    }
}

/// A kernel with all its parameters.
///
/// Vertex comparison: `sigma` selects an RBF kernel and `delta` a hat kernel
/// on attributes (approximated by `binning` random grids in the explicit
/// scheme); otherwise discrete labels are compared, or exact attribute
/// vectors for attributed graphs without labels.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub length: usize,
    /// Max-walk weights `λ_0..λ_ℓ`; all ones when absent.
    pub lambda: Option<Vec<f64>>,
    pub wl_iterations: usize,
    pub delta: Option<f64>,
    pub sigma: Option<f64>,
    pub binning: usize,
    pub max_size: usize,
    pub connected_only: bool,
    pub seed: u64,
    /// Feature budget of the approximate shortest-path map.
    pub budget: Option<usize>,
}

impl KernelSpec {
    pub fn new(kind: KernelKind) -> Self {
        KernelSpec {
            kind,
            length: 2,
            lambda: None,
            wl_iterations: 2,
            delta: None,
            sigma: None,
            binning: 16,
            max_size: 3,
            connected_only: true,
            seed: 0,
            budget: None,
        }
    }

    pub fn walk(length: usize) -> Self {
        KernelSpec {
            length,
            ..Self::new(KernelKind::Walk)
        }
    }

    pub fn descriptor(&self) -> String {
        let mut s = self.kind.name().to_string();
        let mut parts = Vec::new();
        match self.kind {
            KernelKind::Walk => parts.push(format!("length={}", self.length)),
            KernelKind::MaxWalk => {
                parts.push(format!("length={}", self.length));
                if let Some(l) = &self.lambda {
                    parts.push(format!("lambda={l:?}"));
                }
            }
            KernelKind::GraphInvariant => parts.push(format!("wl_iters={}", self.wl_iterations)),
            KernelKind::SubgraphMatching => {
                parts.push(format!("max_size={}", self.max_size));
                parts.push(format!("connected={}", self.connected_only));
            }
            _ => {}
        }
        if let Some(d) = self.delta {
            parts.push(format!("delta={d}"));
            parts.push(format!("binning={}", self.binning));
            parts.push(format!("seed={}", self.seed));
        }
        if let Some(sg) = self.sigma {
            parts.push(format!("sigma={sg}"));
        }
        if !parts.is_empty() {
            s.push('(');
            s.push_str(&parts.join(","));
            s.push(')');
        }
        s
    }

    fn lambda(&self) -> Vec<f64> {
        self.lambda.clone().unwrap_or_else(|| vec![1.0; self.length + 1])
    }

    fn uses_attributes(ds: &Dataset) -> bool {
        !ds.is_empty()
            && ds
                .graphs()
                .iter()
                .all(|g| !g.has_vertex_labels() && g.attributes().is_some())
    }

    pub fn vertex_kernel(&self, ds: &Dataset) -> Result<VertexKernel> {
        let k = match (self.sigma, self.delta) {
            (Some(_), Some(_)) => return Err(param("give either sigma or delta, not both")),
            (Some(sigma), None) => VertexKernel::Rbf { sigma },
            (None, Some(delta)) => VertexKernel::Hat { delta },
            (None, None) if Self::uses_attributes(ds) => VertexKernel::DiracAttributes,
            (None, None) => VertexKernel::DiracLabel,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn vertex_map(&self, ds: &Dataset) -> Result<VertexFeatureMap> {
        match (self.sigma, self.delta) {
            (Some(_), _) => Err(contract(
                "the RBF kernel has no explicit feature map here; use a hat kernel (delta) or the implicit scheme",
            )),
            (None, Some(delta)) => {
                let dim = ds
                    .attribute_dim()
                    .ok_or_else(|| contract("binning needs attributes of one dimension on every graph"))?;
                Ok(VertexFeatureMap::Binning(Arc::new(sample_binning_grid(
                    dim,
                    delta,
                    self.binning,
                    self.seed,
                )?)))
            }
            (None, None) if Self::uses_attributes(ds) => Ok(VertexFeatureMap::AttributeOneHot),
            (None, None) => Ok(VertexFeatureMap::LabelOneHot),
        }
    }

    fn weight_maps(&self, ds: &Dataset) -> Result<Option<WeightMaps>> {
        match self.kind {
            KernelKind::GraphInvariant => Ok(Some(graph_invariant_weight_maps(ds, self.wl_iterations))),
            KernelKind::GraphHopper => graphhopper_weight_maps(ds).map(Some),
            _ => Ok(None),
        }
    }

    /// Kernel matrix by pairwise evaluation.
    pub fn gram_implicit(&self, ds: &Dataset, parallel: bool) -> Result<GramMatrix> {
        let kv = self.vertex_kernel(ds)?;
        let ke = EdgeKernel::DiracLabel;
        let descriptor = self.descriptor();
        let g = |i: usize| ds.graph(i);
        match self.kind {
            KernelKind::Walk => gram_implicit(ds, descriptor, parallel, |i, j| {
                walk_kernel_implicit(g(i), g(j), &kv, &ke, self.length)
            }),
            KernelKind::MaxWalk => {
                let lambda = self.lambda();
                gram_implicit(ds, descriptor, parallel, |i, j| {
                    max_walk_kernel_implicit(g(i), g(j), &kv, &ke, self.length, &lambda)
                })
            }
            KernelKind::ShortestPath => {
                let start = Instant::now();
                let t: Vec<SpTransform> = ds.graphs().iter().map(SpTransform::new).collect();
                let prep = start.elapsed().as_secs_f64();
                let mut k = gram_implicit(ds, descriptor, parallel, |i, j| {
                    sp_kernel_with_transforms(g(i), &t[i], g(j), &t[j], &kv, LengthKernel::Dirac)
                })?;
                k.set_map_seconds(prep);
                Ok(k)
            }
            KernelKind::Graphlet => Err(contract(
                "the graphlet kernel is computed explicitly; use subgraph-matching for the implicit scheme",
            )),
            KernelKind::SubgraphMatching => {
                let mut opts = SubgraphMatchingOptions::exactly(self.max_size);
                opts.connected_only = self.connected_only;
                gram_implicit(ds, descriptor, parallel, |i, j| {
                    subgraph_matching_kernel(g(i), g(j), &kv, &ke, &opts)
                })
            }
            KernelKind::GraphInvariant | KernelKind::GraphHopper => {
                let start = Instant::now();
                let w = self.weight_maps(ds)?.unwrap();
                let prep = start.elapsed().as_secs_f64();
                let mut k = gram_implicit(ds, descriptor, parallel, |i, j| {
                    wv_kernel_implicit(g(i), w.graph(i), g(j), w.graph(j), &kv)
                })?;
                k.set_map_seconds(prep);
                Ok(k)
            }
        }
    }

    /// Kernel matrix by explicit feature vectors.
    pub fn gram_explicit(&self, ds: &Dataset, parallel: bool) -> Result<GramMatrix> {
        let descriptor = self.descriptor();
        let g = |i: usize| ds.graph(i);
        match self.kind {
            KernelKind::Walk => gram_explicit(ds, descriptor, parallel, |i| walk_features_explicit(g(i), self.length)),
            KernelKind::MaxWalk => {
                let lambda = self.lambda();
                gram_explicit(ds, descriptor, parallel, |i| {
                    max_walk_features_explicit(g(i), self.length, &lambda)
                })
            }
            KernelKind::ShortestPath => match self.vertex_map(ds)? {
                VertexFeatureMap::LabelOneHot => gram_explicit(ds, descriptor, parallel, |i| {
                    Ok(sp_features_from_transform(g(i), &SpTransform::new(g(i))))
                }),
                map => gram_explicit(ds, descriptor, parallel, |i| {
                    sp_features_approx_dirac(g(i), &map, self.budget)
                }),
            },
            KernelKind::Graphlet => gram_explicit(ds, descriptor, parallel, |i| Ok(graphlet_features(g(i)))),
            KernelKind::SubgraphMatching => Err(contract(
                "the subgraph matching kernel is computed implicitly; use graphlet for the explicit scheme",
            )),
            KernelKind::GraphInvariant | KernelKind::GraphHopper => {
                let map = self.vertex_map(ds)?;
                let start = Instant::now();
                let w = self.weight_maps(ds)?.unwrap();
                let prep = start.elapsed().as_secs_f64();
                let mut k = gram_explicit(ds, descriptor, parallel, |i| {
                    wv_features_explicit(g(i), w.graph(i), &map)
                })?;
                k.set_map_seconds(k.timing().map_seconds + prep);
                Ok(k)
            }
        }
    }
}

/// Output of [`compute`].
#[derive(Debug, Clone)]
pub struct Computation {
    pub implicit: Option<GramMatrix>,
    pub explicit: Option<GramMatrix>,
    /// Largest absolute entrywise difference when both schemes ran.
    pub discrepancy: Option<f64>,
}

pub fn compute(ds: &Dataset, spec: &KernelSpec, regime: Regime, parallel: bool) -> Result<Computation> {
    let implicit = match regime {
        Regime::Implicit | Regime::Both => Some(spec.gram_implicit(ds, parallel)?),
        Regime::Explicit => None,
    };
    let explicit = match regime {
        Regime::Explicit | Regime::Both => Some(spec.gram_explicit(ds, parallel)?),
        Regime::Implicit => None,
    };
    let discrepancy = match (&implicit, &explicit) {
        (Some(a), Some(b)) => Some(a.max_abs_discrepancy(b)?),
        _ => None,
    };
    Ok(Computation {
        implicit,
        explicit,
        discrepancy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Label diversity `p_V` of the labeled generator; walk kernels.
    LabelDiversity,
    /// Walk length; walk kernels on a fixed dataset or the labeled generator.
    WalkLength,
    /// Alphabet size of the alphabet generator; subgraph matching (implicit)
    /// against three-vertex graphlets (explicit).
    Alphabet,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::LabelDiversity => "pv",
            SweepAxis::WalkLength => "length",
            SweepAxis::Alphabet => "alphabet",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pv" => Ok(SweepAxis::LabelDiversity),
            "length" => Ok(SweepAxis::WalkLength),
            "alphabet" => Ok(SweepAxis::Alphabet),
            _ => Err(param(format!("unknown sweep axis {s:?}; valid: pv, length, alphabet"))),
        }
    }
}

/// Grid and generator settings of a running-time sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub mean_vertices: f64,
    pub edge_prob: f64,
    /// Walk length on the label-diversity axis.
    pub length: usize,
    /// Label diversity of generated data on the walk-length axis.
    pub label_diversity: f64,
    /// Data for the walk-length axis; generated when absent.
    pub dataset: Option<Dataset>,
}

impl SweepConfig {
    /// Reduced grids that finish in minutes.
    pub fn desk(axis: SweepAxis) -> Self {
        let (values, sizes, mean, p) = match axis {
            SweepAxis::LabelDiversity => (
                (0..10).map(|i| i as f64 / 10.0).collect(),
                vec![50, 75, 100, 125, 150],
                20.0,
                0.1,
            ),
            SweepAxis::WalkLength => ((0..=9).map(f64::from).collect(), vec![50, 75, 100, 125, 150], 20.0, 0.1),
            SweepAxis::Alphabet => (vec![1.0, 2.0, 5.0, 10.0, 20.0, 30.0], vec![10, 20, 30], 20.0, 0.5),
        };
        SweepConfig {
            axis,
            values,
            sizes,
            reps: 5,
            seed: 0,
            mean_vertices: mean,
            edge_prob: p,
            length: 7,
            label_diversity: 0.3,
            dataset: None,
        }
    }

    /// Full-scale grids: 100–300 graphs, larger alphabet range.
    pub fn full_scale(axis: SweepAxis) -> Self {
        let mut c = Self::desk(axis);
        match axis {
            SweepAxis::LabelDiversity | SweepAxis::WalkLength => c.sizes = (100..=300).step_by(20).collect(),
            SweepAxis::Alphabet => {
                c.sizes = (100..=300).step_by(50).collect();
                c.values = vec![
                    1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 65.0,
                ];
                c.mean_vertices = 60.0;
            }
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() || self.sizes.is_empty() {
            return Err(param("sweep axes must not be empty"));
        }
        if self.reps < 1 {
            return Err(param("sweep needs at least one repetition"));
        }
        if self.sizes.contains(&0) {
            return Err(param("dataset sizes must be positive"));
        }
        Ok(())
    }
}

/// One grid cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub size: usize,
    pub implicit_seconds: f64,
    pub explicit_seconds: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "axis,value,size,implicit_seconds,explicit_seconds,winner";

    pub fn winner(&self) -> Regime {
        if self.explicit_seconds < self.implicit_seconds {
            Regime::Explicit
        } else {
            Regime::Implicit
        }
    }

    pub fn to_csv(&self) -> String {
        let winner = match self.winner() {
            Regime::Explicit => "explicit",
            _ => "implicit",
        };
        format!(
            "{},{},{},{:.6},{:.6},{winner}",
            self.axis.name(),
            self.value,
            self.size,
            self.implicit_seconds,
            self.explicit_seconds
        )
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Median total Gram matrix times of both schemes over `reps` runs.
pub fn time_schemes(ds: &Dataset, implicit: &KernelSpec, explicit: &KernelSpec, reps: usize) -> Result<(f64, f64)> {
    let mut ti = Vec::with_capacity(reps);
    let mut te = Vec::with_capacity(reps);
    for _ in 0..reps {
        ti.push(implicit.gram_implicit(ds, false)?.timing().total_seconds);
        te.push(explicit.gram_explicit(ds, false)?.timing().total_seconds);
    }
    Ok((median(ti), median(te)))
}

/// Runs the sweep cell by cell (sequentially, for comparable timings).
///
/// For each axis value one dataset of the largest size is generated (seed
/// `seed + value index`) and smaller sizes use its prefixes, so the dataset
/// grows by adding graphs as in the original protocol.
pub fn run_sweep(cfg: &SweepConfig, mut progress: impl FnMut(&SweepRow)) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let max_size = *cfg.sizes.iter().max().unwrap();
    let mut rows = Vec::new();
    let base = match (&cfg.dataset, cfg.axis) {
        (Some(ds), SweepAxis::WalkLength) => {
            if ds.len() < max_size {
                return Err(param(format!(
                    "dataset has {} graphs, sweep needs {max_size}",
                    ds.len()
                )));
            }
            Some(shuffled(ds, cfg.seed))
        }
        (None, SweepAxis::WalkLength) => Some(generate_synthetic_labeled(
            max_size,
            cfg.mean_vertices,
            cfg.edge_prob,
            cfg.label_diversity,
            cfg.seed,
        )?),
        _ => None,
    };
    for (vi, &value) in cfg.values.iter().enumerate() {
        let seed = cfg.seed.wrapping_add(vi as u64);
        let (full, implicit, explicit) = match cfg.axis {
            SweepAxis::LabelDiversity => (
                generate_synthetic_labeled(max_size, cfg.mean_vertices, cfg.edge_prob, value, seed)?,
                KernelSpec::walk(cfg.length),
                KernelSpec::walk(cfg.length),
            ),
            SweepAxis::WalkLength => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(param(format!("walk length {value} is not a non-negative integer")));
                }
                (
                    base.clone().unwrap(),
                    KernelSpec::walk(value as usize),
                    KernelSpec::walk(value as usize),
                )
            }
            SweepAxis::Alphabet => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(param(format!("alphabet size {value} is not a positive integer")));
                }
                (
                    generate_synthetic_alphabet(max_size, cfg.mean_vertices, cfg.edge_prob, value as usize, seed)?,
                    KernelSpec::new(KernelKind::SubgraphMatching),
                    KernelSpec::new(KernelKind::Graphlet),
                )
            }
        };
        for &size in &cfg.sizes {
            let ds = full.prefix(size);
            let (implicit_seconds, explicit_seconds) = time_schemes(&ds, &implicit, &explicit, cfg.reps)?;
            let row = SweepRow {
                axis: cfg.axis,
                value,
                size,
                implicit_seconds,
                explicit_seconds,
            };
            progress(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Dataset in a seeded random order (Fisher-Yates from the end, one
/// `below(i + 1)` draw per position).
pub fn shuffled(ds: &Dataset, seed: u64) -> Dataset {
    let mut rng = crate::rng::PortableRng::new(seed);
    let mut order: Vec<usize> = (0..ds.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.below(i + 1));
    }
    ds.reordered(&order)
}
