//! Base kernels on labels, path lengths and attribute vectors, and their
//! explicit (exact or randomized) feature maps.

use std::sync::Arc;

use crate::error::{contract, param, Error, Result};
use crate::features::{tag, FeatureKey, FeatureVector};
use crate::graph::{Graph, Label};
use crate::paths::INFINITY;
use crate::rng::PortableRng;

pub fn dirac<T: PartialEq>(a: T, b: T) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(contract(format!(
            "attribute dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Dimension-wise product of `max{0, 1 − |x_i − y_i|/δ}`.
pub fn hat_kernel(x: &[f64], y: &[f64], delta: f64) -> Result<f64> {
    check_dims(x, y)?;
    let mut k = 1.0;
    for (a, b) in x.iter().zip(y) {
        k *= (1.0 - (a - b).abs() / delta).max(0.0);
        if k == 0.0 {
            break;
        }
    }
    Ok(k)
}

/// Gaussian RBF kernel `exp(−‖x − y‖² / 2σ²)`.
pub fn rbf_kernel(x: &[f64], y: &[f64], sigma: f64) -> Result<f64> {
    check_dims(x, y)?;
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((-sq / (2.0 * sigma * sigma)).exp())
}

/// Brownian bridge kernel on path lengths, `max{0, c − |d − d'|}`.
///
/// Returns 0 whenever either length is the [`INFINITY`] sentinel.
pub fn brownian_bridge(d: u32, d2: u32, c: f64) -> f64 {
    if d == INFINITY || d2 == INFINITY {
        return 0.0;
    }
    (c - (d as f64 - d2 as f64).abs()).max(0.0)
}

/// Randomly shifted grids of pitch `δ` for approximating the hat kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct BinningGrid {
    iterations: usize,
    dim: usize,
    pitch: f64,
    shifts: Vec<f64>,
}

impl BinningGrid {
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn shift(&self, p: usize) -> &[f64] {
        &self.shifts[p * self.dim..(p + 1) * self.dim]
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }
}

/// Samples `iterations` shift vectors with coordinates uniform in `[0, δ)`,
/// drawn in iteration-major order from `PortableRng::new(seed)`.
pub fn sample_binning_grid(dim: usize, delta: f64, iterations: usize, seed: u64) -> Result<BinningGrid> {
    if dim == 0 || iterations == 0 || !(delta > 0.0) {
        return Err(param(format!(
            "binning grid needs dim >= 1, P >= 1 and delta > 0 (got dim={dim}, P={iterations}, delta={delta})"
        )));
    }
    let mut rng = PortableRng::new(seed);
    let shifts = (0..iterations * dim).map(|_| rng.uniform() * delta).collect();
    Ok(BinningGrid {
        iterations,
        dim,
        pitch: delta,
        shifts,
    })
}

/// One bin per iteration with weight `1/√P`; the key is the iteration index
/// followed by the (possibly negative) bin coordinates.
pub fn binning_features(x: &[f64], grid: &BinningGrid) -> Result<FeatureVector> {
    if x.len() != grid.dim {
        return Err(contract(format!(
            "attribute dimension {} does not match binning grid dimension {}",
            x.len(),
            grid.dim
        )));
    }
    let w = 1.0 / (grid.iterations as f64).sqrt();
    let mut payload = Vec::with_capacity(grid.dim + 1);
    let entries = (0..grid.iterations).map(|p| {
        payload.clear();
        payload.push(p as i64);
        for (xi, si) in x.iter().zip(grid.shift(p)) {
            payload.push(((xi + si) / grid.pitch).floor() as i64);
        }
        (FeatureKey::new(tag::BIN, &payload), w)
    });
    Ok(FeatureVector::from_entries(entries.collect::<Vec<_>>()))
}

/// One-hot feature map of a binary kernel over the supplied items.
///
/// Items are grouped into the equivalence classes of `x ~ y ⇔ k(x, y) = 1`;
/// class ids follow first occurrence. Items with `k(x, x) = 0` map to the
/// empty vector. All item pairs are checked, so a kernel that is not
/// symmetric or whose relation is not transitive is reported.
pub fn binary_feature_map<T>(items: &[T], k: impl Fn(&T, &T) -> f64) -> Result<Vec<FeatureVector>> {
    let n = items.len();
    let mut class: Vec<Option<usize>> = vec![None; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let kii = k(&items[i], &items[i]);
        if kii != 0.0 && kii != 1.0 {
            return Err(Error::InvalidKernel(format!("value {kii} is not binary")));
        }
        if kii == 0.0 {
            continue;
        }
        class[i] = Some(
            reps.iter()
                .position(|&r| k(&items[i], &items[r]) == 1.0)
                .unwrap_or_else(|| {
                    reps.push(i);
                    reps.len() - 1
                }),
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            let kij = k(&items[i], &items[j]);
            let kji = k(&items[j], &items[i]);
            if kij != kji {
                return Err(Error::InvalidKernel(format!(
                    "k({i},{j}) = {kij} but k({j},{i}) = {kji}"
                )));
            }
            let expected = match (class[i], class[j]) {
                (Some(a), Some(b)) => dirac(a, b),
                _ => 0.0,
            };
            if kij != expected {
                return Err(Error::InvalidKernel(format!(
                    "k({i},{j}) = {kij} contradicts the equivalence classes (relation not transitive or not reflexive)"
                )));
            }
        }
    }
    Ok(class
        .into_iter()
        .map(|c| match c {
            Some(c) => FeatureVector::one_hot(FeatureKey::new(tag::CLASS, &[c as i64])),
            None => FeatureVector::empty(),
        })
        .collect())
}

/// Kernel on vertices.
#[derive(Debug, Clone)]
pub enum VertexKernel {
    /// Dirac kernel on discrete labels (uniform pseudo-label when absent).
    DiracLabel,
    /// Dirac kernel on attribute vectors (exact equality).
    DiracAttributes,
    Hat {
        delta: f64,
    },
    Rbf {
        sigma: f64,
    },
    /// Inner product of random binning features.
    Binned(Arc<BinningGrid>),
}

impl VertexKernel {
    pub fn validate(&self) -> Result<()> {
        match self {
            VertexKernel::Hat { delta } if !(*delta > 0.0) => Err(param("hat kernel needs delta > 0")),
            VertexKernel::Rbf { sigma } if !(*sigma > 0.0) => Err(param("RBF kernel needs sigma > 0")),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, g: &Graph, u: usize, h: &Graph, v: usize) -> Result<f64> {
        match self {
            VertexKernel::DiracLabel => Ok(dirac(g.label(u), h.label(v))),
            VertexKernel::DiracAttributes => {
                let (x, y) = (attribute(g, u)?, attribute(h, v)?);
                check_dims(x, y)?;
                Ok(dirac(x, y))
            }
            VertexKernel::Hat { delta } => hat_kernel(attribute(g, u)?, attribute(h, v)?, *delta),
            VertexKernel::Rbf { sigma } => rbf_kernel(attribute(g, u)?, attribute(h, v)?, *sigma),
            VertexKernel::Binned(grid) => {
                Ok(binning_features(attribute(g, u)?, grid)?.dot(&binning_features(attribute(h, v)?, grid)?))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            VertexKernel::DiracLabel => "dirac-label".into(),
            VertexKernel::DiracAttributes => "dirac-attributes".into(),
            VertexKernel::Hat { delta } => format!("hat(delta={delta})"),
            VertexKernel::Rbf { sigma } => format!("rbf(sigma={sigma})"),
            VertexKernel::Binned(g) => format!("binned(delta={},P={})", g.pitch(), g.iterations()),
        }
    }
}

fn attribute(g: &Graph, v: usize) -> Result<&[f64]> {
    g.attribute(v)
        .ok_or_else(|| contract("attribute kernel applied to a graph without vertex attributes"))
}

/// Kernel on edges, evaluated on edge labels.
#[derive(Debug, Clone)]
pub enum EdgeKernel {
    /// Dirac kernel on edge labels; unlabeled edges share pseudo-label 0.
    DiracLabel,
    /// Constant 1, ignoring labels.
    Uniform,
    /// Explicit symmetric table `weights[a][b]`; labels outside the table get 0.
    Table(Arc<Vec<Vec<f64>>>),
}

impl EdgeKernel {
    #[inline]
    pub fn eval(&self, a: Label, b: Label) -> f64 {
        match self {
            EdgeKernel::DiracLabel => dirac(a, b),
            EdgeKernel::Uniform => 1.0,
            EdgeKernel::Table(t) => t
                .get(a as usize)
                .and_then(|row| row.get(b as usize))
                .copied()
                .unwrap_or(0.0),
        }
    }

    pub fn name(&self) -> String {
        match self {
            EdgeKernel::DiracLabel => "dirac-label".into(),
            EdgeKernel::Uniform => "uniform".into(),
            EdgeKernel::Table(t) => format!("table({}x{})", t.len(), t.len()),
        }
    }
}

/// Kernel on shortest-path lengths.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum LengthKernel {
    #[default]
    Dirac,
    BrownianBridge {
        c: f64,
    },
}

impl LengthKernel {
    #[inline]
    pub fn eval(&self, d: u32, d2: u32) -> f64 {
        if d == INFINITY || d2 == INFINITY {
            return 0.0;
        }
        match self {
            LengthKernel::Dirac => dirac(d, d2),
            LengthKernel::BrownianBridge { c } => brownian_bridge(d, d2, *c),
        }
    }
}

/// Explicit feature map of a vertex kernel.
#[derive(Debug, Clone)]
pub enum VertexFeatureMap {
    /// One-hot on the discrete label; exact for [`VertexKernel::DiracLabel`].
    LabelOneHot,
    /// One-hot on the exact attribute vector; exact for
    /// [`VertexKernel::DiracAttributes`].
    AttributeOneHot,
    /// Random binning; approximates [`VertexKernel::Hat`] with the same pitch.
    Binning(Arc<BinningGrid>),
}

impl VertexFeatureMap {
    pub fn map(&self, g: &Graph, v: usize) -> Result<FeatureVector> {
        match self {
            VertexFeatureMap::LabelOneHot => Ok(FeatureVector::one_hot(FeatureKey::from_unsigned(
                tag::LABEL,
                &[g.label(v)],
            ))),
            VertexFeatureMap::AttributeOneHot => {
                let bits: Vec<i64> = attribute(g, v)?.iter().map(|x| x.to_bits() as i64).collect();
                Ok(FeatureVector::one_hot(FeatureKey::new(tag::ATTRIBUTE, &bits)))
            }
            VertexFeatureMap::Binning(grid) => binning_features(attribute(g, v)?, grid),
        }
    }

    /// The vertex kernel this map represents (exactly or in expectation).
    pub fn kernel(&self) -> VertexKernel {
        match self {
            VertexFeatureMap::LabelOneHot => VertexKernel::DiracLabel,
            VertexFeatureMap::AttributeOneHot => VertexKernel::DiracAttributes,
            VertexFeatureMap::Binning(g) => VertexKernel::Hat { delta: g.pitch() },
        }
    }

    pub fn name(&self) -> String {
        match self {
            VertexFeatureMap::LabelOneHot => "label-one-hot".into(),
            VertexFeatureMap::AttributeOneHot => "attribute-one-hot".into(),
            VertexFeatureMap::Binning(g) => format!("binning(delta={},P={})", g.pitch(), g.iterations()),
        }
    }
}

/// One-hot map of a path length (Dirac length kernel).
pub fn length_one_hot(d: u32) -> FeatureVector {
    FeatureVector::one_hot(FeatureKey::from_unsigned(tag::LENGTH, &[d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dirac_examples() {
        assert_eq!(dirac(5, 5), 1.0);
        assert_eq!(dirac(5, 6), 0.0);
    }

    #[test]
    fn hat_examples() {
        assert_eq!(hat_kernel(&[0.3, 0.1], &[0.3, 0.1], 0.5).unwrap(), 1.0);
        assert_eq!(hat_kernel(&[0.0], &[0.5], 0.5).unwrap(), 0.0);
        assert!((hat_kernel(&[0.0, 1.0], &[0.25, 1.25], 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!(hat_kernel(&[0.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn rbf_examples() {
        assert_eq!(rbf_kernel(&[1.0, 2.0], &[1.0, 2.0], 0.7).unwrap(), 1.0);
        // ‖x − y‖² = 2σ² with σ = 1.
        let k = rbf_kernel(&[0.0, 0.0], &[1.0, 1.0], 1.0).unwrap();
        assert!((k - (-1.0f64).exp()).abs() < 1e-15);
        assert!(rbf_kernel(&[0.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn brownian_bridge_examples() {
        assert_eq!(brownian_bridge(2, 2, 3.0), 3.0);
        assert_eq!(brownian_bridge(1, 4, 3.0), 0.0);
        assert_eq!(brownian_bridge(2, 4, 3.0), 1.0);
        assert_eq!(brownian_bridge(INFINITY, 4, 3.0), 0.0);
    }

    #[test]
    fn grid_shifts_are_bounded_and_deterministic() {
        let g = sample_binning_grid(3, 0.4, 500, 17).unwrap();
        assert!(g.shifts().iter().all(|&s| (0.0..0.4).contains(&s)));
        assert_eq!(g, sample_binning_grid(3, 0.4, 500, 17).unwrap());
        assert_ne!(g, sample_binning_grid(3, 0.4, 500, 18).unwrap());
        assert!(sample_binning_grid(0, 0.4, 1, 0).is_err());
        assert!(sample_binning_grid(1, 0.0, 1, 0).is_err());
    }

    #[test]
    fn grid_shift_mean_is_half_pitch() {
        let g = sample_binning_grid(10, 2.0, 1000, 5).unwrap();
        let mean = g.shifts().iter().sum::<f64>() / g.shifts().len() as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn binning_self_similarity_is_one() {
        let g = sample_binning_grid(2, 0.3, 16, 1).unwrap();
        for x in [[0.1, 0.9], [-3.2, 7.7], [0.0, 0.0]] {
            let f = binning_features(&x, &g).unwrap();
            assert_eq!(f.nnz(), 16);
            assert!((f.dot(&f) - 1.0).abs() < 1e-12);
        }
        assert!(binning_features(&[0.0], &g).is_err());
    }

    #[test]
    fn binning_separated_points_never_collide() {
        let g = sample_binning_grid(1, 0.5, 64, 3).unwrap();
        let a = binning_features(&[0.1], &g).unwrap();
        let b = binning_features(&[0.6], &g).unwrap();
        assert_eq!(a.dot(&b), 0.0);
    }

    #[test]
    fn binning_is_unbiased_for_the_hat_kernel() {
        let (x, y, delta) = ([0.2], [0.5], 0.8);
        let exact = hat_kernel(&x, &y, delta).unwrap();
        let trials = 400;
        let mean: f64 = (0..trials)
            .map(|s| {
                let g = sample_binning_grid(1, delta, 1, 1000 + s).unwrap();
                binning_features(&x, &g)
                    .unwrap()
                    .dot(&binning_features(&y, &g).unwrap())
            })
            .sum::<f64>()
            / trials as f64;
        assert!((mean - exact).abs() < 0.02, "mean {mean} vs {exact}");
    }

    #[test]
    fn binary_map_of_dirac() {
        let maps = binary_feature_map(&[3, 3, 7], |a, b| dirac(a, b)).unwrap();
        assert_eq!(maps[0], maps[1]);
        assert_eq!(maps[0].dot(&maps[2]), 0.0);
        assert_eq!(maps[2].nnz(), 1);
    }

    #[test]
    fn binary_map_non_reflexive_item_is_empty() {
        // Item 0 is outside the reference set.
        let k = |a: &i32, b: &i32| if *a != 0 && a == b { 1.0 } else { 0.0 };
        let maps = binary_feature_map(&[0, 1, 1], k).unwrap();
        assert!(maps[0].is_empty());
        assert_eq!(maps[1].dot(&maps[2]), 1.0);
    }

    #[test]
    fn binary_map_detects_non_transitive_relation() {
        let k = |a: &i32, b: &i32| if (a - b).abs() <= 1 { 1.0 } else { 0.0 };
        assert!(matches!(
            binary_feature_map(&[0, 1, 2], k),
            Err(Error::InvalidKernel(_))
        ));
    }

    proptest! {
        #[test]
        fn hat_and_rbf_are_symmetric_and_bounded(
            x in prop::collection::vec(-2.0f64..2.0, 3),
            y in prop::collection::vec(-2.0f64..2.0, 3),
            bw in 0.1f64..3.0,
        ) {
            let h = hat_kernel(&x, &y, bw).unwrap();
            prop_assert_eq!(h, hat_kernel(&y, &x, bw).unwrap());
            prop_assert!((0.0..=1.0).contains(&h));
            let r = rbf_kernel(&x, &y, bw).unwrap();
            prop_assert_eq!(r, rbf_kernel(&y, &x, bw).unwrap());
            prop_assert!((0.0..=1.0).contains(&r));
            if x != y {
                prop_assert!(r < 1.0);
            }
        }

        #[test]
        fn rbf_decreases_with_distance(a in 0.0f64..3.0, b in 0.0f64..3.0, sigma in 0.2f64..2.0) {
            let (near, far) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(rbf_kernel(&[0.0], &[near], sigma).unwrap() >= rbf_kernel(&[0.0], &[far], sigma).unwrap());
        }

        #[test]
        fn dirac_is_symmetric(a in 0u32..5, b in 0u32..5) {
            prop_assert_eq!(dirac(a, b), dirac(b, a));
        }
    }
}
