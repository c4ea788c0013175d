//! Kernel matrix assembly, normalization, diagnostics and export.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{param, Error, Result};
use crate::features::FeatureVector;

/// Wall-clock breakdown of a Gram matrix computation.
///
/// For the implicit scheme `map_seconds` covers per-graph preprocessing (if
/// any) and `pair_seconds` the kernel evaluations; for the explicit scheme
/// they are the feature map and dot product phases.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timing {
    pub regime: String,
    pub graphs: usize,
    pub pairs: usize,
    pub map_seconds: f64,
    pub pair_seconds: f64,
    pub total_seconds: f64,
}

/// Symmetric kernel matrix over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    values: Vec<f64>,
    class_labels: Vec<i64>,
    descriptor: String,
    timing: Timing,
}

impl GramMatrix {
    /// Builds a matrix from row-major values; `values` must be symmetric.
    pub fn from_values(
        n: usize,
        values: Vec<f64>,
        class_labels: Vec<i64>,
        descriptor: impl Into<String>,
    ) -> Result<Self> {
        if values.len() != n * n || class_labels.len() != n {
            return Err(param(format!(
                "Gram matrix of order {n} needs {} values and {n} labels",
                n * n
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                if values[i * n + j] != values[j * n + i] {
                    return Err(param(format!("Gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(GramMatrix {
            n,
            values,
            class_labels,
            descriptor: descriptor.into(),
            timing: Timing::default(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class_labels(&self) -> &[i64] {
        &self.class_labels
    }

    /// Kernel name and parameters.
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn timing(&self) -> &Timing {
        &self.timing
    }

    pub fn set_map_seconds(&mut self, seconds: f64) {
        self.timing.total_seconds += seconds - self.timing.map_seconds;
        self.timing.map_seconds = seconds;
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_discrepancy(&self, other: &GramMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(param(format!(
                "cannot compare Gram matrices of order {} and {}",
                self.n, other.n
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// `K'_ij = K_ij / sqrt(K_ii K_jj)`; rows and columns with a zero diagonal
    /// entry become zero.
    pub fn normalize(&self) -> GramMatrix {
        let n = self.n;
        let diag: Vec<f64> = (0..n).map(|i| self.get(i, i)).collect();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if diag[i] > 0.0 && diag[j] > 0.0 {
                    values[i * n + j] = if i == j {
                        1.0
                    } else {
                        self.get(i, j) / (diag[i] * diag[j]).sqrt()
                    };
                }
            }
        }
        // Mirror to keep symmetry exact.
        for i in 0..n {
            for j in 0..i {
                values[i * n + j] = values[j * n + i];
            }
        }
        GramMatrix {
            n,
            values,
            class_labels: self.class_labels.clone(),
            descriptor: format!("{} normalized", self.descriptor),
            timing: self.timing.clone(),
        }
    }

    /// Plain CSV, one matrix row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x}")).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    /// Precomputed-kernel format: `<label> 0:<i+1> 1:<K_i1> … n:<K_in>`.
    pub fn to_svm(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            write!(s, "{} 0:{}", self.class_labels[i], i + 1).unwrap();
            for (j, x) in self.row(i).iter().enumerate() {
                write!(s, " {}:{x}", j + 1).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn timing_json(&self) -> String {
        #[derive(Serialize)]
        struct Block<'a> {
            kernel: &'a str,
            #[serde(flatten)]
            timing: &'a Timing,
        }
        serde_json::to_string_pretty(&Block {
            kernel: &self.descriptor,
            timing: &self.timing,
        })
        .expect("timing serializes")
    }

    pub fn write(&self, format: ExportFormat, path: &Path) -> Result<()> {
        let text = match format {
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::SvmPrecomputed => self.to_svm(),
        };
        write_file(path, &text)
    }

    pub fn write_timing(&self, path: &Path) -> Result<()> {
        write_file(path, &(self.timing_json() + "\n"))
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    SvmPrecomputed,
}

/// Reads a matrix written by [`GramMatrix::to_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Load {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|e| Error::Format {
                        path: path.to_path_buf(),
                        line: i + 1,
                        message: format!("{x:?}: {e}"),
                    })
                })
                .collect()
        })
        .collect()
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn assemble(n: usize, pairs: &[(usize, usize)], results: Vec<f64>) -> Vec<f64> {
    let mut values = vec![0.0; n * n];
    for (&(i, j), v) in pairs.iter().zip(results) {
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    values
}

fn check_finite(i: usize, j: usize, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pair {
            i,
            j,
            source: Box::new(Error::Overflow(format!("kernel value {v} is not finite"))),
        })
    }
}

/// Evaluates `kernel(i, j)` on the upper triangle (diagonal included) and
/// mirrors it. With `parallel`, pairs are distributed over the rayon pool;
/// values do not depend on the schedule.
pub fn gram_implicit<F>(ds: &Dataset, descriptor: impl Into<String>, parallel: bool, kernel: F) -> Result<GramMatrix>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    let n = ds.len();
    let pairs = upper_pairs(n);
    let start = Instant::now();
    let eval = |&(i, j): &(usize, usize)| {
        kernel(i, j)
            .map_err(|e| Error::Pair {
                i,
                j,
                source: Box::new(e),
            })
            .and_then(|v| check_finite(i, j, v))
    };
    let results: Vec<f64> = if parallel {
        pairs.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        pairs.iter().map(eval).collect::<Result<_>>()?
    };
    let pair_seconds = start.elapsed().as_secs_f64();
    Ok(GramMatrix {
        n,
        values: assemble(n, &pairs, results),
        class_labels: ds.class_labels().to_vec(),
        descriptor: descriptor.into(),
        timing: Timing {
            regime: "implicit".into(),
            graphs: n,
            pairs: pairs.len(),
            map_seconds: 0.0,
            pair_seconds,
            total_seconds: pair_seconds,
        },
    })
}

/// Computes one feature vector per graph, then all pairwise dot products.
pub fn gram_explicit<F>(ds: &Dataset, descriptor: impl Into<String>, parallel: bool, features: F) -> Result<GramMatrix>
where
    F: Fn(usize) -> Result<FeatureVector> + Sync,
{
    let n = ds.len();
    let start = Instant::now();
    let map = |i: usize| {
        features(i).map_err(|e| Error::Map {
            index: i,
            source: Box::new(e),
        })
    };
    let phi: Vec<FeatureVector> = if parallel {
        (0..n).into_par_iter().map(map).collect::<Result<_>>()?
    } else {
        (0..n).map(map).collect::<Result<_>>()?
    };
    let map_seconds = start.elapsed().as_secs_f64();

    let pairs = upper_pairs(n);
    let start = Instant::now();
    let eval = |&(i, j): &(usize, usize)| check_finite(i, j, phi[i].dot(&phi[j]));
    let results: Vec<f64> = if parallel {
        pairs.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        pairs.iter().map(eval).collect::<Result<_>>()?
    };
    let pair_seconds = start.elapsed().as_secs_f64();
    Ok(GramMatrix {
        n,
        values: assemble(n, &pairs, results),
        class_labels: ds.class_labels().to_vec(),
        descriptor: descriptor.into(),
        timing: Timing {
            regime: "explicit".into(),
            graphs: n,
            pairs: pairs.len(),
            map_seconds,
            pair_seconds,
            total_seconds: map_seconds + pair_seconds,
        },
    })
}

/// Result of [`min_eigenvalue_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    /// False if the eigensolver hit its iteration cap; `value` is then the
    /// Gershgorin lower bound.
    pub converged: bool,
}

/// Smallest eigenvalue of a Gram matrix.
///
/// A dense symmetric eigensolver locates the smallest eigenpair; the value is
/// then refined by the Rayleigh quotient of its eigenvector evaluated in
/// compensated arithmetic, whose error is quadratic in the eigenvector error
/// and so is not dominated by rounding at the scale of the largest entry.
pub fn min_eigenvalue_estimate(k: &GramMatrix, tol: f64) -> Result<EigenEstimate> {
    let n = k.order();
    if n == 0 {
        return Err(param("eigenvalue of an empty matrix"));
    }
    if !(tol > 0.0) {
        return Err(param("eigenvalue tolerance must be positive"));
    }
    let m = DMatrix::from_row_slice(n, n, k.values());
    let Some(eig) = m.clone().try_symmetric_eigen(tol.min(f64::EPSILON), 1000 * n.max(10)) else {
        let bound = (0..n)
            .map(|i| k.get(i, i) - (0..n).filter(|&j| j != i).map(|j| k.get(i, j).abs()).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        return Ok(EigenEstimate {
            value: bound,
            converged: false,
        });
    };
    let (idx, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let x: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    let refined = rayleigh_quotient(k, &x);
    Ok(EigenEstimate {
        value: if refined.is_finite() { refined } else { lambda },
        converged: true,
    })
}

/// `xᵀKx / xᵀx` with error-free products and compensated summation.
fn rayleigh_quotient(k: &GramMatrix, x: &[f64]) -> f64 {
    let mut acc = TwoSum::default();
    for i in 0..k.order() {
        let row = k.row(i);
        for j in 0..k.order() {
            let (p, e) = two_prod(row[j], x[j]);
            let (q, f) = two_prod(p, x[i]);
            acc.add(q);
            acc.add(f);
            acc.add(e * x[i]);
        }
    }
    let mut norm = TwoSum::default();
    for &xi in x {
        let (p, e) = two_prod(xi, xi);
        norm.add(p);
        norm.add(e);
    }
    acc.value() / norm.value()
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Neumaier summation.
#[derive(Default)]
struct TwoSum {
    sum: f64,
    carry: f64,
}

impl TwoSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureKey;
    use crate::graph::Graph;

    fn matrix(n: usize, values: Vec<f64>) -> GramMatrix {
        GramMatrix::from_values(n, values, vec![0; n], "test").unwrap()
    }

    fn dataset(n: usize) -> Dataset {
        let graphs = (0..n).map(|i| Graph::from_edges(i + 1, &[]).unwrap()).collect();
        Dataset::new("d", graphs, vec![1; n]).unwrap()
    }

    #[test]
    fn single_graph() {
        let ds = dataset(1);
        let k = gram_implicit(&ds, "k", false, |_, _| Ok(7.0)).unwrap();
        assert_eq!(k.values(), &[7.0]);
    }

    #[test]
    fn implicit_mirrors_upper_triangle() {
        let ds = dataset(4);
        let k = gram_implicit(&ds, "k", true, |i, j| Ok((i * 10 + j) as f64)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k.get(i, j), (i.min(j) * 10 + i.max(j)) as f64);
            }
        }
        assert_eq!(k.timing().pairs, 10);
        assert_eq!(k.timing().regime, "implicit");
    }

    #[test]
    fn pair_failure_names_indices() {
        let ds = dataset(3);
        let err = gram_implicit(&ds, "k", false, |i, j| {
            if (i, j) == (1, 2) {
                Err(Error::Resource("boom".into()))
            } else {
                Ok(1.0)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Pair { i: 1, j: 2, .. }));
        let err = gram_explicit(&ds, "k", false, |i| {
            if i == 2 {
                Err(Error::Resource("big".into()))
            } else {
                Ok(FeatureVector::empty())
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Map { index: 2, .. }));
    }

    #[test]
    fn explicit_examples() {
        let ds = dataset(3);
        let k = gram_explicit(&ds, "k", false, |_| Ok(FeatureVector::empty())).unwrap();
        assert!(k.values().iter().all(|&x| x == 0.0));
        let k = gram_explicit(&ds, "k", true, |i| {
            Ok(FeatureVector::from_entries([(
                FeatureKey::new(1, &[i as i64 % 2]),
                (i + 1) as f64,
            )]))
        })
        .unwrap();
        assert_eq!(k.get(0, 2), 3.0);
        assert_eq!(k.get(1, 1), 4.0);
        assert_eq!(k.get(0, 1), 0.0);
    }

    #[test]
    fn normalization() {
        let k = matrix(3, vec![4.0, 2.0, 0.0, 2.0, 9.0, 0.0, 0.0, 0.0, 0.0]);
        let n = k.normalize();
        assert_eq!(n.get(0, 0), 1.0);
        assert_eq!(n.get(1, 1), 1.0);
        assert_eq!(n.get(0, 1), 2.0 / 6.0);
        assert!(n.row(2).iter().all(|&x| x == 0.0));
        let scaled = matrix(3, k.values().iter().map(|x| x * 5.0).collect()).normalize();
        assert!(n.max_abs_discrepancy(&scaled).unwrap() < 1e-15);
        assert!(n.normalize().max_abs_discrepancy(&n).unwrap() < 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let id = matrix(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let e = min_eigenvalue_estimate(&id, 1e-10).unwrap();
        assert!(e.converged && (e.value - 1.0).abs() < 1e-10);
        let swap = matrix(2, vec![0.0, 1.0, 1.0, 0.0]);
        assert!((min_eigenvalue_estimate(&swap, 1e-10).unwrap().value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn rank_deficient_large_entries_stay_nonnegative() {
        // Rank one with entries around 1e12: rounding in the solver alone
        // produces errors of order 1e-4 here.
        let v: Vec<f64> = (0..12).map(|i| 1.0e6 + 17.0 * i as f64).collect();
        let values = v.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        let k = matrix(12, values);
        let e = min_eigenvalue_estimate(&k, 1e-12).unwrap();
        assert!(e.value >= -1e-8, "{}", e.value);
    }

    #[test]
    fn export_formats() {
        let mut k = matrix(2, vec![1.0, 0.0, 0.0, 1.0]);
        k.class_labels = vec![1, -1];
        assert_eq!(k.to_svm(), "1 0:1 1:1 2:0\n-1 0:2 1:0 2:1\n");
        assert_eq!(k.to_csv(), "1,0\n0,1\n");
    }

    #[test]
    fn csv_round_trip() {
        let k = matrix(2, vec![0.1, 1.0 / 3.0, 1.0 / 3.0, 12345.678]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.csv");
        k.write(ExportFormat::Csv, &path).unwrap();
        let back = read_csv(&path).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[i][j] - k.get(i, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn write_failure_names_path() {
        let k = matrix(1, vec![1.0]);
        let err = k
            .write(ExportFormat::Csv, Path::new("/nonexistent/dir/k.csv"))
            .unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/k.csv"));
    }

    #[test]
    fn timing_block_is_json() {
        let ds = dataset(2);
        let k = gram_explicit(&ds, "walk(l=2)", false, |_| Ok(FeatureVector::empty())).unwrap();
        let v: serde_json::Value = serde_json::from_str(&k.timing_json()).unwrap();
        assert_eq!(v["kernel"], "walk(l=2)");
        assert_eq!(v["regime"], "explicit");
        assert_eq!(v["pairs"], 3);
    }
}
