//! Graph kernels in two computation schemes.
//!
//! Every kernel here can be evaluated *implicitly*, pair by pair (usually on
//! a product graph of the two inputs), or *explicitly*, by mapping each graph
//! to a sparse [`FeatureVector`] and taking dot products. Which scheme is
//! faster depends on the data: explicit maps win while the number of distinct
//! features stays small, implicit evaluation wins once labels are diverse
//! enough to keep product graphs sparse.
//!
//! ```
//! use graphkernels::{Graph, walk, base::{VertexKernel, EdgeKernel}};
//!
//! let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
//! let implicit = walk::walk_kernel_implicit(&g, &g, &VertexKernel::DiracLabel, &EdgeKernel::DiracLabel, 2).unwrap();
//! let phi = walk::walk_features_explicit(&g, 2).unwrap();
//! assert_eq!(implicit, phi.dot(&phi));
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod base;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod features;
pub mod generate;
pub mod gram;
pub mod graph;
pub mod paths;
pub mod rng;
pub mod shortest_path;
pub mod subgraph;
pub mod tu;
pub mod walk;
pub mod weighted_vertex;
pub mod wl;

pub use dataset::{scale_attributes, Dataset, DatasetStats};
pub use error::{Error, ErrorClass, Result};
pub use experiment::{compute, KernelKind, KernelSpec, Regime};
pub use features::{FeatureBuilder, FeatureKey, FeatureVector};
pub use gram::{min_eigenvalue_estimate, ExportFormat, GramMatrix};
pub use graph::{Attributes, Graph, GraphBuilder, Label};
pub use paths::{all_pairs_shortest_paths, DistanceMatrix};
pub use rng::PortableRng;
pub use tu::{load_tu_dataset, write_tu_dataset};
