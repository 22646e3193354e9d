//! Structural complexity of requirement and integration graphs.
//!
//! The crate covers
//!
//! * [`graph`] and [`matrix`]: weighted undirected graphs with per-node
//!   component complexity `alpha` and derived interface weights
//!   `sqrt(alpha_i alpha_j)`, plus their adjacency / Laplacian / normalized
//!   Laplacian matrices;
//! * [`spectral`]: the generalized spectral metric
//!   `f(gamma * sum_i g(lambda_i(M) - tr(M)/n))` and its twelve named
//!   instances (GE, LGE, NLGE, NC, LNC, NLNC and their `1/n` variants);
//! * [`structural`]: cyclomatic complexity, density, density delta,
//!   absolute density and load;
//! * [`task`]: molecule-level and integration-level metrics and baselines;
//! * [`extract`]: rule-based three-layer requirements extraction;
//! * [`stats`]: Pearson correlation with Fisher intervals, polynomial OLS with
//!   t-tests, and the one-sample Kolmogorov-Smirnov normality test.
//!
//! ```
//! use reqplex::graph::families::complete;
//! use reqplex::spectral::named_metric;
//!
//! let ge = named_metric(&complete(4), "GE", true).unwrap();
//! assert!((ge - 6.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod extract;
pub mod graph;
pub mod interchange;
pub mod matrix;
pub mod spectral;
pub mod stats;
pub mod structural;
pub mod task;

pub use error::{Error, ErrorKind, Result};
pub use graph::{EdgeWeight, GraphBuilder, Node, NodeKind, WeightedGraph};
pub use matrix::{build_matrix, MatrixKind, SystemMatrix};
pub use spectral::{eigendecompose, evaluate_metric, named_metric, MetricName, MetricSpec, Spectrum};
