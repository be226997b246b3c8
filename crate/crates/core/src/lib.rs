//! Clustering-based stochastic collocation.
//!
//! Given a sample of (possibly strongly correlated) inputs, cluster it and
//! use the cluster means as collocation nodes, weighted by the fraction of
//! the sample each cluster holds. The crate provides three node builders
//! (k-means++, PCA splitting and random split-and-combine), the partial
//! Monte-Carlo and Gauss-Jacobi tensor-grid baselines, the Genz integrands,
//! reproducible data generators and an experiment runner that writes CSV
//! reports.
//!
//! ```
//! use colloc::{cluster, datagen::DatasetSpec, datagen::DatasetKind, quadrature, RngSpec};
//! use colloc::genz::GenzSpec;
//!
//! let data = DatasetSpec::new(DatasetKind::Polynomial, 3, 2_000)
//!     .generate_benchmark(RngSpec::new(1))
//!     .unwrap();
//! let nodes = cluster::pca_split(&data, &cluster::PcaParams::new(20, f64::EPSILON).unwrap()).unwrap();
//! let rule = nodes.to_rule();
//! let f = GenzSpec::standard(2, 3).unwrap();
//! let estimate = quadrature::apply_rule(&rule, |x| f.eval_unchecked(x)).unwrap();
//! let reference = quadrature::mc_reference(&data, |x| f.eval_unchecked(x)).unwrap();
//! assert!(quadrature::relative_error(estimate, reference).unwrap() < 0.05);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bench;
pub mod cluster;
pub mod datagen;
mod error;
pub mod genz;
pub mod numeric;
pub mod quadrature;
pub mod special;
mod types;

pub use error::{Error, Result};
pub use types::{rescale_unit, Clustering, DataMatrix, QuadratureRule, RngSpec, WEIGHT_SUM_TOL};
