//! Node construction: k-means++, PCA splitting, random split-and-combine,
//! partial Monte-Carlo subsampling and empirical nearest-node weights.

mod kmeans;
mod pca;
mod rsc;
mod split;

pub use kmeans::{kmeans_pp, kmeans_pp_report, KmeParams, KmeansReport, KmeansRun, LLOYD_MAX_ITER};
pub use pca::{pca_split, pca_split_report, PcaOutcome, PcaParams, PcaStop};
pub use rsc::{rsc, rsc_lambda, rsc_traced, RscAction, RscEvent, RscParams, RscTrace};
pub use split::top_principal_component;

use rand::seq::index;

use crate::error::{invalid, Result};
use crate::numeric::assign_nearest;
use crate::types::{Clustering, DataMatrix, QuadratureRule, RngSpec};

/// Within-cluster sum of squares, measuring each row against its nearest center.
pub fn sos(data: &DataMatrix, clustering: &Clustering) -> f64 {
    sos_to_centers(data, clustering.centers())
}

pub(crate) fn sos_to_centers(data: &DataMatrix, centers: &[f64]) -> f64 {
    assign_nearest(data, centers).iter().map(|&(_, d)| d).sum()
}

/// Partial Monte-Carlo: `k_max` distinct rows drawn uniformly, equal weights.
pub fn pmc(data: &DataMatrix, k_max: usize, rng: RngSpec) -> Result<QuadratureRule> {
    let n = data.n_rows();
    if k_max == 0 || k_max > n {
        return Err(invalid(format!("PMC needs 1 <= k_max <= N = {n}, got {k_max}")));
    }
    let mut rng = rng.rng();
    let picks = index::sample(&mut rng, n, k_max);
    let mut nodes = Vec::with_capacity(k_max * data.n_cols());
    for i in picks.iter() {
        nodes.extend_from_slice(data.row(i));
    }
    QuadratureRule::new(nodes, data.n_cols(), vec![1.0 / k_max as f64; k_max])
}

/// Weights as the fraction of rows whose nearest node (lowest index on
/// ties) is each node. Nodes that attract no rows are dropped and the
/// fractions recomputed over the surviving nodes.
pub fn empirical_weights(data: &DataMatrix, nodes: &[f64], dim: usize) -> Result<QuadratureRule> {
    if dim != data.n_cols() {
        return Err(crate::Error::DimensionMismatch {
            expected: data.n_cols(),
            found: dim,
        });
    }
    if nodes.is_empty() || !nodes.len().is_multiple_of(dim) {
        return Err(invalid("empirical weights need at least one complete node"));
    }
    let counts = nearest_counts(data, nodes, dim);
    let kept: Vec<f64> = nodes
        .chunks_exact(dim)
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .flat_map(|(node, _)| node.iter().copied())
        .collect();
    let counts = if kept.len() == nodes.len() {
        counts
    } else {
        nearest_counts(data, &kept, dim)
    };
    let n = data.n_rows() as f64;
    let weights = counts.iter().map(|&c| c as f64 / n).collect();
    QuadratureRule::new(kept, dim, weights)
}

fn nearest_counts(data: &DataMatrix, nodes: &[f64], dim: usize) -> Vec<usize> {
    let mut counts = vec![0usize; nodes.len() / dim];
    for (k, _) in assign_nearest(data, nodes) {
        counts[k] += 1;
    }
    counts
}
