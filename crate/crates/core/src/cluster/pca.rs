use crate::error::{invalid, Result};
use crate::types::{Clustering, DataMatrix};

use super::split::WorkCluster;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaParams {
    pub k_max: usize,
    /// Variance threshold; `f64::EPSILON` effectively always runs to `k_max`.
    pub alpha: f64,
}

impl PcaParams {
    pub fn new(k_max: usize, alpha: f64) -> Result<Self> {
        let params = PcaParams { k_max, alpha };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(invalid("PCA needs k_max >= 1"));
        }
        if !(self.alpha >= 0.0) {
            return Err(invalid("PCA variance threshold must be non-negative"));
        }
        Ok(())
    }
}

/// Why the divisive loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcaStop {
    MaxClusters,
    Threshold,
    /// The widest cluster had no spread left to cut.
    SplitFailure,
}

#[derive(Debug, Clone)]
pub struct PcaOutcome {
    pub clustering: Clustering,
    pub stop: PcaStop,
}

/// Divisive clustering: repeatedly cut the cluster with the largest
/// `SOS_k / n_k` through its mean, normal to its top principal component.
pub fn pca_split(data: &DataMatrix, params: &PcaParams) -> Result<Clustering> {
    pca_split_report(data, params).map(|o| o.clustering)
}

pub fn pca_split_report(data: &DataMatrix, params: &PcaParams) -> Result<PcaOutcome> {
    params.validate()?;
    let n = data.n_rows() as f64;
    let threshold = (data.n_cols() as f64 * params.alpha * (n - 1.0) / n).sqrt();

    let mut clusters = vec![WorkCluster::from_members(data, (0..data.n_rows()).collect())];
    let stop = loop {
        if clusters.len() >= params.k_max {
            break PcaStop::MaxClusters;
        }
        let (widest, radius_sq) = widest_cluster(&clusters);
        if radius_sq.sqrt() < threshold {
            break PcaStop::Threshold;
        }
        match clusters[widest].split(data) {
            Some((pos, neg)) => {
                clusters[widest] = pos;
                clusters.push(neg);
            }
            None => break PcaStop::SplitFailure,
        }
    };

    let mut labels = vec![0usize; data.n_rows()];
    for (c, cluster) in clusters.iter().enumerate() {
        for &i in &cluster.members {
            labels[i] = c;
        }
    }
    Ok(PcaOutcome {
        clustering: Clustering::from_assignment(data, &labels)?,
        stop,
    })
}

/// Index and value of the largest squared average radius, lowest index on ties.
pub(crate) fn widest_cluster(clusters: &[WorkCluster]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (c, cluster) in clusters.iter().enumerate() {
        let r = cluster.mean_sq_radius();
        if r > best.1 {
            best = (c, r);
        }
    }
    best
}
