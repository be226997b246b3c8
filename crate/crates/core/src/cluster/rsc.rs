use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::numeric::{assign_nearest, sq_dist};
use crate::types::{Clustering, DataMatrix, RngSpec};

use super::pca::widest_cluster;
use super::split::{merged_center, WorkCluster};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RscParams {
    pub k_max: usize,
    /// Number of discrete time steps `M`.
    pub m: usize,
    /// Decay rate of the split probability. Irrelevant (and infinite) when
    /// `k_max == 2`, since every step is then forced.
    pub lambda: f64,
}

impl RscParams {
    /// Parameters with `lambda` calibrated by [`rsc_lambda`].
    pub fn new(k_max: usize, m: usize) -> Result<Self> {
        if m < 4 {
            return Err(invalid("RSC needs m >= 4"));
        }
        if k_max < 2 {
            return Err(invalid("RSC needs k_max >= 2"));
        }
        let lambda = if k_max == 2 {
            f64::INFINITY
        } else {
            rsc_lambda(k_max, m)?
        };
        Ok(RscParams { k_max, m, lambda })
    }
}

/// Left side of the calibration equation, `(exp(-3L) - exp(-yL)) / L`,
/// written to stay accurate as `L -> 0`.
fn expected_growth(lambda: f64, y: f64) -> f64 {
    (-3.0 * lambda).exp() * -(-(y - 3.0) * lambda).exp_m1() / lambda
}

/// Rate `L > 0` such that the expected net number of splits between steps
/// 3 and `m / 2` equals `k_max - 2`:
/// `(exp(-3L) - exp(-(m/2) L)) / L = k_max - 2`.
pub fn rsc_lambda(k_max: usize, m: usize) -> Result<f64> {
    let y = m as f64 / 2.0;
    let target = k_max as f64 - 2.0;
    if k_max <= 2 || target >= y - 3.0 {
        return Err(Error::NoRoot { k_max, m });
    }
    // The left side decreases from y - 3 (L -> 0) to 0 (L -> inf).
    let mut lo = 1e-12;
    let mut hi = 1.0;
    while expected_growth(hi, y) > target {
        lo = hi;
        hi *= 2.0;
    }
    if expected_growth(lo, y) < target {
        return Err(Error::NoRoot { k_max, m });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if expected_growth(mid, y) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    // Newton polish on g(L) = growth(L) - target.
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..3 {
        let g = expected_growth(lambda, y) - target;
        let dg = (y * (-y * lambda).exp() - 3.0 * (-3.0 * lambda).exp()) / lambda
            - expected_growth(lambda, y) / lambda;
        if dg == 0.0 || !dg.is_finite() {
            break;
        }
        let next = lambda - g / dg;
        if !(next > lo * 0.5 && next < hi * 2.0) {
            break;
        }
        lambda = next;
    }
    Ok(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RscAction {
    Split,
    Combine,
    /// A split was drawn but no cluster had spread left to cut.
    SkippedSplit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RscEvent {
    pub t: usize,
    pub k_before: usize,
    pub k_after: usize,
    pub p_split: f64,
    pub action: RscAction,
}

#[derive(Debug, Clone)]
pub struct RscTrace {
    pub events: Vec<RscEvent>,
    /// Assigned SOS of the annealed partition, before the final nearest-centre pass.
    pub sos_before_reassign: f64,
    /// Assigned SOS of the returned clustering.
    pub sos_after_reassign: f64,
}

pub fn rsc(data: &DataMatrix, params: &RscParams, rng: RngSpec) -> Result<Clustering> {
    rsc_traced(data, params, rng).map(|(c, _)| c)
}

/// Random split-and-combine clustering with the step-by-step trace.
pub fn rsc_traced(data: &DataMatrix, params: &RscParams, rng: RngSpec) -> Result<(Clustering, RscTrace)> {
    if params.k_max < 2 || params.k_max > data.n_rows() {
        return Err(invalid(format!(
            "RSC needs 2 <= k_max <= N = {}, got {}",
            data.n_rows(),
            params.k_max
        )));
    }
    if params.m < 4 || !(params.lambda > 0.0) {
        return Err(invalid("RSC needs m >= 4 and lambda > 0"));
    }
    let mut rng = rng.rng();
    let mut clusters = vec![WorkCluster::from_members(data, (0..data.n_rows()).collect())];
    let mut events = Vec::with_capacity(params.m);

    for t in 2..=params.m {
        let k = clusters.len();
        let p_split = if t == 2 || k == 1 {
            1.0
        } else if k >= params.k_max {
            0.0
        } else {
            0.5 * (1.0 + (-params.lambda * t as f64).exp())
        };
        let draw: f64 = rng.random();
        let action = if draw < p_split {
            split_widest(data, &mut clusters)
        } else {
            combine_closest(&mut clusters);
            RscAction::Combine
        };
        events.push(RscEvent {
            t,
            k_before: k,
            k_after: clusters.len(),
            p_split,
            action,
        });
    }

    let sos_before_reassign: f64 = clusters.iter().map(|c| c.sos).sum();
    let centers: Vec<f64> = clusters.iter().flat_map(|c| c.center.iter().copied()).collect();
    let labels: Vec<usize> = assign_nearest(data, &centers)
        .into_iter()
        .map(|(c, _)| c)
        .collect();
    let clustering = Clustering::from_assignment(data, &labels)?;
    let sos_after_reassign = clustering.assigned_sos(data);
    Ok((
        clustering,
        RscTrace {
            events,
            sos_before_reassign,
            sos_after_reassign,
        },
    ))
}

fn split_widest(data: &DataMatrix, clusters: &mut Vec<WorkCluster>) -> RscAction {
    let (widest, _) = widest_cluster(clusters);
    match clusters[widest].split(data) {
        Some((pos, neg)) => {
            clusters[widest] = pos;
            clusters.push(neg);
            RscAction::Split
        }
        None => RscAction::SkippedSplit,
    }
}

/// Merges the pair whose merged centre lies closest to the farther of its
/// two parent centres.
fn combine_closest(clusters: &mut Vec<WorkCluster>) {
    let mut best = (0, 1, f64::INFINITY);
    for a in 0..clusters.len() {
        for b in a + 1..clusters.len() {
            let (ca, cb) = (&clusters[a], &clusters[b]);
            let merged = merged_center(&ca.center, ca.len() as f64, &cb.center, cb.len() as f64);
            let reach = sq_dist(&merged, &ca.center).max(sq_dist(&merged, &cb.center));
            if reach < best.2 {
                best = (a, b, reach);
            }
        }
    }
    let (a, b, _) = best;
    let other = clusters.remove(b);
    let first = std::mem::replace(&mut clusters[a], WorkCluster {
        members: Vec::new(),
        center: Vec::new(),
        sos: 0.0,
    });
    clusters[a] = first.merge(other);
}
