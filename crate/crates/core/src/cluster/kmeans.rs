use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::numeric::{assign_nearest, sq_dist};
use crate::types::{Clustering, DataMatrix, RngSpec};

pub const LLOYD_MAX_ITER: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KmeParams {
    pub k_max: usize,
    /// Number of independent restarts; the lowest-SOS run wins.
    pub r: usize,
}

impl KmeParams {
    pub fn new(k_max: usize, r: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(invalid("k-means needs k_max >= 1"));
        }
        if r == 0 {
            return Err(invalid("k-means needs at least one restart"));
        }
        Ok(KmeParams { k_max, r })
    }
}

#[derive(Debug, Clone)]
pub struct KmeansRun {
    pub clustering: Clustering,
    pub sos: f64,
    /// Assigned SOS after every centre update.
    pub iteration_sos: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct KmeansReport {
    pub runs: Vec<KmeansRun>,
    pub best: usize,
}

impl KmeansReport {
    pub fn best(&self) -> &KmeansRun {
        &self.runs[self.best]
    }
}

/// Best of `r` k-means++ seeded Lloyd runs.
pub fn kmeans_pp(data: &DataMatrix, params: &KmeParams, rng: RngSpec) -> Result<Clustering> {
    kmeans_pp_report(data, params, rng).map(|r| r.best().clustering.clone())
}

/// Every restart runs on its own derived stream, so the restarts can run in
/// parallel without changing the result.
pub fn kmeans_pp_report(data: &DataMatrix, params: &KmeParams, rng: RngSpec) -> Result<KmeansReport> {
    if params.k_max > data.n_rows() {
        return Err(invalid(format!(
            "k_max = {} exceeds N = {}",
            params.k_max,
            data.n_rows()
        )));
    }
    let runs: Vec<KmeansRun> = (0..params.r)
        .into_par_iter()
        .map(|run| single_run(data, params.k_max, rng.derive(&[run as u64])))
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, run)| {
            if run.sos < acc.1 {
                (i, run.sos)
            } else {
                acc
            }
        })
        .0;
    Ok(KmeansReport { runs, best })
}

fn single_run(data: &DataMatrix, k: usize, rng: RngSpec) -> Result<KmeansRun> {
    let dim = data.n_cols();
    let mut centers = seed_plus_plus(data, k, rng);
    let mut labels: Vec<usize> = Vec::new();
    let mut iteration_sos = Vec::new();
    let mut converged = false;

    for _ in 0..LLOYD_MAX_ITER {
        let new_labels: Vec<usize> = assign_nearest(data, &centers)
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        if new_labels == labels {
            converged = true;
            break;
        }
        labels = new_labels;
        centers = update_centers(data, &mut labels, k, dim);
        let sos = data
            .rows()
            .zip(&labels)
            .map(|(row, &c)| sq_dist(row, &centers[c * dim..(c + 1) * dim]))
            .sum();
        iteration_sos.push(sos);
    }

    let clustering = Clustering::from_assignment(data, &labels)?;
    let sos = clustering.assigned_sos(data);
    Ok(KmeansRun {
        clustering,
        sos,
        iteration_sos,
        converged,
    })
}

/// First centre uniform, each further centre drawn with probability
/// proportional to the squared distance to the nearest chosen centre.
fn seed_plus_plus(data: &DataMatrix, k: usize, rng: RngSpec) -> Vec<f64> {
    let n = data.n_rows();
    let mut rng = rng.rng();
    let first = rng.random_range(0..n);
    let mut centers = data.row(first).to_vec();
    let mut d2: Vec<f64> = data.rows().map(|row| sq_dist(row, data.row(first))).collect();

    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    chosen = Some(i);
                    break;
                }
            }
            // Rounding can leave the target just past the last partial sum.
            chosen.unwrap_or_else(|| d2.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            rng.random_range(0..n)
        };
        let c = data.row(pick);
        centers.extend_from_slice(c);
        d2.par_iter_mut()
            .zip(data.values().par_chunks_exact(data.n_cols()))
            .for_each(|(d, row)| *d = d.min(sq_dist(row, c)));
    }
    centers
}

/// Means of the labelled rows. An empty cluster takes over the row of the
/// largest cluster that lies farthest from that cluster's mean.
fn update_centers(data: &DataMatrix, labels: &mut [usize], k: usize, dim: usize) -> Vec<f64> {
    loop {
        let (centers, sizes) = means(data, labels, k, dim);
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return centers;
        };
        let largest = sizes
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (c, &s)| if s > acc.1 { (c, s) } else { acc })
            .0;
        if sizes[largest] < 2 {
            return centers;
        }
        let center = &centers[largest * dim..(largest + 1) * dim];
        let mut far = (usize::MAX, f64::NEG_INFINITY);
        for (i, row) in data.rows().enumerate() {
            if labels[i] == largest {
                let d = sq_dist(row, center);
                if d > far.1 {
                    far = (i, d);
                }
            }
        }
        labels[far.0] = empty;
    }
}

fn means(data: &DataMatrix, labels: &[usize], k: usize, dim: usize) -> (Vec<f64>, Vec<usize>) {
    let mut sums = vec![0.0; k * dim];
    let mut sizes = vec![0usize; k];
    for (row, &c) in data.rows().zip(labels) {
        sizes[c] += 1;
        for (s, &x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row) {
            *s += x;
        }
    }
    for (c, &s) in sizes.iter().enumerate() {
        if s > 0 {
            sums[c * dim..(c + 1) * dim]
                .iter_mut()
                .for_each(|v| *v /= s as f64);
        }
    }
    (sums, sizes)
}
