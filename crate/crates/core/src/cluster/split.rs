//! Cluster bookkeeping shared by the divisive methods.

use crate::numeric::sq_dist;
use crate::types::DataMatrix;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 2000;

/// A cluster under construction: member rows, mean and sum of squares.
#[derive(Debug, Clone)]
pub(crate) struct WorkCluster {
    pub members: Vec<usize>,
    pub center: Vec<f64>,
    pub sos: f64,
}

impl WorkCluster {
    pub fn from_members(data: &DataMatrix, members: Vec<usize>) -> Self {
        let dim = data.n_cols();
        let mut center = vec![0.0; dim];
        for &i in &members {
            for (c, &x) in center.iter_mut().zip(data.row(i)) {
                *c += x;
            }
        }
        let n = members.len() as f64;
        center.iter_mut().for_each(|c| *c /= n);
        let sos = members.iter().map(|&i| sq_dist(data.row(i), &center)).sum();
        WorkCluster {
            members,
            center,
            sos,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// `SOS_k / n_k`, the squared average radius.
    pub fn mean_sq_radius(&self) -> f64 {
        self.sos / self.members.len() as f64
    }

    /// Cuts the cluster by the hyperplane through its mean normal to the top
    /// principal component. Rows on the plane go to the positive side.
    /// `None` when the cluster has no spread to cut along.
    pub fn split(&self, data: &DataMatrix) -> Option<(WorkCluster, WorkCluster)> {
        if self.members.len() < 2 || self.sos <= 0.0 {
            return None;
        }
        let cov = self.covariance(data);
        let axis = top_principal_component(&cov, data.n_cols())?;
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for &i in &self.members {
            let proj: f64 = data
                .row(i)
                .iter()
                .zip(&self.center)
                .zip(&axis)
                .map(|((x, c), v)| (x - c) * v)
                .sum();
            if proj >= 0.0 {
                pos.push(i);
            } else {
                neg.push(i);
            }
        }
        if pos.is_empty() || neg.is_empty() {
            return None;
        }
        Some((
            WorkCluster::from_members(data, pos),
            WorkCluster::from_members(data, neg),
        ))
    }

    /// Covariance with `1/n` normalisation, row-major `p x p`.
    fn covariance(&self, data: &DataMatrix) -> Vec<f64> {
        let dim = data.n_cols();
        let mut cov = vec![0.0; dim * dim];
        let mut d = vec![0.0; dim];
        for &i in &self.members {
            for ((dj, &x), &c) in d.iter_mut().zip(data.row(i)).zip(&self.center) {
                *dj = x - c;
            }
            for a in 0..dim {
                let da = d[a];
                let row = &mut cov[a * dim..(a + 1) * dim];
                for b in a..dim {
                    row[b] += da * d[b];
                }
            }
        }
        let n = self.members.len() as f64;
        for a in 0..dim {
            for b in a..dim {
                let v = cov[a * dim + b] / n;
                cov[a * dim + b] = v;
                cov[b * dim + a] = v;
            }
        }
        cov
    }

    pub fn merge(self, other: WorkCluster) -> WorkCluster {
        let (na, nb) = (self.len() as f64, other.len() as f64);
        let gap = sq_dist(&self.center, &other.center);
        let center = merged_center(&self.center, na, &other.center, nb);
        let sos = self.sos + other.sos + na * nb / (na + nb) * gap;
        let mut members = self.members;
        members.extend(other.members);
        WorkCluster {
            members,
            center,
            sos,
        }
    }
}

pub(crate) fn merged_center(a: &[f64], na: f64, b: &[f64], nb: f64) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(x, y)| (na * x + nb * y) / (na + nb))
        .collect()
}

/// Leading eigenvector of a symmetric positive semi-definite `dim x dim`
/// matrix by power iteration from the normalised all-ones vector. If that
/// start lies in the null space, the coordinate axes are tried in order of
/// decreasing diagonal entry. `None` for the zero matrix.
pub fn top_principal_component(cov: &[f64], dim: usize) -> Option<Vec<f64>> {
    let trace: f64 = (0..dim).map(|i| cov[i * dim + i]).sum();
    if !(trace > 0.0) {
        return None;
    }
    let null_tol = 1e-12 * trace;

    let ones = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut axes: Vec<usize> = (0..dim).collect();
    axes.sort_by(|&a, &b| cov[b * dim + b].total_cmp(&cov[a * dim + a]).then(a.cmp(&b)));
    let starts = std::iter::once(ones).chain(axes.into_iter().map(|j| {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        e
    }));

    for start in starts {
        if let Some(v) = power_iterate(cov, dim, start, null_tol) {
            return Some(v);
        }
    }
    None
}

fn power_iterate(cov: &[f64], dim: usize, mut v: Vec<f64>, null_tol: f64) -> Option<Vec<f64>> {
    let mut w = vec![0.0; dim];
    for iter in 0..POWER_MAX_ITER {
        for (a, wa) in w.iter_mut().enumerate() {
            *wa = cov[a * dim..(a + 1) * dim]
                .iter()
                .zip(&v)
                .map(|(c, x)| c * x)
                .sum();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if iter == 0 && norm <= null_tol {
            return None;
        }
        if norm == 0.0 {
            return None;
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let change = sq_dist(&w, &v).sqrt();
        std::mem::swap(&mut v, &mut w);
        if change < POWER_TOL {
            break;
        }
    }
    Some(v)
}
