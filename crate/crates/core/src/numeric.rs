//! Small numerical helpers shared across modules.

use rayon::prelude::*;

use crate::types::DataMatrix;

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the closest center (flat `K x p` layout); ties go to the lowest index.
#[inline]
pub fn nearest(point: &[f64], centers: &[f64]) -> (usize, f64) {
    let dim = point.len();
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.chunks_exact(dim).enumerate() {
        let d = sq_dist(point, c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Nearest center for every row. Each row is independent, so the parallel
/// scan is bit-identical to a serial one.
pub fn assign_nearest(data: &DataMatrix, centers: &[f64]) -> Vec<(usize, f64)> {
    let dim = data.n_cols();
    data.values()
        .par_chunks_exact(dim)
        .map(|row| nearest(row, centers))
        .collect()
}

/// Compensated (Neumaier) summation in input order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
