//! Shared data model: sample matrices, clusterings, quadrature rules and
//! the seeding contract used by every stochastic operation.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::sq_dist;

/// An `N x p` sample, stored row-major with one observation per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    unit_scaled: bool,
}

impl DataMatrix {
    pub fn new(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(invalid("data matrix needs at least one row and one column"));
        }
        if values.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch {
                expected: n_rows * n_cols,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!(
                "non-finite entry at row {}, column {}",
                pos / n_cols,
                pos % n_cols
            )));
        }
        Ok(DataMatrix {
            n_rows,
            n_cols,
            values,
            unit_scaled: false,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        DataMatrix::new(rows.len(), n_cols, values)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.n_cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(j).step_by(self.n_cols).copied()
    }

    /// True when produced by [`rescale_unit`].
    pub fn is_unit_scaled(&self) -> bool {
        self.unit_scaled
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for row in self.rows() {
            for (s, &x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        let n = self.n_rows as f64;
        sums.iter_mut().for_each(|s| *s /= n);
        sums
    }

    /// Reads the `p=<int>,n=<int>` headed CSV format.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))??;
        let (mut p, mut n) = (None, None);
        for field in header.trim().split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad header value `{field}`")))?;
            match key.trim() {
                "p" => p = Some(value),
                "n" => n = Some(value),
                other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
            }
        }
        let (p, n) = match (p, n) {
            (Some(p), Some(n)) => (p, n),
            _ => return Err(Error::Parse("header must contain p and n".into())),
        };
        let mut values = Vec::with_capacity(p * n);
        let mut rows = 0;
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let before = values.len();
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad number `{field}`", lineno + 2))
                })?;
                values.push(v);
            }
            if values.len() - before != p {
                return Err(Error::Parse(format!(
                    "line {}: expected {p} values, found {}",
                    lineno + 2,
                    values.len() - before
                )));
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse(format!("header says n={n}, found {rows} rows")));
        }
        DataMatrix::new(n, p, values)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p={},n={}", self.n_cols, self.n_rows)?;
        let mut line = String::new();
        for row in self.rows() {
            line.clear();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                write!(line, "{v}").expect("writing to a String");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Maps every column linearly onto `[0, 1]` using its sample range.
pub fn rescale_unit(data: &DataMatrix) -> Result<DataMatrix> {
    let p = data.n_cols;
    let mut lo = vec![f64::INFINITY; p];
    let mut hi = vec![f64::NEG_INFINITY; p];
    for row in data.rows() {
        for j in 0..p {
            lo[j] = lo[j].min(row[j]);
            hi[j] = hi[j].max(row[j]);
        }
    }
    if let Some(column) = (0..p).find(|&j| hi[j] <= lo[j]) {
        return Err(Error::DegenerateColumn { column });
    }
    let values = data
        .values
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            let j = idx % p;
            (x - lo[j]) / (hi[j] - lo[j])
        })
        .collect();
    Ok(DataMatrix {
        n_rows: data.n_rows,
        n_cols: p,
        values,
        unit_scaled: true,
    })
}

/// Seed plus stream id; identical pairs give bit-identical random sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngSpec { stream, ..self }
    }

    /// A sub-stream derived from this spec and a list of coordinates.
    pub fn derive(self, coords: &[u64]) -> Self {
        let mut h = splitmix64(self.stream ^ 0x243f_6a88_85a3_08d3);
        for &c in coords {
            h = splitmix64(h ^ c);
        }
        RngSpec {
            seed: self.seed,
            stream: h,
        }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Assignment of every sample to one of `k` non-empty clusters, with the
/// cluster means as centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    assignment: Vec<usize>,
    centers: Vec<f64>,
    sizes: Vec<usize>,
    dim: usize,
}

impl Clustering {
    /// Builds a clustering from raw labels. Labels that own no rows are
    /// dropped and the rest renumbered in increasing label order.
    pub fn from_assignment(data: &DataMatrix, labels: &[usize]) -> Result<Self> {
        if labels.len() != data.n_rows() {
            return Err(Error::DimensionMismatch {
                expected: data.n_rows(),
                found: labels.len(),
            });
        }
        let max_label = labels.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0usize; max_label + 1];
        for &l in labels {
            counts[l] += 1;
        }
        let mut remap = vec![usize::MAX; max_label + 1];
        let mut k = 0;
        for (l, &c) in counts.iter().enumerate() {
            if c > 0 {
                remap[l] = k;
                k += 1;
            }
        }
        let assignment: Vec<usize> = labels.iter().map(|&l| remap[l]).collect();
        let dim = data.n_cols();
        let mut sums = vec![0.0; k * dim];
        let mut sizes = vec![0usize; k];
        for (row, &c) in data.rows().zip(&assignment) {
            sizes[c] += 1;
            for (s, &x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row) {
                *s += x;
            }
        }
        for (c, &n) in sizes.iter().enumerate() {
            sums[c * dim..(c + 1) * dim]
                .iter_mut()
                .for_each(|s| *s /= n as f64);
        }
        Ok(Clustering {
            assignment,
            centers: sums,
            sizes,
            dim,
        })
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn center(&self, c: usize) -> &[f64] {
        &self.centers[c * self.dim..(c + 1) * self.dim]
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Sum of squared distances of each row to the center of its own cluster.
    pub fn assigned_sos(&self, data: &DataMatrix) -> f64 {
        data.rows()
            .zip(&self.assignment)
            .map(|(row, &c)| sq_dist(row, self.center(c)))
            .sum()
    }

    /// Centers as nodes, cluster fractions as weights.
    pub fn to_rule(&self) -> QuadratureRule {
        let n: usize = self.sizes.iter().sum();
        let weights = self.sizes.iter().map(|&s| s as f64 / n as f64).collect();
        QuadratureRule {
            nodes: self.centers.clone(),
            dim: self.dim,
            weights,
        }
    }
}

/// Nodes in `R^p` with strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RuleJson", try_from = "RuleJson")]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    dim: usize,
    weights: Vec<f64>,
}

pub const WEIGHT_SUM_TOL: f64 = 1e-12;

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, dim: usize, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 || weights.is_empty() {
            return Err(invalid("a rule needs at least one node of positive dimension"));
        }
        if nodes.len() != weights.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: weights.len() * dim,
                found: nodes.len(),
            });
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("weight {w} is not strictly positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        if nodes.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite node coordinate"));
        }
        Ok(QuadratureRule {
            nodes,
            dim,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.nodes[k * self.dim..(k + 1) * self.dim]
    }

    pub fn nodes(&self) -> std::slice::ChunksExact<'_, f64> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn flat_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl From<QuadratureRule> for RuleJson {
    fn from(rule: QuadratureRule) -> Self {
        RuleJson {
            nodes: rule.nodes().map(<[f64]>::to_vec).collect(),
            weights: rule.weights,
        }
    }
}

impl TryFrom<RuleJson> for QuadratureRule {
    type Error = Error;

    fn try_from(json: RuleJson) -> Result<Self> {
        let dim = json.nodes.first().map_or(0, Vec::len);
        if let Some(bad) = json.nodes.iter().find(|n| n.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        QuadratureRule::new(json.nodes.concat(), dim, json.weights)
    }
}
