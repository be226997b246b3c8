//! Reproducible generators for the benchmark data sets.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::{beta_inv_cdf, normal_cdf};
use crate::types::{rescale_unit, DataMatrix, RngSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    CorrelatedGaussian,
    IidBeta,
    Polynomial,
    CopulaBeta,
}

impl DatasetKind {
    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::CorrelatedGaussian => "correlated-gaussian",
            DatasetKind::IidBeta => "iid-beta",
            DatasetKind::Polynomial => "polynomial",
            DatasetKind::CopulaBeta => "copula-beta",
        }
    }
}

impl std::str::FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlated-gaussian" | "gaussian" => Ok(DatasetKind::CorrelatedGaussian),
            "iid-beta" | "beta" => Ok(DatasetKind::IidBeta),
            "polynomial" => Ok(DatasetKind::Polynomial),
            "copula-beta" | "copula" => Ok(DatasetKind::CopulaBeta),
            other => Err(invalid(format!("unknown dataset kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub p: usize,
    pub n: usize,
    #[serde(default)]
    pub rho: f64,
    #[serde(default = "default_sigma")]
    pub sigma_noise: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

fn default_sigma() -> f64 {
    0.5
}
fn default_alpha() -> f64 {
    2.0
}
fn default_beta() -> f64 {
    5.0
}

impl DatasetSpec {
    /// Spec with the default shape parameters: Beta(2, 5), noise 0.5, rho 0.
    pub fn new(kind: DatasetKind, p: usize, n: usize) -> Self {
        DatasetSpec {
            kind,
            p,
            n,
            rho: 0.0,
            sigma_noise: default_sigma(),
            alpha: default_alpha(),
            beta: default_beta(),
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(invalid("dataset needs n >= 1 and p >= 1"));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(invalid("Beta shape parameters must be positive"));
        }
        if !(self.rho.abs() < 1.0) {
            return Err(invalid("copula correlation must satisfy |rho| < 1"));
        }
        if !(self.sigma_noise >= 0.0) {
            return Err(invalid("noise scale must be non-negative"));
        }
        if self.kind == DatasetKind::CopulaBeta && self.p != 2 {
            return Err(invalid("the copula-beta set is two-dimensional"));
        }
        Ok(())
    }

    /// Raw draws, before any rescaling.
    pub fn generate(&self, rng: RngSpec) -> Result<DataMatrix> {
        self.validate()?;
        match self.kind {
            DatasetKind::CorrelatedGaussian => gen_correlated_gaussian(self.p, self.n, rng),
            DatasetKind::IidBeta => gen_iid_beta(self.p, self.n, self.alpha, self.beta, rng),
            DatasetKind::Polynomial => gen_polynomial(self.p, self.n, self.sigma_noise, rng),
            DatasetKind::CopulaBeta => {
                gen_copula_beta(self.n, self.rho, self.alpha, self.beta, rng)
            }
        }
    }

    /// Draws mapped to the unit cube the way the benchmarks consume them.
    /// The copula set is left on its Beta support so that Gauss-Jacobi
    /// grids and exact Beta references stay comparable.
    pub fn generate_benchmark(&self, rng: RngSpec) -> Result<DataMatrix> {
        let raw = self.generate(rng)?;
        match self.kind {
            DatasetKind::CopulaBeta => Ok(raw),
            _ => rescale_unit(&raw),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            DatasetKind::CopulaBeta => format!("copula-beta(rho={})", self.rho),
            kind => kind.name().to_string(),
        }
    }
}

/// `Sigma_ij = 1 / (|i - j| + 1)`.
pub fn gaussian_correlation(p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |i, j| 1.0 / (i.abs_diff(j) as f64 + 1.0))
}

/// `L` with `L L^T = cov`, built from the symmetric eigendecomposition.
pub fn symmetric_factor(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(cov.clone());
    let max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 1e-12 * max.abs().max(1.0)) {
        return Err(Error::FactorizationFailure { min_eigenvalue: min });
    }
    let mut factor = eig.eigenvectors;
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.sqrt();
        factor.column_mut(j).iter_mut().for_each(|v| *v *= s);
    }
    Ok(factor)
}

pub fn gen_correlated_gaussian(p: usize, n: usize, rng: RngSpec) -> Result<DataMatrix> {
    let factor = symmetric_factor(&gaussian_correlation(p))?;
    let mut rng = rng.rng();
    let mut values = Vec::with_capacity(n * p);
    let mut z = vec![0.0; p];
    for _ in 0..n {
        z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        for i in 0..p {
            let mut acc = 0.0;
            for (j, &zj) in z.iter().enumerate() {
                acc += factor[(i, j)] * zj;
            }
            values.push(acc);
        }
    }
    DataMatrix::new(n, p, values)
}

pub fn gen_iid_beta(p: usize, n: usize, alpha: f64, beta: f64, rng: RngSpec) -> Result<DataMatrix> {
    let dist = Beta::new(alpha, beta).map_err(|e| invalid(e.to_string()))?;
    let mut rng = rng.rng();
    let values = (0..n * p).map(|_| dist.sample(&mut rng)).collect();
    DataMatrix::new(n, p, values)
}

/// `(x1, x1^2, ..., x1^p)` before noise.
pub fn polynomial_row(x1: f64, p: usize) -> Vec<f64> {
    (1..=p as i32).map(|j| x1.powi(j)).collect()
}

pub fn gen_polynomial(p: usize, n: usize, sigma_noise: f64, rng: RngSpec) -> Result<DataMatrix> {
    if !(sigma_noise >= 0.0) {
        return Err(invalid("noise scale must be non-negative"));
    }
    let base = Uniform::new_inclusive(-2.0, 2.0).map_err(|e| invalid(e.to_string()))?;
    let mut rng = rng.rng();
    let mut values = Vec::with_capacity(n * p);
    for _ in 0..n {
        let x1: f64 = base.sample(&mut rng);
        for v in polynomial_row(x1, p) {
            let noise: f64 = rng.sample(StandardNormal);
            values.push(v + sigma_noise * noise);
        }
    }
    DataMatrix::new(n, p, values)
}

/// Two-dimensional Gaussian copula with Beta marginals.
pub fn gen_copula_beta(n: usize, rho: f64, alpha: f64, beta: f64, rng: RngSpec) -> Result<DataMatrix> {
    if !(rho.abs() < 1.0) {
        return Err(invalid("copula correlation must satisfy |rho| < 1"));
    }
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(invalid("Beta shape parameters must be positive"));
    }
    let mut rng = rng.rng();
    let mix = (1.0 - rho * rho).sqrt();
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        for z in [z1, rho * z1 + mix * z2] {
            values.push(beta_inv_cdf(alpha, beta, normal_cdf(z)));
        }
    }
    DataMatrix::new(n, 2, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr(data: &DataMatrix, a: usize, b: usize) -> f64 {
        let n = data.n_rows() as f64;
        let ma = data.column(a).sum::<f64>() / n;
        let mb = data.column(b).sum::<f64>() / n;
        let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
        for row in data.rows() {
            let (da, db) = (row[a] - ma, row[b] - mb);
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        sab / (saa * sbb).sqrt()
    }

    #[test]
    fn correlation_matrix_entries() {
        let s = gaussian_correlation(3);
        assert_eq!(s[(0, 1)], 0.5);
        assert_eq!(s[(0, 2)], 1.0 / 3.0);
        assert_eq!(s[(2, 2)], 1.0);
        let l = symmetric_factor(&s).unwrap();
        let back = &l * l.transpose();
        assert!((back - s).abs().max() < 1e-13);
    }

    #[test]
    fn factorization_flags_singular() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            symmetric_factor(&s),
            Err(Error::FactorizationFailure { .. })
        ));
    }

    #[test]
    fn gaussian_sample_correlation() {
        let data = gen_correlated_gaussian(3, 100_000, RngSpec::new(1)).unwrap();
        assert!((corr(&data, 0, 2) - 1.0 / 3.0).abs() < 0.02);
        assert!((corr(&data, 0, 1) - 0.5).abs() < 0.02);
        let one = gen_correlated_gaussian(1, 50_000, RngSpec::new(2)).unwrap();
        let mean = one.column_means()[0];
        assert!(mean.abs() < 0.02);
    }

    #[test]
    fn beta_moments() {
        let data = gen_iid_beta(2, 100_000, 2.0, 5.0, RngSpec::new(3)).unwrap();
        assert!(data.values().iter().all(|v| (0.0..=1.0).contains(v)));
        for m in data.column_means() {
            assert!((m - 2.0 / 7.0).abs() < 0.01);
        }
        let uni = gen_iid_beta(1, 100_000, 1.0, 1.0, RngSpec::new(4)).unwrap();
        let mean = uni.column_means()[0];
        let var = uni.column(0).map(|x| (x - mean).powi(2)).sum::<f64>() / 100_000.0;
        assert!((var - 1.0 / 12.0).abs() < 0.005);
    }

    #[test]
    fn polynomial_rows() {
        assert_eq!(polynomial_row(2.0, 2), vec![2.0, 4.0]);
        assert_eq!(polynomial_row(-1.0, 3), vec![-1.0, 1.0, -1.0]);
        let data = gen_polynomial(3, 100_000, 0.5, RngSpec::new(5)).unwrap();
        assert!(corr(&data, 0, 1).abs() < 0.2);
        assert!(corr(&data, 0, 2) > 0.5);
        let clean = gen_polynomial(3, 10, 0.0, RngSpec::new(5)).unwrap();
        for row in clean.rows() {
            assert_eq!(row[1], row[0] * row[0]);
        }
    }

    #[test]
    fn copula_marginals_and_correlation() {
        let indep = gen_copula_beta(100_000, 0.0, 2.0, 5.0, RngSpec::new(6)).unwrap();
        assert!(corr(&indep, 0, 1).abs() < 0.02);
        let strong = gen_copula_beta(100_000, 0.8, 2.0, 5.0, RngSpec::new(7)).unwrap();
        let c = corr(&strong, 0, 1);
        assert!(c > 0.6 && c < 0.85, "corr {c}");
        for m in strong.column_means() {
            assert!((m - 2.0 / 7.0).abs() < 0.01);
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = DatasetSpec::new(DatasetKind::CopulaBeta, 3, 10);
        assert!(spec.validate().is_err());
        spec.p = 2;
        spec.rho = 1.0;
        assert!(spec.validate().is_err());
        assert!(DatasetSpec::new(DatasetKind::IidBeta, 0, 10).validate().is_err());
    }

    #[test]
    fn benchmark_sets_are_unit_scaled() {
        for kind in [
            DatasetKind::CorrelatedGaussian,
            DatasetKind::IidBeta,
            DatasetKind::Polynomial,
        ] {
            let d = DatasetSpec::new(kind, 3, 500)
                .generate_benchmark(RngSpec::new(8))
                .unwrap();
            assert!(d.is_unit_scaled());
        }
    }
}
