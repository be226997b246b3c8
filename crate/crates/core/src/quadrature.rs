//! Quadrature rules and their evaluation: sample Monte-Carlo references,
//! Gauss-Jacobi rules for Beta weights, tensor grids and the credulous
//! (empirically weighted) grid.

use rayon::prelude::*;

use crate::cluster::empirical_weights;
use crate::error::{invalid, Error, Result};
use crate::genz::{in_unit_box, GenzSpec};
use crate::numeric::neumaier_sum;
use crate::types::{DataMatrix, QuadratureRule};

pub const DEFAULT_GRID_CAP: usize = 1_000_000;

/// Mean of `u` over every row of the sample.
pub fn mc_reference<F>(data: &DataMatrix, u: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let values: Vec<f64> = data
        .values()
        .par_chunks_exact(data.n_cols())
        .map(&u)
        .collect();
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIntegrand { index });
    }
    Ok(neumaier_sum(values) / data.n_rows() as f64)
}

/// `sum_k w_k u(z_k)`.
pub fn apply_rule<F>(rule: &QuadratureRule, u: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut terms = Vec::with_capacity(rule.len());
    for (index, (node, &w)) in rule.nodes().zip(rule.weights()).enumerate() {
        let v = u(node);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { index });
        }
        terms.push(w * v);
    }
    Ok(neumaier_sum(terms))
}

pub fn relative_error(estimate: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((estimate - reference).abs() / reference.abs())
}

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `n`-point Gauss rule on `[0, 1]` for the Beta(`alpha`, `beta`) density,
/// from the eigen-decomposition of the Jacobi matrix (Golub-Welsch).
pub fn gauss_jacobi_1d(n: usize, alpha: f64, beta: f64) -> Result<Rule1d> {
    if n == 0 {
        return Err(invalid("a Gauss rule needs n >= 1"));
    }
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(invalid("Beta shape parameters must be positive"));
    }
    // Density x^(alpha-1) (1-x)^(beta-1) on [0,1] is the Jacobi weight
    // (1-t)^A (1+t)^B on [-1,1] with A = beta-1, B = alpha-1, t = 2x-1.
    let (a, b) = (beta - 1.0, alpha - 1.0);
    let mut diag = Vec::with_capacity(n);
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let alpha_k = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(0.5 * (1.0 + alpha_k));
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + a + b;
            let beta_m = if m == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * m * (m + a) * (m + b) * (m + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off[k] = 0.5 * beta_m.sqrt();
        }
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first.into_iter().map(|z| z * z)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total: f64 = neumaier_sum(pairs.iter().map(|p| p.1));
    Ok(Rule1d {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    })
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `diag` receives the
/// eigenvalues; `first` (initially `e_1`) receives the first component of
/// every normalised eigenvector. `off[i]` couples rows `i` and `i + 1`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(invalid("tridiagonal eigen-solve did not converge"));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorGridSpec {
    /// `2^level + 1` nodes per dimension.
    pub level: u32,
    pub p: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl TensorGridSpec {
    pub fn nodes_per_dim(&self) -> usize {
        (1usize << self.level) + 1
    }

    pub fn total_nodes(&self) -> u128 {
        (self.nodes_per_dim() as u128).saturating_pow(self.p as u32)
    }
}

pub fn tensor_grid(spec: &TensorGridSpec) -> Result<QuadratureRule> {
    tensor_grid_capped(spec, DEFAULT_GRID_CAP)
}

/// Full tensor product of the one-dimensional Gauss-Jacobi rule; weights are
/// products of the one-dimensional weights. The last coordinate varies fastest.
pub fn tensor_grid_capped(spec: &TensorGridSpec, cap: usize) -> Result<QuadratureRule> {
    if spec.level == 0 || spec.level > 30 || spec.p == 0 {
        return Err(invalid("tensor grid needs level in 1..=30 and p >= 1"));
    }
    let nodes = spec.total_nodes();
    if nodes > cap as u128 {
        return Err(Error::GridTooLarge { nodes, cap });
    }
    let rule = gauss_jacobi_1d(spec.nodes_per_dim(), spec.alpha, spec.beta)?;
    let rules = vec![rule; spec.p];
    tensor_product(&rules)
}

pub fn tensor_product(rules: &[Rule1d]) -> Result<QuadratureRule> {
    let dim = rules.len();
    let total: usize = rules.iter().map(|r| r.nodes.len()).product();
    let mut nodes = Vec::with_capacity(total * dim);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut w = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            nodes.push(rules[d].nodes[i]);
            w *= rules[d].weights[i];
        }
        weights.push(w);
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < rules[d].nodes.len() {
                break;
            }
            idx[d] = 0;
        }
    }
    // Products of normalised weights sum to one only up to rounding.
    let sum = neumaier_sum(weights.iter().copied());
    weights.iter_mut().for_each(|w| *w /= sum);
    QuadratureRule::new(nodes, dim, weights)
}

/// Tensor-grid nodes weighted by the fraction of the sample nearest to each;
/// nodes that attract no samples are removed.
pub fn credulous_sc(data: &DataMatrix, spec: &TensorGridSpec) -> Result<QuadratureRule> {
    if spec.p != data.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: data.n_cols(),
            found: spec.p,
        });
    }
    if !data.is_unit_scaled() && !data.rows().all(in_unit_box) {
        return Err(invalid("credulous collocation expects data on the unit cube"));
    }
    let grid = tensor_grid(spec)?;
    empirical_weights(data, grid.flat_nodes(), spec.p)
}

const REFERENCE_ORDER: usize = 64;

/// Expectation of a Genz function under independent Beta(`alpha`, `beta`)
/// coordinates, computed from one-dimensional Gauss-Jacobi integrals
/// (split at kinks and discontinuities). The corner peak is not separable
/// and is integrated on a dense tensor grid, which limits it to `p <= 3`.
pub fn exact_beta_reference(f: &GenzSpec, alpha: f64, beta: f64) -> Result<f64> {
    f.validate()?;
    let p = f.dim();
    let dens = BetaIntegrator::new(alpha, beta)?;
    let (a, u) = (&f.a, &f.u);
    let value = match f.id {
        1 => {
            let (mut re, mut im) = ((2.0 * std::f64::consts::PI * u[0]).cos(), (2.0 * std::f64::consts::PI * u[0]).sin());
            for &ai in a {
                let c = dens.integrate(0.0, 1.0, |x| (ai * x).cos())?;
                let s = dens.integrate(0.0, 1.0, |x| (ai * x).sin())?;
                (re, im) = (re * c - im * s, re * s + im * c);
            }
            re
        }
        2 => (0..p)
            .map(|i| dens.integrate(0.0, 1.0, |x| (-(a[i] * a[i]) * (x - u[i]).powi(2)).exp()))
            .product::<Result<f64>>()?,
        3 => {
            let mut prod = 1.0;
            for i in 0..p {
                let g = |x: f64| (-a[i] * (x - u[i]).abs()).exp();
                let c = u[i];
                prod *= if c > 0.0 && c < 1.0 {
                    dens.integrate(0.0, c, g)? + dens.integrate(c, 1.0, g)?
                } else {
                    dens.integrate(0.0, 1.0, g)?
                };
            }
            prod
        }
        4 => (0..p)
            .map(|i| dens.integrate(0.0, 1.0, |x| 1.0 / (a[i].powi(-2) + (x - u[i]).powi(2))))
            .product::<Result<f64>>()?,
        5 => {
            if p > 3 {
                return Err(invalid("exact Beta reference for the corner peak supports p <= 3"));
            }
            let rule = gauss_jacobi_1d(REFERENCE_ORDER, alpha, beta)?;
            let grid = tensor_product(&vec![rule; p])?;
            apply_rule(&grid, |x| f.eval_unchecked(x))?
        }
        _ => {
            let mut prod = 1.0;
            for i in 0..p {
                let g = |x: f64| (a[i] * x).exp();
                prod *= if i < 2 {
                    let c = u[i];
                    if c <= 0.0 {
                        0.0
                    } else if c >= 1.0 {
                        dens.integrate(0.0, 1.0, g)?
                    } else {
                        dens.integrate(0.0, c, g)?
                    }
                } else {
                    dens.integrate(0.0, 1.0, g)?
                };
            }
            prod
        }
    };
    Ok(value)
}

/// Integrals of smooth functions against the Beta density over `[0, c]`,
/// `[c, 1]` or `[0, 1]`, with the endpoint singularities absorbed into
/// Gauss-Jacobi weights.
struct BetaIntegrator {
    alpha: f64,
    beta: f64,
    ln_norm: f64,
    full: Rule1d,
    left: Rule1d,
    right: Rule1d,
}

impl BetaIntegrator {
    fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(BetaIntegrator {
            alpha,
            beta,
            ln_norm: statrs::function::beta::ln_beta(alpha, beta),
            full: gauss_jacobi_1d(REFERENCE_ORDER, alpha, beta)?,
            left: gauss_jacobi_1d(REFERENCE_ORDER, alpha, 1.0)?,
            right: gauss_jacobi_1d(REFERENCE_ORDER, 1.0, beta)?,
        })
    }

    fn integrate<G: Fn(f64) -> f64>(&self, lo: f64, hi: f64, g: G) -> Result<f64> {
        let (alpha, beta) = (self.alpha, self.beta);
        let sum = |rule: &Rule1d, h: &dyn Fn(f64) -> f64| {
            neumaier_sum(rule.nodes.iter().zip(&rule.weights).map(|(&t, &w)| w * h(t)))
        };
        if lo == 0.0 && hi == 1.0 {
            return Ok(sum(&self.full, &|x| g(x)));
        }
        if lo == 0.0 && hi > 0.0 && hi < 1.0 {
            // x = c t, t ~ Beta(alpha, 1).
            let c = hi;
            let scale = (alpha * c.ln() - self.ln_norm).exp() / alpha;
            return Ok(scale * sum(&self.left, &|t| g(c * t) * (1.0 - c * t).powf(beta - 1.0)));
        }
        if hi == 1.0 && lo > 0.0 && lo < 1.0 {
            // x = c + (1 - c) s, s ~ Beta(1, beta).
            let c = lo;
            let scale = (beta * (1.0 - c).ln() - self.ln_norm).exp() / beta;
            return Ok(scale
                * sum(&self.right, &|s| {
                    let x = c + (1.0 - c) * s;
                    g(x) * x.powf(alpha - 1.0)
                }));
        }
        Err(invalid(format!("unsupported integration range [{lo}, {hi}]")))
    }
}
