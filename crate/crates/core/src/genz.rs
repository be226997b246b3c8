//! The six Genz test integrands on `[0, 1]^p`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Exponent convention for the corner peak.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CornerPeakForm {
    /// `(1 + a.x)^(-p + 1)`.
    #[default]
    AsPrinted,
    /// Genz's original `(1 + a.x)^(-(p + 1))`.
    Classical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenzSpec {
    pub id: u8,
    pub a: Vec<f64>,
    pub u: Vec<f64>,
    #[serde(default)]
    pub corner: CornerPeakForm,
}

impl GenzSpec {
    /// `a = 1`, `u = 1/2`, except `u_1 = 0` for the oscillatory function.
    pub fn standard(id: u8, p: usize) -> Result<Self> {
        if !(1..=6).contains(&id) {
            return Err(invalid(format!("Genz id must be in 1..=6, got {id}")));
        }
        if p == 0 {
            return Err(invalid("Genz functions need p >= 1"));
        }
        let mut u = vec![0.5; p];
        if id == 1 {
            u[0] = 0.0;
        }
        Ok(GenzSpec {
            id,
            a: vec![1.0; p],
            u,
            corner: CornerPeakForm::AsPrinted,
        })
    }

    pub fn with_params(id: u8, a: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let spec = GenzSpec {
            id,
            a,
            u,
            corner: CornerPeakForm::AsPrinted,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=6).contains(&self.id) {
            return Err(invalid(format!("Genz id must be in 1..=6, got {}", self.id)));
        }
        if self.a.is_empty() {
            return Err(invalid("Genz functions need p >= 1"));
        }
        if self.u.len() != self.a.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.len(),
                found: self.u.len(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn name(&self) -> &'static str {
        match self.id {
            1 => "oscillatory",
            2 => "gaussian-peak",
            3 => "c0",
            4 => "product-peak",
            5 => "corner-peak",
            _ => "discontinuous",
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.a.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.len(),
                found: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the dimension check; `x.len()` must equal `dim()`.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let (a, u) = (&self.a, &self.u);
        let p = a.len();
        match self.id {
            1 => {
                let s: f64 = a.iter().zip(x).map(|(a, x)| a * x).sum();
                (2.0 * std::f64::consts::PI * u[0] + s).cos()
            }
            2 => {
                let s: f64 = (0..p).map(|i| a[i] * a[i] * (x[i] - u[i]).powi(2)).sum();
                (-s).exp()
            }
            3 => {
                let s: f64 = (0..p).map(|i| a[i] * (x[i] - u[i]).abs()).sum();
                (-s).exp()
            }
            4 => (0..p)
                .map(|i| 1.0 / (a[i].powi(-2) + (x[i] - u[i]).powi(2)))
                .product(),
            5 => {
                let s: f64 = a.iter().zip(x).map(|(a, x)| a * x).sum();
                let exponent = match self.corner {
                    CornerPeakForm::AsPrinted => -(p as f64) + 1.0,
                    CornerPeakForm::Classical => -(p as f64 + 1.0),
                };
                (1.0 + s).powf(exponent)
            }
            _ => {
                if x[0] > u[0] || (p >= 2 && x[1] > u[1]) {
                    0.0
                } else {
                    a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>().exp()
                }
            }
        }
    }
}

/// True when `x` lies in the unit cube.
pub fn in_unit_box(x: &[f64]) -> bool {
    x.iter().all(|v| (0.0..=1.0).contains(v))
}
