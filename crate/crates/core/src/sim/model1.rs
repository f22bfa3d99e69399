//! Two-dependence moving average model with a sparse shift in the last group.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Innovation;
use crate::data::{GroupedData, SampleMatrix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Fixed moving-average coefficients, one row per group.
pub const MODEL1_RHO: [[f64; 3]; 3] = [
    [2.1984, 2.5743, 2.1316],
    [2.8147, 2.9058, 2.1270],
    [2.9134, 2.6324, 2.0975],
];

/// Fraction of coordinates carrying the shift.
pub const SPARSITY: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model1Config {
    pub rho: Vec<[f64; 3]>,
    #[serde(default)]
    pub innovation: Innovation,
    pub p: usize,
    pub sizes: Vec<usize>,
    pub theta: f64,
}

impl Model1Config {
    /// Three groups with the fixed coefficients.
    pub fn new(p: usize, sizes: Vec<usize>, theta: f64) -> Self {
        Model1Config {
            rho: MODEL1_RHO.to_vec(),
            innovation: Innovation::StandardNormal,
            p,
            sizes,
            theta,
        }
    }

    pub fn with_innovation(mut self, innovation: Innovation) -> Self {
        self.innovation = innovation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 2 {
            return Err(Error::TooFewGroups {
                required: 2,
                found: self.sizes.len(),
            });
        }
        if self.rho.len() != self.sizes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.sizes.len(),
                found: self.rho.len(),
            });
        }
        if self.rho.iter().flatten().any(|r| !r.is_finite()) {
            return Err(Error::invalid("moving-average coefficients must be finite"));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::invalid(format!(
                "theta must be >= 0, got {}",
                self.theta
            )));
        }
        if shifted_count(self.p) == 0 {
            return Err(Error::invalid(format!(
                "p = {} leaves no shifted coordinate; need p >= 20",
                self.p
            )));
        }
        if let Some((group, &size)) = self.sizes.iter().enumerate().find(|(_, &n)| n < 2) {
            return Err(Error::GroupTooSmall {
                group,
                size,
                required: 2,
            });
        }
        Ok(())
    }

    /// `tr(Sigma_l Sigma_s)` from the banded closed form.
    pub fn trace_matrix(&self) -> Matrix {
        let k = self.rho.len();
        Matrix::from_fn(k, k, |l, s| {
            banded_trace_product(band(self.rho[l]), band(self.rho[s]), self.p)
        })
    }

    pub fn means(&self) -> Result<Vec<Vec<f64>>> {
        let delta = delta_from_theta(self)?;
        let k = self.sizes.len();
        let mut means = vec![vec![0.0; self.p]; k];
        for x in means[k - 1].iter_mut().take(shifted_count(self.p)) {
            *x = delta;
        }
        Ok(means)
    }
}

/// `floor(0.05 p)`.
pub fn shifted_count(p: usize) -> usize {
    (SPARSITY * p as f64 + 1e-9).floor() as usize
}

/// Diagonal, first and second off-diagonal of the MA(2) covariance.
pub fn band(rho: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = rho;
    [a * a + b * b + c * c, a * b + b * c, a * c]
}

/// `tr(AB)` for two symmetric pentadiagonal Toeplitz matrices of order `p`.
pub fn banded_trace_product(a: [f64; 3], b: [f64; 3], p: usize) -> f64 {
    let p = p as f64;
    p * a[0] * b[0]
        + 2.0 * (p - 1.0).max(0.0) * a[1] * b[1]
        + 2.0 * (p - 2.0).max(0.0) * a[2] * b[2]
}

pub fn build_sigma_model1(rho: [f64; 3], p: usize) -> Matrix {
    let coef = band(rho);
    Matrix::from_fn(p, p, |i, j| coef.get(i.abs_diff(j)).copied().unwrap_or(0.0))
}

/// `sqrt((k-1)^2 sum_l tr(Sigma_l^2)/lambda_l^2 + sum_{l!=s} tr(Sigma_l Sigma_s)/(lambda_l lambda_s))`.
pub fn theta_denominator(sizes: &[usize], traces: &Matrix) -> f64 {
    let n: usize = sizes.iter().sum();
    let lam: Vec<f64> = sizes.iter().map(|&s| s as f64 / n as f64).collect();
    let k = sizes.len();
    let km1 = k as f64 - 1.0;
    let mut acc = 0.0;
    for l in 0..k {
        acc += km1 * km1 * traces[(l, l)] / (lam[l] * lam[l]);
        for s in 0..k {
            if s != l {
                acc += traces[(l, s)] / (lam[l] * lam[s]);
            }
        }
    }
    acc.sqrt()
}

/// Standardized signal `sum_l ||mu_l - mu_bar||^2 / theta_denominator`.
pub fn theta_from_means(sizes: &[usize], means: &[Vec<f64>], traces: &Matrix) -> f64 {
    crate::power::average_signal(means) / theta_denominator(sizes, traces)
}

/// Shift size `delta` giving the requested `theta` when only the last group
/// is shifted, on `m = floor(0.05 p)` coordinates. The signal is then
/// `(k-1)/k m delta^2`, so `delta = sqrt(k theta D / ((k-1) m))`.
pub fn delta_from_theta(cfg: &Model1Config) -> Result<f64> {
    cfg.validate()?;
    let k = cfg.sizes.len() as f64;
    let m = shifted_count(cfg.p) as f64;
    let d = theta_denominator(&cfg.sizes, &cfg.trace_matrix());
    Ok((k * cfg.theta * d / ((k - 1.0) * m)).sqrt())
}

#[derive(Clone, Debug)]
pub struct Model1Sampler {
    rho: Vec<[f64; 3]>,
    innovation: Innovation,
    sizes: Vec<usize>,
    pub means: Vec<Vec<f64>>,
}

impl Model1Sampler {
    pub fn new(cfg: &Model1Config) -> Result<Self> {
        Ok(Model1Sampler {
            rho: cfg.rho.clone(),
            innovation: cfg.innovation,
            sizes: cfg.sizes.clone(),
            means: cfg.means()?,
        })
    }

    /// Rows of one group; `p + 2` innovations per row.
    pub fn sample_group<R: Rng + ?Sized>(&self, l: usize, n: usize, rng: &mut R) -> SampleMatrix {
        sample_ma_rows(self.rho[l], &self.means[l], n, self.innovation, rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupedData {
        let groups = self
            .sizes
            .iter()
            .enumerate()
            .map(|(l, &n)| self.sample_group(l, n, rng))
            .collect();
        GroupedData::new(groups).expect("sizes validated at construction")
    }
}

/// `n` rows of `x_j = r1 z_j + r2 z_{j+1} + r3 z_{j+2} + mean_j`.
pub fn sample_ma_rows<R: Rng + ?Sized>(
    rho: [f64; 3],
    mean: &[f64],
    n: usize,
    innovation: Innovation,
    rng: &mut R,
) -> SampleMatrix {
    let p = mean.len();
    let [r1, r2, r3] = rho;
    let mut z = vec![0.0; p + 2];
    let mut out = Matrix::zeros(n, p);
    for i in 0..n {
        innovation.fill(rng, &mut z);
        for (j, x) in out.row_mut(i).iter_mut().enumerate() {
            *x = r1 * z[j] + r2 * z[j + 1] + r3 * z[j + 2] + mean[j];
        }
    }
    SampleMatrix::new(out).expect("finite innovations")
}

pub fn gen_model1<R: Rng + ?Sized>(cfg: &Model1Config, rng: &mut R) -> Result<GroupedData> {
    Ok(Model1Sampler::new(cfg)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::trace_product;

    #[test]
    fn unit_rho_gives_identity() {
        assert_eq!(build_sigma_model1([1.0, 0.0, 0.0], 5), Matrix::identity(5));
    }

    #[test]
    fn ones_rho_bands() {
        let s = build_sigma_model1([1.0, 1.0, 1.0], 4);
        let want = Matrix::from_rows(&[
            [3.0, 2.0, 1.0, 0.0],
            [2.0, 3.0, 2.0, 1.0],
            [1.0, 2.0, 3.0, 2.0],
            [0.0, 1.0, 2.0, 3.0],
        ])
        .unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn banded_trace_matches_dense() {
        for p in [1, 2, 3, 9] {
            let a = build_sigma_model1(MODEL1_RHO[0], p);
            let b = build_sigma_model1(MODEL1_RHO[2], p);
            let dense = trace_product(&a, &b).unwrap();
            let closed = banded_trace_product(band(MODEL1_RHO[0]), band(MODEL1_RHO[2]), p);
            assert!((dense - closed).abs() < 1e-9 * dense, "p = {p}");
        }
    }

    #[test]
    fn zero_theta_zero_delta() {
        let cfg = Model1Config::new(400, vec![10, 10, 80], 0.0);
        assert_eq!(delta_from_theta(&cfg).unwrap(), 0.0);
    }

    #[test]
    fn delta_round_trip() {
        let cfg = Model1Config::new(400, vec![10, 10, 80], 0.005);
        let means = cfg.means().unwrap();
        let theta = theta_from_means(&cfg.sizes, &means, &cfg.trace_matrix());
        assert!((theta - 0.005).abs() < 1e-10 * 0.005);
    }

    #[test]
    fn small_p_rejected() {
        assert!(Model1Config::new(19, vec![5, 5, 5], 0.0)
            .validate()
            .is_err());
        assert!(Model1Config::new(20, vec![5, 5, 5], 0.0).validate().is_ok());
    }
}
