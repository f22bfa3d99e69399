//! Factor model `X = Gamma_l Z + mu_l` with `Gamma_l^2 = W_l Psi_l W_l`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{matrix_sqrt_psd, min_eigenvalue};
use super::Innovation;
use crate::data::{GroupedData, SampleMatrix};
use crate::error::{Error, Result};
use crate::matrix::{gemm, Matrix};

pub const MODEL2_B: [f64; 3] = [2.0, 1.0, 3.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model2Config {
    pub b: Vec<f64>,
    #[serde(default)]
    pub innovation: Innovation,
    pub p: usize,
    pub sizes: Vec<usize>,
    /// Upper end of the uniform law for the mean entries.
    pub a: f64,
    /// Seed of the one-off draw of the mean vector.
    pub mean_seed: u64,
}

impl Model2Config {
    pub fn new(p: usize, sizes: Vec<usize>, a: f64, mean_seed: u64) -> Self {
        Model2Config {
            b: MODEL2_B.to_vec(),
            innovation: Innovation::StandardNormal,
            p,
            sizes,
            a,
            mean_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() != 3 || self.b.len() != 3 {
            return Err(Error::invalid(format!(
                "model 2 has three groups, got {} sizes and {} b values",
                self.sizes.len(),
                self.b.len()
            )));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::invalid(format!("a must be >= 0, got {}", self.a)));
        }
        if self.p == 0 {
            return Err(Error::invalid("p must be positive"));
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

    /// `mu_1 = 0`, `mu_2 = u`, `mu_3 = -u` with `u_i = (-1)^i v_i`,
    /// `v_i ~ U(0, a)`.
    pub fn means(&self) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.mean_seed);
        let u: Vec<f64> = (1..=self.p)
            .map(|i| {
                let v = self.a * rng.random::<f64>();
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let neg = u.iter().map(|x| -x).collect();
        vec![vec![0.0; self.p], u, neg]
    }
}

/// `Psi_l` with `psi_jj = 1`, `psi_jk = (-1)^{j+k} (0.05 b)^{|j-k|^0.1}`.
pub fn build_psi(b: f64, p: usize) -> Matrix {
    let base = 0.05 * b;
    Matrix::from_fn(p, p, |j, k| {
        if j == k {
            1.0
        } else {
            let d = j.abs_diff(k);
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            sign * base.powf((d as f64).powf(0.1))
        }
    })
}

/// `w_lj = l - (j-1)/p` with one-based `l` and `j`.
pub fn weights(group: usize, p: usize) -> Vec<f64> {
    (0..p)
        .map(|j| (group + 1) as f64 - j as f64 / p as f64)
        .collect()
}

/// `Sigma_l = W_l Psi_l W_l` for the zero-based group index `l`.
pub fn build_sigma_model2(cfg: &Model2Config, l: usize) -> Result<Matrix> {
    let b = *cfg.b.get(l).ok_or_else(|| {
        Error::invalid(format!(
            "group index {l} out of range for {} groups",
            cfg.b.len()
        ))
    })?;
    let psi = build_psi(b, cfg.p);
    let min = min_eigenvalue(&psi)?;
    if min < -1e-8 {
        return Err(Error::NotPositiveSemidefinite(min));
    }
    let w = weights(l, cfg.p);
    Ok(Matrix::from_fn(cfg.p, cfg.p, |i, j| {
        w[i] * psi[(i, j)] * w[j]
    }))
}

#[derive(Clone, Debug)]
pub struct Model2Sampler {
    innovation: Innovation,
    sizes: Vec<usize>,
    /// Symmetric square roots of the covariances.
    factors: Vec<Matrix>,
    pub means: Vec<Vec<f64>>,
}

impl Model2Sampler {
    pub fn new(cfg: &Model2Config) -> Result<Self> {
        cfg.validate()?;
        let factors = (0..cfg.sizes.len())
            .map(|l| matrix_sqrt_psd(&build_sigma_model2(cfg, l)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Model2Sampler {
            innovation: cfg.innovation,
            sizes: cfg.sizes.clone(),
            factors,
            means: cfg.means(),
        })
    }

    pub fn factor(&self, l: usize) -> &Matrix {
        &self.factors[l]
    }

    /// Rows `z^T Gamma + mu^T`; `Gamma` is symmetric.
    pub fn sample_group<R: Rng + ?Sized>(&self, l: usize, n: usize, rng: &mut R) -> SampleMatrix {
        let gamma = &self.factors[l];
        let p = gamma.rows();
        let mut z = vec![0.0; n * p];
        self.innovation.fill(rng, &mut z);
        let mut x = vec![0.0; n * p];
        gemm(n, p, p, &z, gamma.as_slice(), &mut x);
        for row in x.chunks_exact_mut(p) {
            for (v, m) in row.iter_mut().zip(&self.means[l]) {
                *v += m;
            }
        }
        SampleMatrix::new(Matrix::from_vec(n, p, x).expect("buffer sized n*p"))
            .expect("finite innovations")
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

pub fn gen_model2<R: Rng + ?Sized>(cfg: &Model2Config, rng: &mut R) -> Result<GroupedData> {
    Ok(Model2Sampler::new(cfg)?.sample(rng))
}
