//! Simulation models, Monte Carlo engine and the trace-estimator bias study.

pub mod bias;
pub mod config;
pub mod linalg;
pub mod model1;
pub mod model2;
pub mod monte_carlo;
pub mod presets;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::GroupedData;
use crate::error::{Error, Result};

pub use bias::{estimator_bias_study, BiasConfig, BiasStudyResult, RatioSummary};
pub use config::{parse_config, render_config};
pub use linalg::matrix_sqrt_psd;
pub use model1::{build_sigma_model1, delta_from_theta, gen_model1, Model1Config};
pub use model2::{build_sigma_model2, gen_model2, Model2Config};
pub use monte_carlo::{
    replicate, rng_for, run_monte_carlo, MethodRate, MonteCarloResult, SimConfig,
};
pub use presets::{parse_preset, Preset};

/// Unit-variance innovation law.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Innovation {
    #[default]
    #[serde(rename = "normal")]
    StandardNormal,
    /// `(chi2(4) - 4) / sqrt(8)`.
    #[serde(rename = "chisq4")]
    CenteredChiSq4,
}

impl Innovation {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Innovation::StandardNormal => rng.sample(StandardNormal),
            Innovation::CenteredChiSq4 => {
                // chi2(4) is twice the sum of two unit exponentials
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                (2.0 * (e1 + e2) - 4.0) / 8f64.sqrt()
            }
        }
    }

    pub fn fill<R: Rng + ?Sized>(self, rng: &mut R, out: &mut [f64]) {
        for x in out {
            *x = self.sample(rng);
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Innovation::StandardNormal => "normal",
            Innovation::CenteredChiSq4 => "chisq4",
        }
    }
}

impl std::str::FromStr for Innovation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" | "gaussian" | "standard_normal" => Ok(Innovation::StandardNormal),
            "chisq4" | "chi2" | "centered_chisq4" => Ok(Innovation::CenteredChiSq4),
            other => Err(Error::invalid(format!("unknown innovation `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelConfig {
    Model1(Model1Config),
    Model2(Model2Config),
}

impl ModelConfig {
    pub fn sizes(&self) -> &[usize] {
        match self {
            ModelConfig::Model1(c) => &c.sizes,
            ModelConfig::Model2(c) => &c.sizes,
        }
    }

    pub fn p(&self) -> usize {
        match self {
            ModelConfig::Model1(c) => c.p,
            ModelConfig::Model2(c) => c.p,
        }
    }

    /// Precomputes everything shared across replications.
    pub fn sampler(&self) -> Result<Sampler> {
        Ok(match self {
            ModelConfig::Model1(c) => Sampler::Model1(model1::Model1Sampler::new(c)?),
            ModelConfig::Model2(c) => Sampler::Model2(model2::Model2Sampler::new(c)?),
        })
    }
}

/// A model with its means and covariance factors already built.
#[derive(Clone, Debug)]
pub enum Sampler {
    Model1(model1::Model1Sampler),
    Model2(model2::Model2Sampler),
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupedData {
        match self {
            Sampler::Model1(s) => s.sample(rng),
            Sampler::Model2(s) => s.sample(rng),
        }
    }

    pub fn means(&self) -> &[Vec<f64>] {
        match self {
            Sampler::Model1(s) => &s.means,
            Sampler::Model2(s) => &s.means,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn innovations_have_unit_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for law in [Innovation::StandardNormal, Innovation::CenteredChiSq4] {
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
            assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "{law:?} mean {mean}");
            assert!((var - 1.0).abs() < 0.02, "{law:?} var {var}");
        }
    }

    #[test]
    fn innovation_parsing() {
        assert_eq!(
            "chisq4".parse::<Innovation>().unwrap(),
            Innovation::CenteredChiSq4
        );
        assert!("cauchy".parse::<Innovation>().is_err());
    }
}
