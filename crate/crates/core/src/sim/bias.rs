//! Bias of the two `tr(Sigma^2)` estimators on moving-average data.

use serde::{Deserialize, Serialize};

use super::model1::{band, banded_trace_product, sample_ma_rows, MODEL1_RHO};
use super::monte_carlo::replicate;
use super::Innovation;
use crate::data::MIN_SPLIT_SIZE;
use crate::error::{Error, Result};
use crate::gram::GramStats;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasConfig {
    pub p: usize,
    pub n1: usize,
    pub replications: usize,
    pub seed: u64,
    pub rho: [f64; 3],
    #[serde(default)]
    pub innovation: Innovation,
    /// Alternative denominator reported next to the exact trace.
    #[serde(default)]
    pub reference_trace: Option<f64>,
}

impl BiasConfig {
    /// First-group coefficients, Gaussian innovations.
    pub fn new(p: usize, n1: usize, replications: usize, seed: u64) -> Self {
        BiasConfig {
            p,
            n1,
            replications,
            seed,
            rho: MODEL1_RHO[0],
            innovation: Innovation::StandardNormal,
            reference_trace: None,
        }
    }

    pub fn exact_trace(&self) -> f64 {
        banded_trace_product(band(self.rho), band(self.rho), self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub mean: f64,
    /// Sample standard deviation.
    pub sd: f64,
}

impl RatioSummary {
    fn of(xs: impl Iterator<Item = f64> + Clone) -> Self {
        let n = xs.clone().count() as f64;
        let mean = xs.clone().sum::<f64>() / n;
        let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        RatioSummary {
            mean,
            sd: var.sqrt(),
        }
    }

    fn rescale(self, c: f64) -> Self {
        RatioSummary {
            mean: self.mean * c,
            sd: self.sd * c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasStudyResult {
    pub p: usize,
    pub n1: usize,
    pub replications: usize,
    pub seed: u64,
    pub exact_trace: f64,
    /// Split-half estimate over the exact trace.
    pub split: RatioSummary,
    /// Bias-corrected plug-in over the exact trace.
    pub plug_in: RatioSummary,
    pub reference_trace: Option<f64>,
    pub split_vs_reference: Option<RatioSummary>,
    pub plug_in_vs_reference: Option<RatioSummary>,
}

pub fn estimator_bias_study(cfg: &BiasConfig) -> Result<BiasStudyResult> {
    if cfg.n1 < MIN_SPLIT_SIZE {
        return Err(Error::GroupTooSmall {
            group: 0,
            size: cfg.n1,
            required: MIN_SPLIT_SIZE,
        });
    }
    if cfg.replications < 2 {
        return Err(Error::invalid("bias study needs at least 2 replications"));
    }
    if cfg.p == 0 {
        return Err(Error::invalid("p must be positive"));
    }
    if let Some(r) = cfg.reference_trace {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "reference trace must be positive, got {r}"
            )));
        }
    }
    let exact = cfg.exact_trace();
    let mean = vec![0.0; cfg.p];
    let pairs: Vec<(f64, f64)> = replicate(cfg.seed, cfg.replications, |rng, _| {
        let x = sample_ma_rows(cfg.rho, &mean, cfg.n1, cfg.innovation, rng);
        let g = GramStats::from_groups(std::slice::from_ref(&x));
        let split = g.split_trace(0).expect("size checked");
        let plug = g.bs_trace(0).expect("size checked");
        (split / exact, plug / exact)
    });
    let split = RatioSummary::of(pairs.iter().map(|p| p.0));
    let plug_in = RatioSummary::of(pairs.iter().map(|p| p.1));
    let rel = cfg.reference_trace.map(|r| exact / r);
    Ok(BiasStudyResult {
        p: cfg.p,
        n1: cfg.n1,
        replications: cfg.replications,
        seed: cfg.seed,
        exact_trace: exact,
        split,
        plug_in,
        reference_trace: cfg.reference_trace,
        split_vs_reference: rel.map(|c| split.rescale(c)),
        plug_in_vs_reference: rel.map(|c| plug_in.rescale(c)),
    })
}
