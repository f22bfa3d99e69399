//! Monte Carlo checks of first and second moments against closed forms.

use hdbf_core::sim::model1::{
    band, banded_trace_product, build_sigma_model1, sample_ma_rows, Model1Sampler, MODEL1_RHO,
};
use hdbf_core::sim::{replicate, Model1Config};
use hdbf_core::stats::{oracle_expected_t, oracle_var_t, Prepared};
use hdbf_core::{Method, VarianceMethod};

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}

fn check_t_moments(theta: f64, seed: u64) {
    let reps = 20_000;
    let cfg = Model1Config::new(24, vec![6, 9, 15], theta);
    let sampler = Model1Sampler::new(&cfg).unwrap();
    let covs: Vec<_> = MODEL1_RHO
        .iter()
        .map(|&r| build_sigma_model1(r, cfg.p))
        .collect();
    let want_mean = oracle_expected_t(&sampler.means, &cfg.sizes).unwrap();
    let want_var = oracle_var_t(&sampler.means, &cfg.sizes, &covs).unwrap();
    let ts = replicate(seed, reps, |rng, _| {
        Prepared::new(&sampler.sample(rng)).unwrap().statistic_t()
    });
    let (m, v) = mean_var(&ts);
    let se = (v / reps as f64).sqrt();
    assert!(
        (m - want_mean).abs() < 3.0 * se,
        "mean {m} vs {want_mean} (se {se})"
    );
    assert!(
        (v / want_var - 1.0).abs() < 0.05,
        "variance {v} vs {want_var}"
    );
}

#[test]
fn null_moments_of_t() {
    check_t_moments(0.0, 101);
}

#[test]
fn alternative_moments_of_t() {
    check_t_moments(0.4, 102);
}

#[test]
fn trace_estimators_are_unbiased() {
    let reps = 20_000;
    let (p, n) = (20, 12);
    let rho = MODEL1_RHO[1];
    let exact = banded_trace_product(band(rho), band(rho), p);
    let mean = vec![0.0; p];
    let pairs = replicate(103, reps, |rng, _| {
        let x = sample_ma_rows(rho, &mean, n, Default::default(), rng);
        (
            hdbf_core::stats::tr_sigma2_split(&x).unwrap(),
            hdbf_core::stats::tr_sigma2_bs(&x).unwrap(),
        )
    });
    for (name, xs) in [
        ("split", pairs.iter().map(|p| p.0).collect::<Vec<_>>()),
        ("plug-in", pairs.iter().map(|p| p.1).collect()),
    ] {
        let (m, v) = mean_var(&xs);
        let se = (v / reps as f64).sqrt();
        assert!(
            (m - exact).abs() < 3.0 * se,
            "{name}: {m} vs {exact} (se {se})"
        );
    }
}

#[test]
fn variance_estimates_track_truth() {
    let reps = 400;
    let cfg = Model1Config::new(200, vec![20, 30, 50], 0.0);
    let sampler = Model1Sampler::new(&cfg).unwrap();
    let covs: Vec<_> = MODEL1_RHO
        .iter()
        .map(|&r| build_sigma_model1(r, cfg.p))
        .collect();
    let truth = oracle_var_t(&sampler.means, &cfg.sizes, &covs)
        .unwrap()
        .sqrt();
    let ratios = replicate(104, reps, |rng, _| {
        let prep = Prepared::new(&sampler.sample(rng)).unwrap();
        [VarianceMethod::SplitHalf, VarianceMethod::BaiSaranadasa]
            .map(|m| prep.sigma_hat(m).unwrap().value.sqrt() / truth)
    });
    for (j, name) in ["split", "plug-in"].iter().enumerate() {
        let (m, _) = mean_var(&ratios.iter().map(|r| r[j]).collect::<Vec<_>>());
        assert!((0.9..=1.1).contains(&m), "{name}: mean ratio {m}");
    }
}

#[test]
fn standardized_null_statistics_have_unit_variance() {
    let reps = 2000;
    let cfg = Model1Config::new(100, vec![20, 30, 50], 0.0);
    let sampler = Model1Sampler::new(&cfg).unwrap();
    let zs = replicate(105, reps, |rng, _| {
        let prep = Prepared::new(&sampler.sample(rng)).unwrap();
        Method::ALL.map(|m| prep.run(m, 0.05).unwrap().z)
    });
    for (j, m) in Method::ALL.iter().enumerate() {
        let (_, v) = mean_var(&zs.iter().map(|z| z[j]).collect::<Vec<_>>());
        assert!((0.8..=1.2).contains(&v), "{m}: variance {v}");
    }
}
