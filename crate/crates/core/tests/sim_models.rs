//! Generators, seeding and campaign-level behaviour of the simulation module.

use hdbf_core::sim::model1::{build_sigma_model1, sample_ma_rows, theta_from_means, MODEL1_RHO};
use hdbf_core::sim::model2::{build_sigma_model2, Model2Sampler};
use hdbf_core::sim::{
    estimator_bias_study, rng_for, run_monte_carlo, BiasConfig, Innovation, Model1Config,
    Model2Config, ModelConfig, SimConfig,
};
use hdbf_core::{Matrix, Method, SampleMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_scaled_error(x: &SampleMatrix, target: &Matrix) -> f64 {
    let s = x.covariance().unwrap();
    let p = target.rows();
    let mut worst = 0.0f64;
    for i in 0..p {
        for j in 0..p {
            let scale = (target[(i, i)] * target[(j, j)]).sqrt();
            worst = worst.max((s[(i, j)] - target[(i, j)]).abs() / scale);
        }
    }
    worst
}

#[test]
fn moving_average_rows_have_the_banded_covariance() {
    let p = 20;
    for (inn, seed) in [
        (Innovation::StandardNormal, 1),
        (Innovation::CenteredChiSq4, 2),
    ] {
        for &rho in &MODEL1_RHO {
            let x = sample_ma_rows(rho, &vec![0.0; p], 50_000, inn, &mut rng_for(seed, 0));
            let target = build_sigma_model1(rho, p);
            let err = max_scaled_error(&x, &target);
            assert!(err < 0.03, "{inn:?} {rho:?}: {err}");
            let s = x.covariance().unwrap();
            for i in 0..p - 3 {
                assert!(s[(i, i + 3)].abs() < 0.03 * target[(i, i)], "lag 3 at {i}");
            }
            let se = (target[(0, 0)] / 50_000.0).sqrt();
            assert!(x.mean().iter().all(|m| m.abs() < 4.5 * se));
        }
    }
}

#[test]
fn factor_model_rows_have_the_target_covariance() {
    let cfg = Model2Config::new(6, vec![3, 3, 3], 0.3, 5);
    let sampler = Model2Sampler::new(&cfg).unwrap();
    let means = cfg.means();
    for (l, group_mean) in means.iter().enumerate() {
        let x = sampler.sample_group(l, 50_000, &mut rng_for(3, l));
        let target = build_sigma_model2(&cfg, l).unwrap();
        let err = max_scaled_error(&x, &target);
        assert!(err < 0.03, "group {l}: {err}");
        let root = sampler.factor(l);
        let back = root.matmul(root).unwrap();
        assert!(back.max_abs_diff(&target).unwrap() < 1e-10 * target.frobenius_norm());
        for (m, want) in x.mean().iter().zip(group_mean) {
            assert!((m - want).abs() < 0.05, "mean {m} vs {want}");
        }
    }
}

#[test]
fn theta_round_trips_through_the_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let p = rng.random_range(20..=600);
        let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(2..=100)).collect();
        let theta = rng.random_range(1e-4..0.5);
        let cfg = Model1Config::new(p, sizes.clone(), theta);
        let means = cfg.means().unwrap();
        let back = theta_from_means(&sizes, &means, &cfg.trace_matrix());
        assert!((back - theta).abs() <= 1e-10 * theta, "{back} vs {theta}");
    }
}

fn campaign(model: ModelConfig, reps: usize, seed: u64) -> SimConfig {
    SimConfig::new(model, reps, seed)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfgs = [
        campaign(
            ModelConfig::Model1(Model1Config::new(60, vec![8, 10, 14], 0.05)),
            64,
            9,
        ),
        campaign(
            ModelConfig::Model2(Model2Config::new(30, vec![8, 10, 14], 0.2, 9)),
            64,
            9,
        ),
    ];
    for cfg in &cfgs {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_monte_carlo(cfg).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(3));
    }
}

#[test]
fn different_seeds_give_different_campaigns() {
    let model = ModelConfig::Model1(Model1Config::new(40, vec![6, 8, 10], 0.0));
    let a = run_monte_carlo(&campaign(model.clone(), 200, 1)).unwrap();
    let b = run_monte_carlo(&campaign(model, 200, 2)).unwrap();
    assert_ne!(a.config_digest, b.config_digest);
    assert_ne!(a.rates, b.rates);
}

#[test]
fn power_grows_with_theta() {
    let rates: Vec<_> = [0.0, 0.002, 0.005]
        .iter()
        .map(|&theta| {
            let model = ModelConfig::Model1(Model1Config::new(100, vec![20, 30, 50], theta));
            run_monte_carlo(&campaign(model, 600, 21)).unwrap()
        })
        .collect();
    for m in Method::ALL {
        for w in rates.windows(2) {
            let (lo, hi) = (w[0].rate(m).unwrap(), w[1].rate(m).unwrap());
            assert!(
                hi.rate - lo.rate > 2.0 * lo.se.hypot(hi.se),
                "{m}: {} then {}",
                lo.rate,
                hi.rate
            );
        }
    }
}

#[test]
fn balanced_design_gives_matching_powers() {
    let model = ModelConfig::Model1(Model1Config::new(100, vec![25, 25, 25], 0.003));
    let r = run_monte_carlo(&campaign(model, 1000, 22)).unwrap();
    let (t1, th) = (
        r.rate(Method::T1Hat).unwrap(),
        r.rate(Method::THHat).unwrap(),
    );
    assert!(
        (t1.rate - th.rate).abs() <= 2.0 * t1.se.hypot(th.se),
        "{} vs {}",
        t1.rate,
        th.rate
    );
}

#[test]
fn trace_estimators_consistent_for_identity() {
    let mut cfg = BiasConfig::new(20, 500, 400, 23);
    cfg.rho = [1.0, 0.0, 0.0];
    assert_eq!(cfg.exact_trace(), 20.0);
    let r = estimator_bias_study(&cfg).unwrap();
    for (name, s) in [("split", r.split), ("plug-in", r.plug_in)] {
        assert!((s.mean - 1.0).abs() < 0.02, "{name}: {}", s.mean);
        assert!(s.sd < 0.1, "{name}: sd {}", s.sd);
    }
}

#[test]
fn chisq_innovations_are_standardized() {
    let mut rng = rng_for(24, 0);
    let xs: Vec<f64> = (0..200_000)
        .map(|_| Innovation::CenteredChiSq4.sample(&mut rng))
        .collect();
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let skew = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n / v.powf(1.5);
    assert!(m.abs() < 0.01 && (v - 1.0).abs() < 0.02);
    // chi-square(4) has skewness sqrt(2)
    assert!((skew - 2f64.sqrt()).abs() < 0.1, "{skew}");
}
