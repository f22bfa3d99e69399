//! Standard normal distribution helpers.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{PI, SQRT_2};

/// `Phi(z)`.
pub fn cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Upper tail `1 - Phi(z)`, computed without cancellation.
pub fn sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// Upper-`alpha` quantile `xi_alpha`, i.e. `sf(xi_alpha) = alpha`.
pub fn upper_quantile(alpha: f64) -> f64 {
    let target = 2.0 * alpha;
    let mut x = erfc_inv(target);
    // one Newton step against the more accurate erfc
    if x.is_finite() {
        x += (erfc(x) - target) / (2.0 / PI.sqrt() * (-x * x).exp());
    }
    SQRT_2 * x
}

/// Kolmogorov-Smirnov distance `sup_x |F_n(x) - Phi(x)|` of a sample.
pub fn ks_distance(samples: &[f64]) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_reference_values() {
        // scipy.stats.norm.isf
        assert!((upper_quantile(0.05) - 1.6448536269514722).abs() < 1e-12);
        assert!((upper_quantile(0.025) - 1.959963984540054).abs() < 1e-12);
        assert!((upper_quantile(0.5)).abs() < 1e-15);
        assert!((upper_quantile(1e-6) - 4.753424308822899).abs() < 1e-10);
    }

    #[test]
    fn quantile_inverts_sf() {
        for &a in &[1e-8, 1e-4, 0.01, 0.05, 0.2, 0.5, 0.7, 0.99] {
            let z = upper_quantile(a);
            assert!((sf(z) - a).abs() <= 1e-10 * a.max(1e-3), "alpha {a}");
        }
    }

    #[test]
    fn cdf_and_sf_complement() {
        for &z in &[-8.0, -1.0, 0.0, 0.3, 2.5] {
            assert!((cdf(z) + sf(z) - 1.0).abs() < 1e-15);
        }
        assert_eq!(cdf(0.0), 0.5);
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let n = 1000;
        let xs: Vec<f64> = (0..n)
            .map(|i| -upper_quantile((i as f64 + 0.5) / n as f64))
            .collect();
        assert!((ks_distance(&xs) - 0.5 / n as f64).abs() < 1e-9);
    }
}
