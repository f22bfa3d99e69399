//! Asymptotic power of the proposed and equal-weight tests, their asymptotic
//! relative efficiency, and the root structure of `ARE = 1` in the
//! three-group common-direction setting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{trace_product, Matrix};
use crate::normal;
use crate::stats::check_alpha;

/// Limiting group fractions `lambda_l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DesignSpec {
    lambdas: Vec<f64>,
}

impl DesignSpec {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::TooFewGroups {
                required: 2,
                found: lambdas.len(),
            });
        }
        if let Some(bad) = lambdas.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::invalid(format!("lambda {bad} outside (0, 1)")));
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("lambdas sum to {sum}, not 1")));
        }
        Ok(DesignSpec { lambdas })
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        DesignSpec::new(sizes.iter().map(|&s| s as f64 / n as f64).collect())
    }

    pub fn balanced(k: usize) -> Result<Self> {
        DesignSpec::from_sizes(&vec![1; k])
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn is_balanced(&self) -> bool {
        let first = self.lambdas[0];
        self.lambdas.iter().all(|&l| (l - first).abs() <= 1e-12)
    }
}

impl TryFrom<Vec<f64>> for DesignSpec {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        DesignSpec::new(v)
    }
}

impl From<DesignSpec> for Vec<f64> {
    fn from(d: DesignSpec) -> Vec<f64> {
        d.lambdas
    }
}

/// Population covariances, either explicit or through the traces the power
/// functions need.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceSummary {
    Explicit(Vec<Matrix>),
    /// `cross` is `k x k` with `cross[l][s] = tr(Sigma_l Sigma_s)`; its
    /// diagonal holds `tr(Sigma_l^2)`.
    Traces {
        cross: Matrix,
    },
}

impl CovarianceSummary {
    /// Every group shares a covariance with `tr(Sigma^2) = tr_sq`.
    pub fn homogeneous(k: usize, tr_sq: f64) -> Self {
        CovarianceSummary::Traces {
            cross: Matrix::from_fn(k, k, |_, _| tr_sq),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            CovarianceSummary::Explicit(v) => v.len(),
            CovarianceSummary::Traces { cross } => cross.rows(),
        }
    }

    /// `k x k` trace matrix `tr(Sigma_l Sigma_s)`.
    pub fn trace_matrix(&self) -> Result<Matrix> {
        match self {
            CovarianceSummary::Traces { cross } => {
                if !cross.is_square() {
                    return Err(Error::DimensionMismatch {
                        expected: cross.rows(),
                        found: cross.cols(),
                    });
                }
                if let Some(bad) = cross.as_slice().iter().find(|x| !x.is_finite()) {
                    return Err(Error::invalid(format!("non-finite trace {bad}")));
                }
                Ok(cross.clone())
            }
            CovarianceSummary::Explicit(covs) => {
                let k = covs.len();
                let mut m = Matrix::zeros(k, k);
                for l in 0..k {
                    for s in l..k {
                        let v = trace_product(&covs[l], &covs[s])?;
                        m[(l, s)] = v;
                        m[(s, l)] = v;
                    }
                }
                Ok(m)
            }
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match self {
            CovarianceSummary::Explicit(covs) => covs.windows(2).all(|w| {
                w[0].max_abs_diff(&w[1])
                    .map(|d| d <= 1e-12 * w[0].frobenius_norm().max(1.0))
                    .unwrap_or(false)
            }),
            CovarianceSummary::Traces { cross } => {
                let first = cross.as_slice().first().copied().unwrap_or(0.0);
                cross
                    .as_slice()
                    .iter()
                    .all(|&x| (x - first).abs() <= 1e-12 * first.abs().max(1.0))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpec {
    pub means: Vec<Vec<f64>>,
    pub covariance: CovarianceSummary,
    /// Total sample size entering the drift.
    pub n: f64,
}

impl PopulationSpec {
    fn validate(&self, design: &DesignSpec) -> Result<()> {
        let k = design.k();
        if self.means.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: self.means.len(),
            });
        }
        if self.covariance.k() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: self.covariance.k(),
            });
        }
        let p = self.means[0].len();
        if let Some(bad) = self.means.iter().find(|m| m.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        if let CovarianceSummary::Explicit(covs) = &self.covariance {
            if let Some(bad) = covs.iter().find(|c| c.rows() != p || c.cols() != p) {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: bad.rows(),
                });
            }
        }
        if self.n.is_nan() || self.n <= 0.0 {
            return Err(Error::invalid(format!(
                "sample size {} must be positive",
                self.n
            )));
        }
        Ok(())
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `sum_l lambda_l ||mu_l - mu~||^2`, `mu~ = sum lambda_l mu_l`.
pub fn weighted_signal(design: &DesignSpec, means: &[Vec<f64>]) -> f64 {
    let p = means[0].len();
    let mut center = vec![0.0; p];
    for (m, &l) in means.iter().zip(design.lambdas()) {
        for (c, x) in center.iter_mut().zip(m) {
            *c += l * x;
        }
    }
    means
        .iter()
        .zip(design.lambdas())
        .map(|(m, &l)| l * dist_sq(m, &center))
        .sum()
}

/// `sum_l ||mu_l - mu_bar||^2`, `mu_bar = (1/k) sum mu_l`.
pub fn average_signal(means: &[Vec<f64>]) -> f64 {
    let k = means.len() as f64;
    let p = means[0].len();
    let mut center = vec![0.0; p];
    for m in means {
        for (c, x) in center.iter_mut().zip(m) {
            *c += x / k;
        }
    }
    means.iter().map(|m| dist_sq(m, &center)).sum()
}

/// Noise term of the proposed test:
/// `sum_l (1-lambda_l)^2 tr(Sigma_l^2) + sum_{l!=s} lambda_l lambda_s tr(Sigma_l Sigma_s)`.
pub fn noise_proposed(design: &DesignSpec, traces: &Matrix) -> f64 {
    let lam = design.lambdas();
    let k = lam.len();
    let mut acc = 0.0;
    for l in 0..k {
        acc += (1.0 - lam[l]).powi(2) * traces[(l, l)];
        for s in 0..k {
            if s != l {
                acc += lam[l] * lam[s] * traces[(l, s)];
            }
        }
    }
    acc
}

/// Noise term of the equal-weight test:
/// `(k-1)^2 sum_l tr(Sigma_l^2)/lambda_l^2 + sum_{l!=s} tr(Sigma_l Sigma_s)/(lambda_l lambda_s)`.
pub fn noise_hu(design: &DesignSpec, traces: &Matrix) -> f64 {
    let lam = design.lambdas();
    let k = lam.len();
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
    acc
}

fn positive_root(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x.sqrt())
    } else {
        Err(Error::DegenerateDenominator(x))
    }
}

/// Mean shift of the standardized proposed statistic.
pub fn drift_proposed(design: &DesignSpec, pop: &PopulationSpec) -> Result<f64> {
    pop.validate(design)?;
    let traces = pop.covariance.trace_matrix()?;
    let denom = positive_root(noise_proposed(design, &traces))?;
    Ok(std::f64::consts::FRAC_1_SQRT_2 * pop.n * weighted_signal(design, &pop.means) / denom)
}

/// Mean shift of the standardized equal-weight statistic.
pub fn drift_hu(design: &DesignSpec, pop: &PopulationSpec) -> Result<f64> {
    pop.validate(design)?;
    let traces = pop.covariance.trace_matrix()?;
    let denom = positive_root(noise_hu(design, &traces))?;
    let k = design.k() as f64;
    Ok(std::f64::consts::FRAC_1_SQRT_2 * k * pop.n * average_signal(&pop.means) / denom)
}

/// `Phi(-xi_alpha + drift)` for the proposed test.
pub fn power_proposed(design: &DesignSpec, pop: &PopulationSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let drift = drift_proposed(design, pop)?;
    Ok(normal::cdf(drift - normal::upper_quantile(alpha)))
}

/// `Phi(-xi_alpha + drift)` for the equal-weight test.
pub fn power_hu(design: &DesignSpec, pop: &PopulationSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let drift = drift_hu(design, pop)?;
    Ok(normal::cdf(drift - normal::upper_quantile(alpha)))
}

/// Power of the proposed test with a common covariance, written with
/// `sqrt(2(k-1) tr(Sigma^2))` in the denominator.
pub fn power_proposed_homogeneous(
    design: &DesignSpec,
    means: &[Vec<f64>],
    n: f64,
    tr_sq: f64,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    let k = design.k() as f64;
    let denom = positive_root(2.0 * (k - 1.0) * tr_sq)?;
    let drift = n * weighted_signal(design, means) / denom;
    Ok(normal::cdf(drift - normal::upper_quantile(alpha)))
}

/// Ratio of the two drifts under a common covariance; free of `Sigma` and `n`.
pub fn are(design: &DesignSpec, pop: &PopulationSpec) -> Result<f64> {
    pop.validate(design)?;
    if !pop.covariance.is_homogeneous() {
        return Err(Error::HeterogeneousCovariance);
    }
    are_from_means(design, &pop.means)
}

/// [`are`] for a common covariance, taking only the means.
pub fn are_from_means(design: &DesignSpec, means: &[Vec<f64>]) -> Result<f64> {
    let lam = design.lambdas();
    let k = lam.len();
    if means.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: means.len(),
        });
    }
    let proposed = weighted_signal(design, means);
    let hu = average_signal(means);
    if proposed == 0.0 && hu == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let km1 = k as f64 - 1.0;
    let mut weights = 0.0;
    for l in 0..k {
        weights += km1 * km1 / (lam[l] * lam[l]);
        for s in 0..k {
            if s != l {
                weights += 1.0 / (lam[l] * lam[s]);
            }
        }
    }
    Ok(proposed * weights.sqrt() / ((k as f64) * km1.sqrt() * hu))
}

/// ARE when only the last group's mean differs from the rest.
pub fn are_case_one(design: &DesignSpec) -> f64 {
    let lam = design.lambdas();
    let k = lam.len() as f64;
    let last = lam[lam.len() - 1];
    let inv_sq: f64 = lam.iter().map(|l| 1.0 / (l * l)).sum();
    let inv: f64 = lam.iter().map(|l| 1.0 / l).sum();
    last * (1.0 - last) / ((k - 1.0) * (k - 1.0).sqrt())
        * (k * (k - 2.0) * inv_sq + inv * inv).sqrt()
}

/// `k^2 lambda_k (1 - lambda_k) / (k - 1)`, a lower bound on [`are_case_one`].
pub fn are_lower_bound(design: &DesignSpec) -> f64 {
    let lam = design.lambdas();
    let k = lam.len() as f64;
    let last = lam[lam.len() - 1];
    k * k * last * (1.0 - last) / (k - 1.0)
}

/// ARE for `k = 3`, `lambda_1 = lambda_2`, `mu_1 = 0`, `mu_2 = tau mu_3`.
pub fn are_case_two(tau: f64, lambda3: f64) -> f64 {
    (tau * tau / lambda3 + (tau - 2.0) * (tau - 2.0)) * (9.0 * lambda3 * lambda3 + 1.0).sqrt()
        / (4.0 * std::f64::consts::SQRT_2 * (tau * tau - tau + 1.0))
}

pub const ARE_GRID_POINTS: usize = 2000;
pub const ARE_GRID_MIN: f64 = 1e-4;
pub const ARE_GRID_MAX: f64 = 1.0 - 1e-4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AreCurve {
    pub tau: f64,
    /// `(lambda3, ARE)`, strictly increasing in `lambda3`.
    pub grid: Vec<(f64, f64)>,
    /// Sorted solutions of `ARE = 1`.
    pub roots: Vec<f64>,
}

/// Scans `lambda3` over a uniform grid (plus the node `1/3`, where
/// `ARE = 1` for every `tau`) and bisects each sign change of `ARE - 1`.
pub fn solve_are_roots(tau: f64) -> Result<AreCurve> {
    if tau == 0.0 || !tau.is_finite() {
        return Err(Error::invalid(format!(
            "tau must be finite and non-zero, got {tau}"
        )));
    }
    let f = |x: f64| are_case_two(tau, x) - 1.0;
    let third = 1.0 / 3.0;
    let step = (ARE_GRID_MAX - ARE_GRID_MIN) / (ARE_GRID_POINTS - 1) as f64;
    let mut xs: Vec<f64> = (0..ARE_GRID_POINTS)
        .map(|i| ARE_GRID_MIN + i as f64 * step)
        .collect();
    let at = xs.partition_point(|&x| x < third);
    if (xs[at] - third).abs() > 1e-12 {
        xs.insert(at, third);
    } else {
        xs[at] = third;
    }
    let grid: Vec<(f64, f64)> = xs.iter().map(|&x| (x, are_case_two(tau, x))).collect();

    let is_root = |v: f64| (v - 1.0).abs() <= 1e-12;
    let mut roots = Vec::new();
    for (i, &(x, v)) in grid.iter().enumerate() {
        if is_root(v) {
            roots.push(x);
            continue;
        }
        if let Some(&(x1, v1)) = grid.get(i + 1) {
            if !is_root(v1) && (v - 1.0).signum() != (v1 - 1.0).signum() {
                roots.push(bisect(&f, x, x1));
            }
        }
    }
    Ok(AreCurve { tau, grid, roots })
}

/// Bisects down to adjacent floating-point values; the curve is steep near
/// `lambda3 = 0`, so a fixed width in `lambda3` is not enough.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if flo.abs() <= f(hi).abs() { lo } else { hi };
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pop(means: Vec<Vec<f64>>, k: usize) -> PopulationSpec {
        PopulationSpec {
            means,
            covariance: CovarianceSummary::homogeneous(k, 7.5),
            n: 120.0,
        }
    }

    #[test]
    fn design_validation() {
        assert!(DesignSpec::new(vec![0.5, 0.5]).is_ok());
        assert!(DesignSpec::new(vec![0.5, 0.6]).is_err());
        assert!(DesignSpec::new(vec![1.0, 0.0]).is_err());
        assert!(DesignSpec::new(vec![1.0]).is_err());
        assert!(DesignSpec::from_sizes(&[2, 3, 5]).unwrap().lambdas()[2] == 0.5);
    }

    #[test]
    fn null_power_equals_alpha() {
        let d = DesignSpec::from_sizes(&[1, 2, 7]).unwrap();
        let p = pop(vec![vec![1.0, 2.0]; 3], 3);
        assert!((power_proposed(&d, &p, 0.05).unwrap() - 0.05).abs() < 1e-15);
        assert!((power_hu(&d, &p, 0.05).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn degenerate_noise_is_an_error() {
        let d = DesignSpec::balanced(2).unwrap();
        let p = PopulationSpec {
            means: vec![vec![0.0], vec![1.0]],
            covariance: CovarianceSummary::homogeneous(2, 0.0),
            n: 10.0,
        };
        assert!(matches!(
            power_proposed(&d, &p, 0.05),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn balanced_are_is_one() {
        let d = DesignSpec::balanced(4).unwrap();
        let p = pop(
            vec![
                vec![0.0, 1.0],
                vec![2.0, -1.0],
                vec![0.5, 0.5],
                vec![3.0, 0.0],
            ],
            4,
        );
        assert!((are(&d, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn are_requires_common_covariance_and_signal() {
        let d = DesignSpec::from_sizes(&[1, 1, 2]).unwrap();
        let mut p = pop(vec![vec![0.0]; 3], 3);
        assert_eq!(are(&d, &p).unwrap_err(), Error::ZeroSignal);
        p.covariance = CovarianceSummary::Explicit(vec![
            Matrix::identity(1),
            Matrix::identity(1),
            Matrix::identity(1).scale(2.0),
        ]);
        p.means[2] = vec![1.0];
        assert_eq!(are(&d, &p).unwrap_err(), Error::HeterogeneousCovariance);
    }

    #[test]
    fn case_one_balanced_is_one() {
        for k in 3..9 {
            let d = DesignSpec::balanced(k).unwrap();
            assert!((are_case_one(&d) - 1.0).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn case_one_small_group_blows_up() {
        let d = DesignSpec::new(vec![0.01, 0.495, 0.495]).unwrap();
        assert!(are_case_one(&d) > 1.0);
    }

    #[test]
    fn lower_bound_plug_in() {
        let d = DesignSpec::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert!((are_lower_bound(&d) - 1.125).abs() < 1e-15);
    }

    #[test]
    fn case_two_values() {
        for tau in [-25.0, -1.0, 0.2, 2.0, 13.0] {
            assert!((are_case_two(tau, 1.0 / 3.0) - 1.0).abs() < 1e-12);
        }
        let want = 2.0 * 0.625_f64.sqrt();
        assert!((are_case_two(2.0, 1.0 / 6.0) - want).abs() < 1e-12);
    }

    #[test]
    fn root_structure() {
        let third = 1.0 / 3.0;
        let c = solve_are_roots(2.0).unwrap();
        assert_eq!(c.roots.len(), 1);
        assert!((c.roots[0] - third).abs() < 1e-8);

        let c = solve_are_roots(0.2).unwrap();
        assert_eq!(c.roots.len(), 2, "{:?}", c.roots);
        assert!(c.roots[0] < third && (c.roots[1] - third).abs() < 1e-8);

        let c = solve_are_roots(-25.0).unwrap();
        assert_eq!(c.roots.len(), 2, "{:?}", c.roots);
        assert!((c.roots[0] - third).abs() < 1e-8 && c.roots[1] > third);
    }

    #[test]
    fn grid_is_strictly_increasing_and_contains_third() {
        let c = solve_are_roots(0.5).unwrap();
        assert!(c.grid.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(c
            .grid
            .iter()
            .any(|&(x, v)| x == 1.0 / 3.0 && (v - 1.0).abs() < 1e-12));
        assert_eq!(c.grid.len(), ARE_GRID_POINTS + 1);
    }

    #[test]
    fn zero_tau_rejected() {
        assert!(solve_are_roots(0.0).is_err());
    }
}
