//! Test statistics, variance estimators and standardized tests.
//!
//! Three tests are provided:
//!
//! | method   | statistic | variance estimate                         |
//! |----------|-----------|-------------------------------------------|
//! | `T1Hat`  | `T`       | split-half `tr(Sigma_l^2)` estimates       |
//! | `T2Hat`  | `T`       | bias-corrected `tr(Sigma_l^2)` estimates   |
//! | `THHat`  | `T_CH`    | bias-corrected, equal group weighting      |
//!
//! All three reject for large values of the standardized statistic.
//! Double sums over `l != s` run over ordered pairs.

use serde::{Deserialize, Serialize};

use crate::data::{scatter_matrices, GroupedData, MIN_SPLIT_SIZE};
use crate::error::{Error, Result};
use crate::gram::{GramStats, GroupMoments};
use crate::matrix::{dot, trace_product, Matrix};
use crate::normal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "t1")]
    T1Hat,
    #[serde(rename = "t2")]
    T2Hat,
    #[serde(rename = "th")]
    THHat,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::T1Hat, Method::T2Hat, Method::THHat];

    pub fn name(self) -> &'static str {
        match self {
            Method::T1Hat => "t1",
            Method::T2Hat => "t2",
            Method::THHat => "th",
        }
    }

    /// Smallest group size the method can standardize.
    pub fn min_group_size(self) -> usize {
        match self {
            Method::T1Hat => MIN_SPLIT_SIZE,
            Method::T2Hat | Method::THHat => 3,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "t1hat" => Ok(Method::T1Hat),
            "t2" | "t2hat" => Ok(Method::T2Hat),
            "th" | "thhat" => Ok(Method::THHat),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

/// Per-group estimator of `tr(Sigma_l^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarianceMethod {
    /// `tr(S_{l,1} S_{l,2})` over the two split halves.
    SplitHalf,
    /// `(n-1)^2/((n+1)(n-2)) (tr(S^2) - tr^2(S)/(n-1))`.
    BaiSaranadasa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    T,
    TCh,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub value: f64,
    pub method: VarianceMethod,
    pub statistic: Statistic,
    /// Estimates of `tr(Sigma_l^2)`.
    pub trace_sq: Vec<f64>,
    /// `tr(S_l S_s)` plug-ins; only off-diagonal entries enter the estimate.
    pub cross: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    /// `T` or `T_CH`.
    pub statistic: f64,
    /// Square root of the variance estimate.
    pub sigma: f64,
    pub z: f64,
    /// `1 - Phi(z)`.
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// One-sided rejection `z >= xi_alpha`, boundary inclusive.
pub fn rejects(z: f64, alpha: f64) -> bool {
    z >= normal::upper_quantile(alpha)
}

/// `tr(E2) - tr(E1)`.
pub fn statistic_ts(data: &GroupedData) -> Result<f64> {
    let (e1, e2) = scatter_matrices(data)?;
    Ok(e2.trace() - e1.trace())
}

/// `T = sum_l (n-n_l)/(n(n_l-1)) sum_{i!=j} X_li'X_lj
///      - sum_{l!=s} (n_l n_s / n) xbar_l'xbar_s`.
pub fn statistic_t(data: &GroupedData) -> Result<f64> {
    data.require_group_size(2)?;
    Ok(GroupMoments::new(data).statistic_t())
}

/// `T_CH = (k-1) sum_l sum_{i!=j} X_li'X_lj/(n_l(n_l-1)) - sum_{l!=s} xbar_l'xbar_s`.
pub fn statistic_tch(data: &GroupedData) -> Result<f64> {
    data.require_group_size(2)?;
    Ok(GroupMoments::new(data).statistic_tch())
}

/// Split-half estimate `tr(S_{l,1} S_{l,2})` of `tr(Sigma^2)` for one group.
pub fn tr_sigma2_split(group: &crate::data::SampleMatrix) -> Result<f64> {
    let (a, b) = group.split_covariances()?;
    trace_product(&a, &b)
}

/// Bias-corrected estimate of `tr(Sigma^2)` for one group; needs `n >= 3`.
pub fn tr_sigma2_bs(group: &crate::data::SampleMatrix) -> Result<f64> {
    let n = group.n();
    if n < 3 {
        return Err(Error::GroupTooSmall {
            group: 0,
            size: n,
            required: 3,
        });
    }
    let s = group.covariance()?;
    Ok(crate::gram::bs_correction(
        n,
        trace_product(&s, &s)?,
        s.trace(),
    ))
}

/// `sigma_T^2 = (2/n^2) [ sum_l n_l (n-n_l)^2/(n_l-1) tr_l
///                      + sum_{l!=s} n_l n_s cross_ls ]`.
pub fn sigma_t_squared(sizes: &[usize], trace_sq: &[f64], cross: &Matrix) -> f64 {
    let k = sizes.len();
    let n = sizes.iter().sum::<usize>() as f64;
    let mut acc = 0.0;
    for l in 0..k {
        let nl = sizes[l] as f64;
        acc += nl * (n - nl) * (n - nl) / (nl - 1.0) * trace_sq[l];
        for s in 0..k {
            if s != l {
                acc += nl * sizes[s] as f64 * cross[(l, s)];
            }
        }
    }
    2.0 * acc / (n * n)
}

/// `sigma~^2 = 2(k-1)^2 sum_l tr_l/(n_l(n_l-1)) + sum_{l!=s} 2 cross_ls/(n_l n_s)`.
pub fn sigma_h_squared(sizes: &[usize], trace_sq: &[f64], cross: &Matrix) -> f64 {
    let k = sizes.len();
    let km1 = k as f64 - 1.0;
    let mut acc = 0.0;
    for l in 0..k {
        let nl = sizes[l] as f64;
        acc += 2.0 * km1 * km1 * trace_sq[l] / (nl * (nl - 1.0));
        for s in 0..k {
            if s != l {
                acc += 2.0 * cross[(l, s)] / (nl * sizes[s] as f64);
            }
        }
    }
    acc
}

fn checked(value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveVariance(value))
    }
}

/// Precomputed moments of one dataset from which every statistic, variance
/// estimate and test is evaluated without revisiting the raw data.
#[derive(Clone, Debug)]
pub struct Prepared {
    gram: GramStats,
}

impl Prepared {
    pub fn new(data: &GroupedData) -> Result<Self> {
        data.require_group_size(2)?;
        Ok(Prepared {
            gram: GramStats::new(data),
        })
    }

    pub fn statistic_t(&self) -> f64 {
        self.gram.moments.statistic_t()
    }

    pub fn statistic_tch(&self) -> f64 {
        self.gram.moments.statistic_tch()
    }

    fn trace_estimates(&self, method: VarianceMethod) -> Result<Vec<f64>> {
        (0..self.gram.k())
            .map(|l| match method {
                VarianceMethod::SplitHalf => self.gram.split_trace(l),
                VarianceMethod::BaiSaranadasa => self.gram.bs_trace(l),
            })
            .collect()
    }

    /// Estimate of `sigma_T^2` with the chosen per-group estimator.
    pub fn sigma_hat(&self, method: VarianceMethod) -> Result<VarianceEstimate> {
        let trace_sq = self.trace_estimates(method)?;
        let cross = self.gram.cross_traces();
        let value = sigma_t_squared(self.gram.sizes(), &trace_sq, &cross);
        Ok(VarianceEstimate {
            value: checked(value)?,
            method,
            statistic: Statistic::T,
            trace_sq,
            cross,
        })
    }

    /// Estimate of the variance of `T_CH`.
    pub fn sigma_hat_h(&self) -> Result<VarianceEstimate> {
        let trace_sq = self.trace_estimates(VarianceMethod::BaiSaranadasa)?;
        let cross = self.gram.cross_traces();
        let value = sigma_h_squared(self.gram.sizes(), &trace_sq, &cross);
        Ok(VarianceEstimate {
            value: checked(value)?,
            method: VarianceMethod::BaiSaranadasa,
            statistic: Statistic::TCh,
            trace_sq,
            cross,
        })
    }

    /// `(statistic, variance estimate)` for a method.
    pub fn standardize(&self, method: Method) -> Result<(f64, f64)> {
        match method {
            Method::T1Hat => Ok((
                self.statistic_t(),
                self.sigma_hat(VarianceMethod::SplitHalf)?.value,
            )),
            Method::T2Hat => Ok((
                self.statistic_t(),
                self.sigma_hat(VarianceMethod::BaiSaranadasa)?.value,
            )),
            Method::THHat => Ok((self.statistic_tch(), self.sigma_hat_h()?.value)),
        }
    }

    pub fn run(&self, method: Method, alpha: f64) -> Result<TestResult> {
        check_alpha(alpha)?;
        let (statistic, var) = self.standardize(method)?;
        let sigma = var.sqrt();
        let z = statistic / sigma;
        Ok(TestResult {
            method,
            statistic,
            sigma,
            z,
            p_value: normal::sf(z),
            alpha,
            reject: rejects(z, alpha),
        })
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

pub fn sigma_hat(data: &GroupedData, method: VarianceMethod) -> Result<VarianceEstimate> {
    Prepared::new(data)?.sigma_hat(method)
}

pub fn sigma_hat_h(data: &GroupedData) -> Result<VarianceEstimate> {
    Prepared::new(data)?.sigma_hat_h()
}

pub fn run_test(data: &GroupedData, method: Method, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    Prepared::new(data)?.run(method, alpha)
}

/// Runs several methods on one dataset, sharing the moment computation.
pub fn run_tests(
    data: &GroupedData,
    methods: &[Method],
    alpha: f64,
) -> Result<Vec<Result<TestResult>>> {
    check_alpha(alpha)?;
    let prepared = Prepared::new(data)?;
    Ok(methods.iter().map(|&m| prepared.run(m, alpha)).collect())
}

fn weighted_center(means: &[Vec<f64>], sizes: &[usize]) -> Result<Vec<f64>> {
    if means.len() != sizes.len() || means.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: sizes.len(),
            found: means.len(),
        });
    }
    let p = means[0].len();
    if let Some(bad) = means.iter().find(|m| m.len() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: bad.len(),
        });
    }
    let n = sizes.iter().sum::<usize>() as f64;
    let mut center = vec![0.0; p];
    for (m, &nl) in means.iter().zip(sizes) {
        for (c, x) in center.iter_mut().zip(m) {
            *c += nl as f64 / n * x;
        }
    }
    Ok(center)
}

/// `E(T) = sum_l n_l ||mu_l - mu~||^2` with `mu~ = sum_l (n_l/n) mu_l`.
pub fn oracle_expected_t(means: &[Vec<f64>], sizes: &[usize]) -> Result<f64> {
    let center = weighted_center(means, sizes)?;
    Ok(means
        .iter()
        .zip(sizes)
        .map(|(m, &nl)| {
            nl as f64
                * m.iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
        })
        .sum())
}

/// `Var(T) = sigma_T^2 + 4 sum_l n_l (mu_l - mu~)' Sigma_l (mu_l - mu~)`.
pub fn oracle_var_t(means: &[Vec<f64>], sizes: &[usize], covs: &[Matrix]) -> Result<f64> {
    let center = weighted_center(means, sizes)?;
    let p = center.len();
    if covs.len() != sizes.len() {
        return Err(Error::DimensionMismatch {
            expected: sizes.len(),
            found: covs.len(),
        });
    }
    if let Some(bad) = covs.iter().find(|c| c.rows() != p || c.cols() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: bad.rows(),
        });
    }
    let k = sizes.len();
    let trace_sq: Vec<f64> = covs
        .iter()
        .map(|c| trace_product(c, c))
        .collect::<Result<_>>()?;
    let cross = Matrix::from_fn(k, k, |l, s| {
        trace_product(&covs[l], &covs[s]).expect("shapes checked")
    });
    let mut drift = 0.0;
    for l in 0..k {
        let d: Vec<f64> = means[l].iter().zip(&center).map(|(a, b)| a - b).collect();
        let sd: Vec<f64> = (0..p).map(|i| dot(covs[l].row(i), &d)).collect();
        drift += sizes[l] as f64 * dot(&d, &sd);
    }
    Ok(sigma_t_squared(sizes, &trace_sq, &cross) + 4.0 * drift)
}

/// `T` written as a sum over the concatenated sample `C_1..C_n`:
/// `T = 2 sum_j sum_{i<j} eta_ij`, `D_j = sum_{i<j} eta_ij`.
#[derive(Clone, Debug)]
pub struct MartingaleDecomposition {
    n: usize,
    /// Packed strict upper triangle, row-major over `j`: entry `(i, j)`, `i < j`,
    /// lives at `j(j-1)/2 + i`.
    eta: Vec<f64>,
    /// `D_j` for `j = 0..n` (0-based); `D_0 = 0`.
    pub increments: Vec<f64>,
    /// Block index of every concatenated observation.
    pub blocks: Vec<usize>,
    /// `2 sum_j D_j`.
    pub total: f64,
}

impl MartingaleDecomposition {
    /// `eta_ij` for `i < j` (0-based).
    pub fn eta(&self, i: usize, j: usize) -> f64 {
        assert!(i < j && j < self.n, "need i < j < n");
        self.eta[j * (j - 1) / 2 + i]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Builds the `eta_ij` with within-block weight `(n-n_l)/(n(n_l-1))` and
/// cross-block weight `-1/n` from raw inner products.
pub fn martingale_decompose(data: &GroupedData) -> Result<MartingaleDecomposition> {
    data.require_group_size(2)?;
    let n = data.total();
    let nf = n as f64;
    let mut rows: Vec<&[f64]> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    for (l, g) in data.groups().iter().enumerate() {
        for i in 0..g.n() {
            rows.push(g.row(i));
            blocks.push(l);
        }
    }
    let sizes = data.sizes();
    let mut eta = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut increments = vec![0.0; n];
    for j in 1..n {
        let mut d = 0.0;
        for i in 0..j {
            let w = if blocks[i] == blocks[j] {
                let nl = sizes[blocks[j]] as f64;
                (nf - nl) / (nf * (nl - 1.0))
            } else {
                -1.0 / nf
            };
            let e = w * dot(rows[i], rows[j]);
            eta.push(e);
            d += e;
        }
        increments[j] = d;
    }
    let total = 2.0 * increments.iter().sum::<f64>();
    Ok(MartingaleDecomposition {
        n,
        eta,
        increments,
        blocks,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SampleMatrix;

    fn scalar_groups(groups: &[&[f64]]) -> GroupedData {
        GroupedData::from_rows(
            &groups
                .iter()
                .map(|g| g.iter().map(|&x| vec![x]).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn t_hand_example() {
        let d = scalar_groups(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        assert!((statistic_t(&d).unwrap() - 4.0).abs() < 1e-14);
        assert!((statistic_tch(&d).unwrap() - 4.0).abs() < 1e-14);
        assert!((martingale_decompose(&d).unwrap().total - 4.0).abs() < 1e-14);
    }

    #[test]
    fn ts_hand_example() {
        let d = scalar_groups(&[&[0.0, 0.0], &[2.0, 2.0]]);
        assert!((statistic_ts(&d).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn zero_data_gives_zero_statistics() {
        let d = GroupedData::from_rows(&[vec![vec![0.0; 3]; 3], vec![vec![0.0; 3]; 4]]).unwrap();
        assert_eq!(statistic_t(&d).unwrap(), 0.0);
        assert_eq!(statistic_tch(&d).unwrap(), 0.0);
        let m = martingale_decompose(&d).unwrap();
        assert_eq!(m.total, 0.0);
        assert!((0..7).all(|j| (0..j).all(|i| m.eta(i, j) == 0.0)));
    }

    #[test]
    fn identical_observations_give_zero_ts() {
        let d = scalar_groups(&[&[2.5, 2.5, 2.5], &[2.5, 2.5]]);
        assert_eq!(statistic_ts(&d).unwrap(), 0.0);
    }

    #[test]
    fn constant_groups_have_zero_trace_estimates() {
        let g = SampleMatrix::from_rows(&[[1.0, 2.0]; 6]).unwrap();
        assert_eq!(tr_sigma2_split(&g).unwrap(), 0.0);
        assert_eq!(tr_sigma2_bs(&g).unwrap(), 0.0);
    }

    #[test]
    fn constant_groups_cannot_be_standardized() {
        let d =
            GroupedData::from_rows(&[vec![vec![1.0, 2.0]; 6], vec![vec![3.0, 0.0]; 5]]).unwrap();
        assert!(matches!(
            sigma_hat(&d, VarianceMethod::SplitHalf),
            Err(Error::NonPositiveVariance(v)) if v == 0.0
        ));
        assert!(matches!(
            sigma_hat(&d, VarianceMethod::BaiSaranadasa),
            Err(Error::NonPositiveVariance(_))
        ));
        assert!(matches!(
            sigma_hat_h(&d),
            Err(Error::NonPositiveVariance(_))
        ));
    }

    #[test]
    fn size_minima() {
        let g = SampleMatrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(matches!(
            tr_sigma2_bs(&g),
            Err(Error::GroupTooSmall { required: 3, .. })
        ));
        let d = scalar_groups(&[&[1.0, 2.0, 3.0, 4.0], &[1.0, 5.0, 2.0, 0.0, 1.0]]);
        assert!(matches!(
            run_test(&d, Method::T1Hat, 0.05),
            Err(Error::GroupTooSmall {
                group: 0,
                size: 4,
                required: 5
            })
        ));
        assert!(run_test(&d, Method::T2Hat, 0.05).is_ok());
    }

    #[test]
    fn boundary_is_inclusive() {
        let xi = normal::upper_quantile(0.05);
        assert!((xi - 1.6448536269514722).abs() < 1e-12);
        assert!(rejects(xi, 0.05));
        assert!(!rejects(xi - 1e-12, 0.05));
    }

    #[test]
    fn alpha_must_be_open_unit_interval() {
        let d = scalar_groups(&[&[1.0, 2.0, 3.0], &[1.0, 5.0, 2.0]]);
        for a in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                run_test(&d, Method::T2Hat, a),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn expected_t_hand_example() {
        let e = oracle_expected_t(&[vec![0.0], vec![1.0]], &[2, 2]).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
        assert_eq!(
            oracle_expected_t(&[vec![0.3, 1.0], vec![0.3, 1.0]], &[4, 9]).unwrap(),
            0.0
        );
    }

    #[test]
    fn var_t_hand_example() {
        let one = Matrix::identity(1);
        let v = oracle_var_t(&[vec![0.0], vec![0.0]], &[2, 2], &[one.clone(), one]).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
    }

    #[test]
    fn var_t_null_branch_is_sigma_t() {
        let s1 = Matrix::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let s2 = Matrix::identity(2);
        let sizes = [5, 8];
        let mu = vec![0.7, -0.2];
        let v = oracle_var_t(&[mu.clone(), mu], &sizes, &[s1.clone(), s2.clone()]).unwrap();
        let trace_sq = [
            trace_product(&s1, &s1).unwrap(),
            trace_product(&s2, &s2).unwrap(),
        ];
        let x = trace_product(&s1, &s2).unwrap();
        let cross = Matrix::from_rows(&[[trace_sq[0], x], [x, trace_sq[1]]]).unwrap();
        assert_eq!(v, sigma_t_squared(&sizes, &trace_sq, &cross));
    }

    #[test]
    fn oracle_dimension_mismatch() {
        assert!(matches!(
            oracle_expected_t(&[vec![0.0], vec![1.0, 2.0]], &[2, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            oracle_var_t(&[vec![0.0], vec![1.0]], &[2, 2], &[Matrix::identity(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("T1".parse::<Method>().unwrap(), Method::T1Hat);
        assert_eq!("th".parse::<Method>().unwrap(), Method::THHat);
        assert!("t3".parse::<Method>().is_err());
    }
}
