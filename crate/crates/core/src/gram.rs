//! Group moments and centered Gram matrix shared by every statistic.
//!
//! With each group centered by its own mean, `C = Xc Xc^T` (an `n x n`
//! matrix) carries every trace the variance estimators need:
//!
//! * `tr(S_l)          = sum_{i in l} C_ii / (n_l - 1)`
//! * `tr(S_l S_s)      = sum_{i in l, j in s} C_ij^2 / ((n_l - 1)(n_s - 1))`
//! * split halves: the same sum over the two halves after re-centering each
//!   half in Gram space.
//!
//! This costs `O(n^2 p)` instead of the `O(n p^2)` needed to form `p x p`
//! covariances, which matters for `p >> n`.

use std::ops::Range;

use crate::data::{split_sizes, GroupedData, SampleMatrix, MIN_SPLIT_SIZE};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// Group means and `tr(S_l)`; enough for `T`, `T_CH` and `T_S`.
#[derive(Clone, Debug)]
pub struct GroupMoments {
    pub sizes: Vec<usize>,
    pub means: Vec<Vec<f64>>,
    /// `tr(S_l)`, divisor `n_l - 1`.
    pub traces: Vec<f64>,
}

impl GroupMoments {
    pub fn new(data: &GroupedData) -> Self {
        GroupMoments::from_groups(data.groups())
    }

    /// Works for any number of groups, including one.
    pub fn from_groups(groups: &[SampleMatrix]) -> Self {
        let mut means = Vec::with_capacity(groups.len());
        let mut traces = Vec::with_capacity(groups.len());
        for g in groups {
            let mean = g.mean();
            let ss: f64 = (0..g.n())
                .map(|i| {
                    g.row(i)
                        .iter()
                        .zip(&mean)
                        .map(|(x, m)| (x - m) * (x - m))
                        .sum::<f64>()
                })
                .sum();
            traces.push(ss / (g.n() as f64 - 1.0));
            means.push(mean);
        }
        GroupMoments {
            sizes: groups.iter().map(SampleMatrix::n).collect(),
            means,
            traces,
        }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `||xbar_l - xbar_s||^2`.
    pub fn mean_distance_sq(&self, l: usize, s: usize) -> f64 {
        self.means[l]
            .iter()
            .zip(&self.means[s])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `T = (1/n) sum_{l<s} n_l n_s ||xbar_l - xbar_s||^2
    ///      - sum_l (n - n_l)/n tr(S_l)`,
    /// an algebraic rearrangement of the defining double sums that is exactly
    /// location invariant.
    pub fn statistic_t(&self) -> f64 {
        let n = self.total() as f64;
        let k = self.k();
        let mut between = 0.0;
        for l in 0..k {
            for s in (l + 1)..k {
                between += (self.sizes[l] * self.sizes[s]) as f64 * self.mean_distance_sq(l, s);
            }
        }
        let within: f64 = self
            .sizes
            .iter()
            .zip(&self.traces)
            .map(|(&nl, &tr)| (n - nl as f64) * tr)
            .sum();
        (between - within) / n
    }

    /// `T_CH = sum_{l<s} ||xbar_l - xbar_s||^2 - (k-1) sum_l tr(S_l)/n_l`.
    pub fn statistic_tch(&self) -> f64 {
        let k = self.k();
        let mut between = 0.0;
        for l in 0..k {
            for s in (l + 1)..k {
                between += self.mean_distance_sq(l, s);
            }
        }
        let within: f64 = self
            .sizes
            .iter()
            .zip(&self.traces)
            .map(|(&nl, &tr)| tr / nl as f64)
            .sum();
        between - (k as f64 - 1.0) * within
    }
}

/// [`GroupMoments`] plus the centered Gram matrix.
#[derive(Clone, Debug)]
pub struct GramStats {
    pub moments: GroupMoments,
    offsets: Vec<usize>,
    gram: Matrix,
}

impl GramStats {
    pub fn new(data: &GroupedData) -> Self {
        GramStats::from_groups(data.groups())
    }

    /// Groups must share a dimension; a single group is allowed.
    pub fn from_groups(groups: &[SampleMatrix]) -> Self {
        let moments = GroupMoments::from_groups(groups);
        let p = groups.first().map_or(0, SampleMatrix::p);
        let n = moments.total();
        let mut offsets = Vec::with_capacity(groups.len() + 1);
        let mut centered = Vec::with_capacity(n * p);
        offsets.push(0);
        for (g, mean) in groups.iter().zip(&moments.means) {
            for i in 0..g.n() {
                centered.extend(g.row(i).iter().zip(mean).map(|(x, m)| x - m));
            }
            offsets.push(offsets.last().unwrap() + g.n());
        }
        let gram = Matrix::from_vec(n, p, centered)
            .expect("buffer sized n*p")
            .gram();
        GramStats {
            moments,
            offsets,
            gram,
        }
    }

    pub fn k(&self) -> usize {
        self.moments.k()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.moments.sizes
    }

    fn range(&self, l: usize) -> Range<usize> {
        self.offsets[l]..self.offsets[l + 1]
    }

    fn block_sq(&self, a: Range<usize>, b: Range<usize>) -> f64 {
        a.map(|i| {
            let row = &self.gram.row(i)[b.clone()];
            dot(row, row)
        })
        .sum()
    }

    /// `sum_{i in a, j in b} (C_ij - rowmean_i - colmean_j + mean)^2`, the
    /// squared Frobenius norm of the cross product of the two row sets after
    /// centering each set by its own mean.
    fn recentered_block_sq(&self, a: Range<usize>, b: Range<usize>) -> f64 {
        let na = a.len() as f64;
        let nb = b.len() as f64;
        let row_means: Vec<f64> = a
            .clone()
            .map(|i| self.gram.row(i)[b.clone()].iter().sum::<f64>() / nb)
            .collect();
        let mut col_means = vec![0.0; b.len()];
        for i in a.clone() {
            for (acc, x) in col_means.iter_mut().zip(&self.gram.row(i)[b.clone()]) {
                *acc += x / na;
            }
        }
        let grand = row_means.iter().sum::<f64>() / na;
        let mut acc = 0.0;
        for (i, rm) in a.zip(&row_means) {
            for (x, cm) in self.gram.row(i)[b.clone()].iter().zip(&col_means) {
                let v = x - rm - cm + grand;
                acc += v * v;
            }
        }
        acc
    }

    /// `tr(S_l S_s)`; with `l == s` this is `tr(S_l^2)`.
    pub fn trace_cross(&self, l: usize, s: usize) -> f64 {
        let nl = self.sizes()[l] as f64;
        let ns = self.sizes()[s] as f64;
        self.block_sq(self.range(l), self.range(s)) / ((nl - 1.0) * (ns - 1.0))
    }

    /// `tr(S_{l,1} S_{l,2})` over the two split halves of group `l`.
    pub fn split_trace(&self, l: usize) -> Result<f64> {
        let nl = self.sizes()[l];
        if nl < MIN_SPLIT_SIZE {
            return Err(Error::GroupTooSmall {
                group: l,
                size: nl,
                required: MIN_SPLIT_SIZE,
            });
        }
        let (n1, n2) = split_sizes(nl);
        let start = self.offsets[l];
        let first = start..start + n1;
        let second = start + n1..start + nl;
        Ok(self.recentered_block_sq(first, second) / ((n1 as f64 - 1.0) * (n2 as f64 - 1.0)))
    }

    /// Bias-corrected `tr(Sigma_l^2)` estimate
    /// `(n-1)^2 / ((n+1)(n-2)) * (tr(S^2) - tr(S)^2 / (n-1))`.
    pub fn bs_trace(&self, l: usize) -> Result<f64> {
        let nl = self.sizes()[l];
        if nl < 3 {
            return Err(Error::GroupTooSmall {
                group: l,
                size: nl,
                required: 3,
            });
        }
        Ok(bs_correction(
            nl,
            self.trace_cross(l, l),
            self.moments.traces[l],
        ))
    }

    /// `k x k` matrix of `tr(S_l S_s)` (diagonal is `tr(S_l^2)`).
    pub fn cross_traces(&self) -> Matrix {
        let k = self.k();
        let mut m = Matrix::zeros(k, k);
        for l in 0..k {
            for s in l..k {
                let v = self.trace_cross(l, s);
                m[(l, s)] = v;
                m[(s, l)] = v;
            }
        }
        m
    }
}

pub(crate) fn bs_correction(n: usize, tr_s2: f64, tr_s: f64) -> f64 {
    let n = n as f64;
    (n - 1.0) * (n - 1.0) / ((n + 1.0) * (n - 2.0)) * (tr_s2 - tr_s * tr_s / (n - 1.0))
}
